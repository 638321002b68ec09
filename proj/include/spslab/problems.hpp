#pragma once

#include "spslab/projections.hpp"
#include "spslab/types.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spslab {

/// Thrown when a case classification or a certificate cannot be decided
/// from the metadata the instance constructors certified.
class InsufficientMetadata : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Metadata certified by the instance constructor. Classification and the
/// boundedness certificate rely on these fields, not on probing.
struct ComponentMeta {
    bool has_minimizer = false;
    bool coercive = false;
    /// Whether lev_xi f \ argmin f is bounded for every xi; unset = unknown.
    std::optional<bool> lev_minus_argmin_bounded;
    /// Min-norm minimizer, when one exists and is known.
    std::optional<Vector> minimizer;
    std::optional<double> minimizer_norm;
    /// xi -> upper bound on sup{ ||x|| : x in lev_xi f \ argmin f };
    /// nullopt when that set is empty at height xi.
    std::function<std::optional<double>(double)> level_radius;
};

/// One summand f_i: convex, L-smooth, bounded below by `lower`.
struct ConvexComponent {
    std::string name;
    int dim = 0;
    std::function<double(const Vector&)> eval;
    std::function<Vector(const Vector&)> grad;
    double smoothness = 0.0; // L_i >= 0
    double lower = 0.0;      // certified lower bound <= inf f_i
    ComponentMeta meta;
};

/// f = (1/N) sum f_i with a fixed batch size b, 1 <= b <= N.
class FiniteSumProblem {
public:
    FiniteSumProblem(std::vector<ConvexComponent> components, int batch_size);

    int dim() const { return dim_; }
    int num_components() const { return static_cast<int>(components_.size()); }
    int batch_size() const { return batch_size_; }
    const ConvexComponent& component(int i) const { return components_.at(i); }
    const std::vector<ConvexComponent>& components() const { return components_; }

    double l_max() const { return l_max_; }

    /// f_B(x) = (1/b) sum_{i in B} f_i(x).
    double eval_batch(const Batch& batch, const Vector& x) const;
    Vector grad_batch(const Batch& batch, const Vector& x) const;

    /// (1/b) sum_{i in B} lower_i <= inf f_B.
    double batch_lower_bound(const Batch& batch) const;

    /// min(L_max, averaged smoothness constant of the batch).
    double batch_smoothness(const Batch& batch) const;

    /// Full objective f and its gradient.
    double eval_full(const Vector& x) const;
    Vector grad_full(const Vector& x) const;

    /// All size-b batches in lexicographic order.
    std::vector<Batch> all_batches() const;

    /// Batches certified by the builder to average to a function with no
    /// minimizer (only needed for b > 1; for b = 1 component metadata decides).
    void flag_no_minimizer_batch(Batch batch);
    const std::vector<Batch>& flagged_no_minimizer_batches() const {
        return no_minimizer_batches_;
    }

    /// Known optimum of the full objective, when the builder certifies it.
    std::optional<double> optimal_value;
    std::optional<Vector> full_minimizer;

    void validate_batch(const Batch& batch) const;

private:
    std::vector<ConvexComponent> components_;
    int batch_size_;
    int dim_;
    double l_max_;
    std::vector<Batch> no_minimizer_batches_;
};

enum class Case { C1, C2, C3 };

struct CaseLabel {
    Case label;
    std::optional<Batch> witness;
};

/// Metadata-driven trichotomy over the size-b batches: C1 when some batch
/// has no minimizer, C2 when every batch has a minimizer and bounded
/// lev \ argmin, C3 otherwise (with a witness batch). Throws
/// InsufficientMetadata when the certified metadata cannot decide.
CaseLabel classify_case(const FiniteSumProblem& problem);

// Instance constructors. Each certifies its own metadata exactly.

/// f(x) = (a/2) ||x - c||^2.
ConvexComponent make_quadratic(const Vector& c, double scale);

/// f(x) = ln(1 + exp(-<a,x>)), a != 0; convex, bounded below, no minimizer.
ConvexComponent make_softplus(const Vector& a);

/// f(x) = (1/2) dist(x, C)^2 with exact projector C.
ConvexComponent make_sq_dist(ConvexSetPtr set);

/// 1-D f(x) = (1/2) max(0, x)^2: unbounded argmin, bounded lev \ argmin.
ConvexComponent make_one_sided_quadratic();

} // namespace spslab
