#include "spslab/problems.hpp"

#include "spslab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace spslab {

FiniteSumProblem::FiniteSumProblem(std::vector<ConvexComponent> components, int batch_size)
    : components_(std::move(components)), batch_size_(batch_size) {
    if (components_.empty())
        throw std::invalid_argument("problem: no components");
    dim_ = components_.front().dim;
    for (const auto& c : components_) {
        if (c.dim != dim_)
            throw std::invalid_argument("problem: components disagree on dimension");
        if (c.smoothness < 0.0)
            throw std::invalid_argument("problem: negative smoothness constant");
    }
    if (batch_size_ < 1 || batch_size_ > num_components())
        throw std::invalid_argument("problem: batch size must be in [1, N]");
    l_max_ = 0.0;
    for (const auto& c : components_) l_max_ = std::max(l_max_, c.smoothness);
}

void FiniteSumProblem::validate_batch(const Batch& batch) const {
    if (static_cast<int>(batch.size()) != batch_size_)
        throw std::invalid_argument("batch: wrong size " + std::to_string(batch.size()) +
                                    ", expected " + std::to_string(batch_size_));
    for (std::size_t j = 0; j < batch.size(); ++j) {
        if (batch[j] < 0 || batch[j] >= num_components())
            throw std::invalid_argument("batch: index out of range");
        if (j > 0 && batch[j] <= batch[j - 1])
            throw std::invalid_argument("batch: indices must be strictly increasing");
    }
}

double FiniteSumProblem::eval_batch(const Batch& batch, const Vector& x) const {
    validate_batch(batch);
    if (x.size() != dim_)
        throw std::invalid_argument("eval_batch: dimension mismatch");
    double s = 0.0;
    for (Index i : batch) s += components_[i].eval(x);
    return s / static_cast<double>(batch_size_);
}

Vector FiniteSumProblem::grad_batch(const Batch& batch, const Vector& x) const {
    validate_batch(batch);
    if (x.size() != dim_)
        throw std::invalid_argument("grad_batch: dimension mismatch");
    Vector g = Vector::Zero(dim_);
    for (Index i : batch) g += components_[i].grad(x);
    return g / static_cast<double>(batch_size_);
}

double FiniteSumProblem::batch_lower_bound(const Batch& batch) const {
    validate_batch(batch);
    double s = 0.0;
    for (Index i : batch) s += components_[i].lower;
    return s / static_cast<double>(batch_size_);
}

double FiniteSumProblem::batch_smoothness(const Batch& batch) const {
    validate_batch(batch);
    double s = 0.0;
    for (Index i : batch) s += components_[i].smoothness;
    return std::min(l_max_, s / static_cast<double>(batch_size_));
}

double FiniteSumProblem::eval_full(const Vector& x) const {
    double s = 0.0;
    for (const auto& c : components_) s += c.eval(x);
    return s / static_cast<double>(num_components());
}

Vector FiniteSumProblem::grad_full(const Vector& x) const {
    Vector g = Vector::Zero(dim_);
    for (const auto& c : components_) g += c.grad(x);
    return g / static_cast<double>(num_components());
}

std::vector<Batch> FiniteSumProblem::all_batches() const {
    const std::uint64_t total = binomial(num_components(), batch_size_);
    std::vector<Batch> out;
    out.reserve(total);
    for (std::uint64_t r = 0; r < total; ++r)
        out.push_back(unrank_combination(num_components(), batch_size_, r));
    return out;
}

void FiniteSumProblem::flag_no_minimizer_batch(Batch batch) {
    validate_batch(batch);
    no_minimizer_batches_.push_back(std::move(batch));
}

namespace {

// What the certified metadata lets us decide about one batch function.
struct BatchFacts {
    enum Tri { yes, no, unknown };
    Tri has_minimizer = unknown;
    Tri lev_bounded = unknown; // lev \ argmin bounded at every height
};

BatchFacts decide(const FiniteSumProblem& p, const Batch& batch) {
    BatchFacts facts;
    for (const auto& flagged : p.flagged_no_minimizer_batches()) {
        if (flagged == batch) {
            facts.has_minimizer = BatchFacts::no;
            return facts;
        }
    }
    // An average containing a coercive summand (the rest bounded below) is
    // coercive, hence has a minimizer and bounded level sets.
    bool any_coercive = false;
    for (Index i : batch) any_coercive |= p.component(i).meta.coercive;
    if (any_coercive) {
        facts.has_minimizer = BatchFacts::yes;
        facts.lev_bounded = BatchFacts::yes;
        return facts;
    }
    if (p.batch_size() == 1) {
        const auto& meta = p.component(batch[0]).meta;
        facts.has_minimizer = meta.has_minimizer ? BatchFacts::yes : BatchFacts::no;
        if (meta.lev_minus_argmin_bounded)
            facts.lev_bounded =
                *meta.lev_minus_argmin_bounded ? BatchFacts::yes : BatchFacts::no;
    }
    return facts;
}

} // namespace

CaseLabel classify_case(const FiniteSumProblem& problem) {
    const auto batches = problem.all_batches();
    std::vector<BatchFacts> facts;
    facts.reserve(batches.size());
    for (const auto& b : batches) facts.push_back(decide(problem, b));

    for (std::size_t j = 0; j < batches.size(); ++j)
        if (facts[j].has_minimizer == BatchFacts::no)
            return {Case::C1, batches[j]};

    bool all_min = true, all_bounded = true;
    for (const auto& f : facts) {
        if (f.has_minimizer != BatchFacts::yes) all_min = false;
        if (f.lev_bounded != BatchFacts::yes) all_bounded = false;
    }
    if (all_min && all_bounded) return {Case::C2, std::nullopt};

    if (all_min) {
        for (std::size_t j = 0; j < batches.size(); ++j)
            if (facts[j].lev_bounded == BatchFacts::no) return {Case::C3, batches[j]};
    }
    throw InsufficientMetadata(
        "classify_case: certified metadata does not decide the trichotomy");
}

ConvexComponent make_quadratic(const Vector& c, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("make_quadratic: scale must be > 0");
    ConvexComponent comp;
    comp.name = "quadratic";
    comp.dim = static_cast<int>(c.size());
    comp.eval = [c, scale](const Vector& x) { return 0.5 * scale * (x - c).squaredNorm(); };
    comp.grad = [c, scale](const Vector& x) -> Vector { return scale * (x - c); };
    comp.smoothness = scale;
    comp.lower = 0.0;
    comp.meta.has_minimizer = true;
    comp.meta.coercive = true;
    comp.meta.lev_minus_argmin_bounded = true;
    comp.meta.minimizer = c;
    comp.meta.minimizer_norm = c.norm();
    const double cnorm = c.norm();
    comp.meta.level_radius = [cnorm, scale](double xi) -> std::optional<double> {
        if (xi <= 0.0) return std::nullopt; // level set is {c} or empty
        return cnorm + std::sqrt(2.0 * xi / scale);
    };
    return comp;
}

ConvexComponent make_softplus(const Vector& a) {
    if (a.squaredNorm() == 0.0)
        throw std::invalid_argument("make_softplus: direction must be nonzero");
    ConvexComponent comp;
    comp.name = "softplus";
    comp.dim = static_cast<int>(a.size());
    comp.eval = [a](const Vector& x) {
        const double t = a.dot(x);
        // ln(1 + e^{-t}) without overflow on either tail
        return t >= 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
    };
    comp.grad = [a](const Vector& x) -> Vector {
        const double t = a.dot(x);
        const double sig = t >= 0.0 ? std::exp(-t) / (1.0 + std::exp(-t))
                                    : 1.0 / (1.0 + std::exp(t));
        return -sig * a;
    };
    comp.smoothness = a.squaredNorm() / 4.0;
    comp.lower = 0.0;
    comp.meta.has_minimizer = false;
    comp.meta.coercive = false;
    comp.meta.lev_minus_argmin_bounded = false;
    return comp;
}

ConvexComponent make_sq_dist(ConvexSetPtr set) {
    if (!set) throw std::invalid_argument("make_sq_dist: null set");
    ConvexComponent comp;
    comp.name = "sq_dist_" + set->kind();
    comp.dim = set->dim();
    // eval and grad share the residual arithmetic so that the Polyak ratio
    // f / ||grad||^2 is exactly 1/2 outside the set.
    comp.eval = [set](const Vector& x) { return 0.5 * sq_dist_grad(*set, x).squaredNorm(); };
    comp.grad = [set](const Vector& x) { return sq_dist_grad(*set, x); };
    comp.smoothness = 1.0;
    comp.lower = 0.0;
    comp.meta.has_minimizer = true;
    const Vector min_norm_point = set->project(Vector::Zero(set->dim()));
    comp.meta.minimizer = min_norm_point;
    comp.meta.minimizer_norm = min_norm_point.norm();
    const bool bounded_set = set->bounded();
    comp.meta.coercive = bounded_set;
    comp.meta.lev_minus_argmin_bounded = bounded_set;
    if (bounded_set) {
        // lev_xi (1/2 d^2) = C + ball(sqrt(2 xi))
        const double set_bound = set->norm_bound();
        comp.meta.level_radius = [set_bound](double xi) -> std::optional<double> {
            if (xi <= 0.0) return std::nullopt;
            return set_bound + std::sqrt(2.0 * xi);
        };
    }
    return comp;
}

ConvexComponent make_one_sided_quadratic() {
    ConvexComponent comp;
    comp.name = "one_sided_quadratic";
    comp.dim = 1;
    comp.eval = [](const Vector& x) {
        const double p = std::max(0.0, x[0]);
        return 0.5 * p * p;
    };
    comp.grad = [](const Vector& x) -> Vector {
        Vector g(1);
        g[0] = std::max(0.0, x[0]);
        return g;
    };
    comp.smoothness = 1.0;
    comp.lower = 0.0;
    comp.meta.has_minimizer = true;
    comp.meta.coercive = false;
    comp.meta.lev_minus_argmin_bounded = true;
    comp.meta.minimizer = Vector::Zero(1); // min-norm point of (-inf, 0]
    comp.meta.minimizer_norm = 0.0;
    comp.meta.level_radius = [](double xi) -> std::optional<double> {
        if (xi <= 0.0) return std::nullopt; // lev \ argmin = (0, sqrt(2 xi)]
        return std::sqrt(2.0 * xi);
    };
    return comp;
}

} // namespace spslab
