#include "spslab/projections.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spslab {

namespace {

void check_dim(const ConvexSet& set, const Vector& x) {
    if (x.size() != set.dim())
        throw std::invalid_argument("projection: dimension mismatch (" +
                                    std::to_string(x.size()) + " vs " +
                                    std::to_string(set.dim()) + ")");
}

class Halfspace final : public ConvexSet {
public:
    Halfspace(Vector a, double beta) : a_(std::move(a)), beta_(beta) {
        if (a_.squaredNorm() == 0.0)
            throw std::invalid_argument("halfspace: zero normal");
    }
    int dim() const override { return static_cast<int>(a_.size()); }
    std::string kind() const override { return "halfspace"; }
    Vector project(const Vector& x) const override {
        check_dim(*this, x);
        const double excess = a_.dot(x) - beta_;
        if (excess <= 0.0) return x;
        return x - (excess / a_.squaredNorm()) * a_;
    }
    bool bounded() const override { return false; }
    double norm_bound() const override {
        throw std::logic_error("halfspace: unbounded");
    }

private:
    Vector a_;
    double beta_;
};

class Hyperplane final : public ConvexSet {
public:
    Hyperplane(Vector a, double beta) : a_(std::move(a)), beta_(beta) {
        if (a_.squaredNorm() == 0.0)
            throw std::invalid_argument("hyperplane: zero normal");
    }
    int dim() const override { return static_cast<int>(a_.size()); }
    std::string kind() const override { return "hyperplane"; }
    Vector project(const Vector& x) const override {
        check_dim(*this, x);
        return x - ((a_.dot(x) - beta_) / a_.squaredNorm()) * a_;
    }
    bool bounded() const override { return dim() == 1; }
    double norm_bound() const override {
        if (!bounded()) throw std::logic_error("hyperplane: unbounded");
        return std::abs(beta_ / a_[0]);
    }

private:
    Vector a_;
    double beta_;
};

class Ball final : public ConvexSet {
public:
    Ball(Vector center, double radius) : center_(std::move(center)), radius_(radius) {
        if (radius_ < 0.0) throw std::invalid_argument("ball: negative radius");
    }
    int dim() const override { return static_cast<int>(center_.size()); }
    std::string kind() const override { return "ball"; }
    Vector project(const Vector& x) const override {
        check_dim(*this, x);
        const Vector d = x - center_;
        const double n = d.norm();
        if (n <= radius_) return x;
        return center_ + (radius_ / n) * d;
    }
    bool bounded() const override { return true; }
    double norm_bound() const override { return center_.norm() + radius_; }

private:
    Vector center_;
    double radius_;
};

class Box final : public ConvexSet {
public:
    Box(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_.size() != hi_.size())
            throw std::invalid_argument("box: bound size mismatch");
        for (Eigen::Index i = 0; i < lo_.size(); ++i)
            if (!(lo_[i] <= hi_[i]))
                throw std::invalid_argument("box: lo > hi at coordinate " +
                                            std::to_string(i));
    }
    int dim() const override { return static_cast<int>(lo_.size()); }
    std::string kind() const override { return "box"; }
    Vector project(const Vector& x) const override {
        check_dim(*this, x);
        return x.cwiseMax(lo_).cwiseMin(hi_);
    }
    bool bounded() const override {
        return lo_.allFinite() && hi_.allFinite();
    }
    double norm_bound() const override {
        if (!bounded()) throw std::logic_error("box: unbounded");
        return lo_.cwiseAbs().cwiseMax(hi_.cwiseAbs()).norm();
    }

private:
    Vector lo_, hi_;
};

} // namespace

bool ConvexSet::contains(const Vector& x, double tol) const {
    return (project(x) - x).norm() <= tol;
}

ConvexSetPtr make_halfspace(const Vector& a, double beta) {
    return std::make_shared<Halfspace>(a, beta);
}

ConvexSetPtr make_hyperplane(const Vector& a, double beta) {
    return std::make_shared<Hyperplane>(a, beta);
}

ConvexSetPtr make_ball(const Vector& center, double radius) {
    return std::make_shared<Ball>(center, radius);
}

ConvexSetPtr make_box(const Vector& lo, const Vector& hi) {
    return std::make_shared<Box>(lo, hi);
}

ConvexSetPtr make_polyhedron(const std::vector<std::pair<Vector, double>>& halfspaces) {
    if (halfspaces.empty())
        throw std::invalid_argument("polyhedron: no half-spaces");
    if (halfspaces.size() == 1)
        return make_halfspace(halfspaces[0].first, halfspaces[0].second);

    // Exact projection exists when every normal is axis-aligned: the set is
    // then a product of slabs, i.e. a box.
    const int d = static_cast<int>(halfspaces[0].first.size());
    const double inf = std::numeric_limits<double>::infinity();
    Vector lo = Vector::Constant(d, -inf);
    Vector hi = Vector::Constant(d, inf);
    for (const auto& [a, beta] : halfspaces) {
        if (a.size() != d)
            throw std::invalid_argument("polyhedron: inconsistent dimensions");
        int axis = -1;
        for (int i = 0; i < d; ++i) {
            if (a[i] != 0.0) {
                if (axis >= 0)
                    throw std::invalid_argument(
                        "polyhedron: no exact projection (non-axis-aligned normals)");
                axis = i;
            }
        }
        if (axis < 0) throw std::invalid_argument("polyhedron: zero normal");
        const double bound = beta / a[axis];
        if (a[axis] > 0.0)
            hi[axis] = std::min(hi[axis], bound);
        else
            lo[axis] = std::max(lo[axis], bound);
    }
    for (int i = 0; i < d; ++i)
        if (!(lo[i] <= hi[i]))
            throw std::invalid_argument("polyhedron: empty intersection");
    return make_box(lo, hi);
}

Vector sq_dist_grad(const ConvexSet& set, const Vector& x) {
    return x - set.project(x);
}

Vector relaxed_projection_step(const ConvexSet& set, const Vector& x,
                               double lambda_k, double lambda0, double gamma_init) {
    if (!(lambda_k > 0.0) || !(lambda0 > 0.0) || !(gamma_init > 0.0))
        throw std::invalid_argument("relaxed_projection_step: parameters must be positive");
    if (lambda_k > lambda0)
        throw std::invalid_argument("relaxed_projection_step: lambda_k > lambda0");
    const double t = lambda_k * std::min(0.5, gamma_init / lambda0);
    return x - t * sq_dist_grad(set, x);
}

} // namespace spslab
