#pragma once

#include "spslab/types.hpp"

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace spslab {

/// Closed convex set with an exact orthogonal projector.
///
/// Only kinds whose projector has a closed form are supported; a general
/// polyhedron is accepted only when it reduces to one of them (single
/// half-space, hyperplane, or an axis-aligned slab product).
class ConvexSet {
public:
    virtual ~ConvexSet() = default;

    virtual int dim() const = 0;
    virtual std::string kind() const = 0;

    /// Nearest point of the set to x.
    virtual Vector project(const Vector& x) const = 0;

    virtual bool bounded() const = 0;

    /// sup{ ||x|| : x in C }; only valid when bounded().
    virtual double norm_bound() const = 0;

    bool contains(const Vector& x, double tol = 0.0) const;
};

using ConvexSetPtr = std::shared_ptr<const ConvexSet>;

/// {x : <a,x> <= beta}, a != 0.
ConvexSetPtr make_halfspace(const Vector& a, double beta);

/// {x : <a,x> = beta}, a != 0.
ConvexSetPtr make_hyperplane(const Vector& a, double beta);

/// {x : ||x - center|| <= radius}, radius >= 0.
ConvexSetPtr make_ball(const Vector& center, double radius);

/// {x : lo <= x <= hi} componentwise; entries may be +-inf.
ConvexSetPtr make_box(const Vector& lo, const Vector& hi);

/// Intersection of half-spaces. Supported only when the projection has an
/// exact closed form: a single half-space, or all normals axis-aligned
/// (the set is then a slab product). Anything else throws.
ConvexSetPtr make_polyhedron(const std::vector<std::pair<Vector, double>>& halfspaces);

/// Gradient of x -> (1/2) dist(x, C)^2, i.e. x - P_C(x).
Vector sq_dist_grad(const ConvexSet& set, const Vector& x);

/// One step of the relaxed random projection iteration:
/// x - t (x - P_C x) with relaxation t = lambda_k * min(1/2, gamma_init/lambda0).
/// The arithmetic mirrors the SGD update on (1/2) d_C^2 exactly.
Vector relaxed_projection_step(const ConvexSet& set, const Vector& x,
                               double lambda_k, double lambda0, double gamma_init);

} // namespace spslab
