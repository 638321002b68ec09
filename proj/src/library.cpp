#include "spslab/library.hpp"

#include <stdexcept>

namespace spslab {

namespace {

Vector vec1(double a) {
    Vector v(1);
    v << a;
    return v;
}

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

ProblemInstance two_quadratic() {
    std::vector<ConvexComponent> comps{make_quadratic(vec1(1.0), 1.0),
                                       make_quadratic(vec1(-1.0), 1.0)};
    FiniteSumProblem p(std::move(comps), 1);
    p.optimal_value = 0.5; // f(x) = (x^2 + 1)/2
    p.full_minimizer = vec1(0.0);
    return {"two-quadratic", "two shifted 1-D quadratics, b=1 (C2)", std::move(p), {}};
}

ProblemInstance interpolation_quadratic() {
    const Vector c = vec1(0.7);
    std::vector<ConvexComponent> comps{make_quadratic(c, 1.0), make_quadratic(c, 2.0),
                                       make_quadratic(c, 0.5)};
    FiniteSumProblem p(std::move(comps), 1);
    p.optimal_value = 0.0;
    p.full_minimizer = c;
    return {"interpolation-quadratic",
            "three quadratics sharing a minimizer, b=1 (C2, interpolation)", std::move(p),
            {}};
}

ProblemInstance softplus_quadratic() {
    std::vector<ConvexComponent> comps{make_softplus(vec1(1.0)),
                                       make_quadratic(vec1(1.0), 1.0)};
    FiniteSumProblem p(std::move(comps), 1);
    return {"softplus-quadratic", "softplus (no minimizer) plus quadratic, b=1 (C1)",
            std::move(p), {}};
}

ProblemInstance softplus_divergence() {
    // shallow softplus: the adversarial fixed-batch run escapes past 10^3
    // within 10^6 steps while its gradient dies out
    std::vector<ConvexComponent> comps{make_softplus(vec1(0.004)),
                                       make_quadratic(vec1(0.0), 1.0)};
    FiniteSumProblem p(std::move(comps), 1);
    return {"softplus-divergence", "shallow softplus plus quadratic, b=1 (C1)",
            std::move(p), {}};
}

ProblemInstance one_sided_mix() {
    std::vector<ConvexComponent> comps{make_one_sided_quadratic(),
                                       make_quadratic(vec1(-1.0), 1.0)};
    FiniteSumProblem p(std::move(comps), 1);
    p.optimal_value = 0.0; // both components vanish at x = -1
    p.full_minimizer = vec1(-1.0);
    return {"one-sided-mix",
            "one-sided quadratic (unbounded argmin) plus quadratic, b=1 (C2)",
            std::move(p), {}};
}

ProblemInstance ball_sqdist() {
    std::vector<ConvexSetPtr> sets{make_ball(vec2(0.0, 0.0), 1.0),
                                   make_ball(vec2(1.0, 0.0), 1.0)};
    std::vector<ConvexComponent> comps{make_sq_dist(sets[0]), make_sq_dist(sets[1])};
    FiniteSumProblem p(std::move(comps), 1);
    p.optimal_value = 0.0; // the balls overlap
    p.full_minimizer = vec2(0.5, 0.0);
    return {"ball-sqdist", "squared distances to two overlapping balls, b=1 (C2)",
            std::move(p), std::move(sets)};
}

ProblemInstance halfspace_sqdist() {
    std::vector<ConvexSetPtr> sets{make_halfspace(vec2(1.0, 0.0), 0.0),
                                   make_halfspace(vec2(0.0, 1.0), 0.0)};
    std::vector<ConvexComponent> comps{make_sq_dist(sets[0]), make_sq_dist(sets[1])};
    FiniteSumProblem p(std::move(comps), 1);
    p.optimal_value = 0.0;
    p.full_minimizer = vec2(0.0, 0.0);
    return {"halfspace-sqdist", "squared distances to two half-spaces, b=1 (C3)",
            std::move(p), std::move(sets)};
}

ProblemInstance polyhedral_sqdist() {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<ConvexSetPtr> sets{
        make_box(vec2(-inf, -inf), vec2(0.0, 0.0)),            // nonpositive orthant
        make_polyhedron({{vec2(1.0, 0.0), 1.0}, {vec2(-1.0, 0.0), 1.0}}), // slab |x1|<=1
        make_halfspace(vec2(1.0, 1.0), -1.0)};
    std::vector<ConvexComponent> comps{make_sq_dist(sets[0]), make_sq_dist(sets[1]),
                                       make_sq_dist(sets[2])};
    FiniteSumProblem p(std::move(comps), 1);
    p.optimal_value = 0.0; // (0,-1) lies in all three sets
    p.full_minimizer = vec2(0.0, -1.0);
    return {"polyhedral-sqdist",
            "squared distances to three unbounded polyhedral sets, b=1 (C3)",
            std::move(p), std::move(sets)};
}

} // namespace

std::vector<std::string> library_instance_names() {
    return {"two-quadratic",     "interpolation-quadratic", "softplus-quadratic",
            "softplus-divergence", "one-sided-mix",         "ball-sqdist",
            "halfspace-sqdist",  "polyhedral-sqdist"};
}

ProblemInstance make_library_instance(const std::string& name) {
    if (name == "two-quadratic") return two_quadratic();
    if (name == "interpolation-quadratic") return interpolation_quadratic();
    if (name == "softplus-quadratic") return softplus_quadratic();
    if (name == "softplus-divergence") return softplus_divergence();
    if (name == "one-sided-mix") return one_sided_mix();
    if (name == "ball-sqdist") return ball_sqdist();
    if (name == "halfspace-sqdist") return halfspace_sqdist();
    if (name == "polyhedral-sqdist") return polyhedral_sqdist();
    throw std::invalid_argument("unknown library instance: " + name);
}

} // namespace spslab
