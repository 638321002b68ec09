#include "spslab/analysis.hpp"

#include "spslab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace spslab {

VerifierReport verify_condition_31(const Trajectory& trajectory, double m, double tol) {
    VerifierReport report;
    report.check = "condition_3_1";
    report.worst_slack = std::numeric_limits<double>::infinity();
    for (const auto& r : trajectory.records) {
        const double slack = m * (r.fval - r.lower) - r.gamma * r.gradsq;
        if (slack < report.worst_slack) {
            report.worst_slack = slack;
            report.location_k = r.k;
        }
    }
    report.pass = report.worst_slack >= -tol;
    return report;
}

VerifierReport verify_descent_recursion(const Trajectory& trajectory,
                                        const FiniteSumProblem& problem, double m,
                                        double tol) {
    VerifierReport report;
    report.check = "descent_recursion";
    report.worst_slack = std::numeric_limits<double>::infinity();
    if (trajectory.record_stride != 1)
        throw std::invalid_argument("verify_descent_recursion: needs stride-1 records");
    const Vector zero = Vector::Zero(problem.dim());
    const auto& recs = trajectory.records;
    for (std::size_t j = 0; j < recs.size(); ++j) {
        const auto& r = recs[j];
        const Vector grad = problem.grad_batch(r.batch, r.x);
        const Vector x_next = r.x - r.gamma * grad;
        if (j + 1 < recs.size()) {
            // guard against stale records from another run
            if ((x_next - recs[j + 1].x).norm() > 1e-9 * (1.0 + x_next.norm()))
                throw std::invalid_argument(
                    "verify_descent_recursion: records do not replay");
        }
        const double f_b_zero = problem.eval_batch(r.batch, zero);
        const double rhs = r.x.squaredNorm() - (2.0 - m) * r.gamma * (r.fval - r.lower) +
                           2.0 * r.gamma * (f_b_zero - r.lower);
        const double slack = rhs - x_next.squaredNorm();
        if (slack < report.worst_slack) {
            report.worst_slack = slack;
            report.location_k = r.k;
        }
    }
    report.pass = report.worst_slack >= -tol;
    return report;
}

namespace {

// Minimize the smooth convex batch function by gradient descent with step
// 1/L_max; only used when no analytic oracle applies.
Vector minimize_batch(const FiniteSumProblem& problem, const Batch& batch) {
    Vector x = Vector::Zero(problem.dim());
    const double step = 1.0 / problem.l_max();
    for (long it = 0; it < 200000; ++it) {
        const Vector g = problem.grad_batch(batch, x);
        if (g.squaredNorm() <= 1e-24) break;
        x -= step * g;
    }
    return x;
}

// Largest r with f_B(x* + r d) <= xi along direction d, by doubling and
// bisection; assumes f_B(x*) <= xi.
double ray_radius(const FiniteSumProblem& problem, const Batch& batch,
                  const Vector& center, const Vector& dir, double xi) {
    double lo = 0.0, hi = 1.0;
    auto value = [&](double r) { return problem.eval_batch(batch, center + r * dir); };
    int guard = 0;
    while (value(hi) <= xi) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 200)
            throw InsufficientMetadata("ray_radius: level set appears unbounded");
    }
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (value(mid) <= xi ? lo : hi) = mid;
    }
    return lo;
}

} // namespace

BoundCertificate boundedness_certificate(const FiniteSumProblem& problem, double gamma,
                                         double m, const Vector& x0) {
    if (!(m < 2.0))
        throw std::invalid_argument("boundedness_certificate: requires m < 2");
    if (!(gamma > 0.0))
        throw std::invalid_argument("boundedness_certificate: requires gamma > 0");
    const CaseLabel label = classify_case(problem);
    if (label.label != Case::C2)
        throw std::invalid_argument(
            "boundedness_certificate: problem is not certified C2");

    BoundCertificate cert;
    cert.gamma = gamma;
    cert.m = m;
    cert.l_max = problem.l_max();

    const Vector zero = Vector::Zero(problem.dim());
    const auto batches = problem.all_batches();

    cert.D = -std::numeric_limits<double>::infinity();
    for (const auto& b : batches)
        cert.D = std::max(cert.D, problem.eval_batch(b, zero) - problem.batch_lower_bound(b));

    double max_minimizer_norm = 0.0;
    cert.M = 0.0;
    for (const auto& b : batches) {
        BatchCertificateRow row;
        row.batch = b;
        row.lower = problem.batch_lower_bound(b);
        row.level = row.lower + 2.0 * cert.D / (2.0 - m);

        if (problem.batch_size() == 1 && problem.component(b[0]).meta.level_radius) {
            const auto& comp = problem.component(b[0]);
            row.radius = comp.meta.level_radius(row.level);
            if (!comp.meta.minimizer_norm)
                throw InsufficientMetadata("boundedness_certificate: missing minimizer norm");
            row.minimizer_norm = *comp.meta.minimizer_norm;
        } else {
            const Vector xstar = minimize_batch(problem, b);
            row.minimizer_norm = xstar.norm();
            row.approximate = true;
            if (problem.eval_batch(b, xstar) + 1e-12 < row.level) {
                SplitMix64 rng(0x5EED5EEDULL);
                double radius = 0.0;
                for (int d = 0; d < 64; ++d) {
                    Vector dir(problem.dim());
                    for (int i = 0; i < problem.dim(); ++i) {
                        // Box-Muller from the deterministic word stream
                        const double u1 = rng.uniform01(), u2 = rng.uniform01();
                        dir[i] = std::sqrt(-2.0 * std::log(u1 + 1e-300)) *
                                 std::cos(6.283185307179586 * u2);
                    }
                    dir.normalize();
                    const double r = ray_radius(problem, b, xstar, dir, row.level);
                    radius = std::max(radius, (xstar + r * dir).norm());
                }
                row.radius = radius;
            }
        }
        if (row.radius) cert.M = std::max(cert.M, *row.radius);
        max_minimizer_norm = std::max(max_minimizer_norm, row.minimizer_norm);
        cert.per_batch.push_back(std::move(row));
    }

    const double shrink = gamma * cert.l_max / (1.0 + gamma * cert.l_max);
    cert.c = std::max(cert.M, shrink * max_minimizer_norm);
    const double blowup = 1.0 + gamma * cert.l_max;
    cert.bound = std::max(4.0 * cert.c * cert.c * blowup * blowup, x0.squaredNorm());
    return cert;
}

VerifierReport check_trajectory_bounded(const Trajectory& trajectory,
                                        const BoundCertificate& certificate,
                                        double tol) {
    VerifierReport report;
    report.check = "iterate_boundedness";
    const double max_sq = trajectory.checks.max_xnorm * trajectory.checks.max_xnorm;
    report.worst_slack = certificate.bound + tol - max_sq;
    report.pass = max_sq <= certificate.bound + tol;
    report.note = "max ||x_k||^2 = " + std::to_string(max_sq) + " vs bound " +
                  std::to_string(certificate.bound);
    return report;
}

namespace {

EnvelopeCurve build_curve(const std::vector<Trajectory>& ensemble,
                          const FiniteSumProblem& problem,
                          const std::function<double(long)>& envelope_at) {
    if (ensemble.size() < 2)
        throw std::invalid_argument("rate envelope: need an ensemble of runs");
    if (!problem.optimal_value)
        throw InsufficientMetadata("rate envelope: optimal value unknown");
    const double mu = *problem.optimal_value;
    std::size_t len = std::numeric_limits<std::size_t>::max();
    for (const auto& t : ensemble) {
        if (t.record_stride != 1)
            throw std::invalid_argument("rate envelope: needs stride-1 records");
        len = std::min(len, t.records.size());
    }

    EnvelopeCurve curve;
    const double n = static_cast<double>(ensemble.size());
    curve.pass = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < len; ++j) {
        const long k = static_cast<long>(j) + 1; // records[j].xbar averages k iterates
        double mean = 0.0, sq = 0.0;
        for (const auto& t : ensemble) {
            const double v = t.records[j].avg_fval - mu;
            mean += v;
            sq += v * v;
        }
        mean /= n;
        const double var = std::max(0.0, sq / n - mean * mean);
        const double se = std::sqrt(var / n);
        const double env = envelope_at(k);
        curve.ks.push_back(k);
        curve.empirical.push_back(mean);
        curve.stderr_.push_back(se);
        curve.envelope.push_back(env);
        const double margin = env + 3.0 * se - mean;
        if (margin < worst_margin) {
            worst_margin = margin;
            curve.worst_k = k;
        }
        if (margin < 0.0) curve.pass = false;
    }
    return curve;
}

} // namespace

EnvelopeCurve rate_envelope_decsps(const std::vector<Trajectory>& ensemble,
                                   const FiniteSumProblem& problem,
                                   const LambdaSchedule& schedule, double gamma_init,
                                   double sigma_b_sq) {
    if (!problem.full_minimizer)
        throw InsufficientMetadata("rate envelope: minimizer unknown");
    const Vector& xstar = *problem.full_minimizer;
    double m_emp = 0.0;
    for (const auto& t : ensemble) {
        for (const auto& r : t.records)
            m_emp = std::max(m_emp, (r.x - xstar).squaredNorm());
        m_emp = std::max(m_emp, (t.final_x - xstar).squaredNorm());
    }
    const double alpha =
        std::min(1.0 / (2.0 * problem.l_max()), gamma_init / schedule.lambda0());

    // running sum of lambda_i reused across k
    std::vector<double> lambda_prefix;
    auto envelope_at = [&, m_emp, alpha](long k) {
        while (static_cast<long>(lambda_prefix.size()) < k) {
            const long i = static_cast<long>(lambda_prefix.size());
            lambda_prefix.push_back((lambda_prefix.empty() ? 0.0 : lambda_prefix.back()) +
                                    schedule(i));
        }
        return (m_emp / alpha) / (schedule(k - 1) * static_cast<double>(k)) +
               sigma_b_sq * lambda_prefix[k - 1] / static_cast<double>(k);
    };
    EnvelopeCurve curve = build_curve(ensemble, problem, envelope_at);
    curve.alpha = alpha;
    curve.noise_term = sigma_b_sq;
    return curve;
}

EnvelopeCurve rate_envelope_sps(const std::vector<Trajectory>& ensemble,
                                const FiniteSumProblem& problem, double gamma_init,
                                double sigma_sq) {
    if (problem.batch_size() != 1)
        throw std::invalid_argument("rate_envelope_sps: defined for b = 1");
    if (!problem.full_minimizer)
        throw InsufficientMetadata("rate envelope: minimizer unknown");
    const Vector& xstar = *problem.full_minimizer;
    const double dist0 = (ensemble.front().records.front().x - xstar).squaredNorm();
    const double alpha = std::min(1.0 / (2.0 * problem.l_max()), gamma_init);
    auto envelope_at = [dist0, alpha, sigma_sq, gamma_init](long k) {
        return dist0 / (alpha * static_cast<double>(k)) +
               2.0 * sigma_sq * gamma_init / alpha;
    };
    EnvelopeCurve curve = build_curve(ensemble, problem, envelope_at);
    curve.alpha = alpha;
    curve.noise_term = sigma_sq;
    return curve;
}

double sigma_sq_from_lower_bounds(const FiniteSumProblem& problem) {
    if (!problem.optimal_value)
        throw InsufficientMetadata("sigma_sq: optimal value unknown");
    double mean = 0.0;
    for (const auto& c : problem.components()) mean += c.lower;
    mean /= static_cast<double>(problem.num_components());
    return *problem.optimal_value - mean;
}

double sigma_b_sq_from_lower_bounds(const FiniteSumProblem& problem) {
    if (!problem.optimal_value)
        throw InsufficientMetadata("sigma_b_sq: optimal value unknown");
    double mean = 0.0;
    const auto batches = problem.all_batches();
    for (const auto& b : batches) mean += problem.batch_lower_bound(b);
    mean /= static_cast<double>(batches.size());
    return *problem.optimal_value - mean;
}

double cesaro_mean(const std::vector<double>& sequence, long k) {
    if (k < 1 || k > static_cast<long>(sequence.size()))
        throw std::invalid_argument("cesaro_mean: k out of range");
    double s = 0.0;
    for (long i = 0; i < k; ++i) s += sequence[i];
    return s / static_cast<double>(k);
}

double cesaro_mean(const LambdaSchedule& schedule, long k) {
    if (k < 1) throw std::invalid_argument("cesaro_mean: k must be >= 1");
    double s = 0.0;
    for (long i = 0; i < k; ++i) s += schedule(i);
    return s / static_cast<double>(k);
}

double lemma26_gap(const ConvexComponent& component, const Vector& x) {
    if (!(component.smoothness > 0.0))
        throw std::invalid_argument("lemma26_gap: needs L > 0");
    return component.eval(x) - component.lower -
           component.grad(x).squaredNorm() / (2.0 * component.smoothness);
}

} // namespace spslab
