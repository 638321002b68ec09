#pragma once

#include "spslab/engine.hpp"
#include "spslab/problems.hpp"
#include "spslab/stepsize.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spslab {

struct VerifierReport {
    std::string check;
    bool pass = false;
    double worst_slack = 0.0; // >= 0 (up to tolerance) means the inequality held
    long location_k = -1;     // iteration attaining the worst slack
    std::string note;
};

/// gamma_k ||grad||^2 <= m (f - lower) at every recorded step.
VerifierReport verify_condition_31(const Trajectory& trajectory, double m,
                                   double tol = 1e-10);

/// ||x_{k+1}||^2 <= ||x_k||^2 - (2-m) gamma_k (f - lower) + 2 gamma_k (f_B(0) - lower)
/// at every recorded step (needs stride-1 records; gradients are recomputed).
VerifierReport verify_descent_recursion(const Trajectory& trajectory,
                                        const FiniteSumProblem& problem, double m,
                                        double tol = 1e-10);

struct BatchCertificateRow {
    Batch batch;
    double lower = 0.0;
    double level = 0.0;                  // xi_B = lower_B + 2D/(2-m)
    std::optional<double> radius;        // M_B; empty when lev \ argmin is empty
    double minimizer_norm = 0.0;         // ||x*_B||
    bool approximate = false;            // radius from ray bisection, not analytic
};

struct BoundCertificate {
    double gamma = 0.0;
    double m = 0.0;
    double l_max = 0.0;
    double D = 0.0;
    double M = 0.0;
    double c = 0.0;
    double bound = 0.0; // max{4 c^2 (1 + gamma L_max)^2, ||x0||^2}
    std::vector<BatchCertificateRow> per_batch;
};

/// Explicit iterate bound for a C2 problem run with stepsizes <= gamma
/// satisfying the surrogate inequality with m < 2.
BoundCertificate boundedness_certificate(const FiniteSumProblem& problem, double gamma,
                                         double m, const Vector& x0);

VerifierReport check_trajectory_bounded(const Trajectory& trajectory,
                                        const BoundCertificate& certificate,
                                        double tol = 1e-8);

/// Empirical mean of f(xbar_k) - mu against a theoretical envelope, with
/// 3-standard-error Monte Carlo slack.
struct EnvelopeCurve {
    std::vector<long> ks;           // 1-based averaging horizon
    std::vector<double> empirical;  // mean over runs of f(xbar_k) - mu
    std::vector<double> stderr_;    // standard error of that mean
    std::vector<double> envelope;
    bool pass = false;
    long worst_k = -1;
    double alpha = 0.0;
    double noise_term = 0.0; // sigma^2 or sigma_b^2 actually used
};

/// Envelope for SGD with DecSPS:
/// (M_emp/alpha)/(lambda_{k-1} k) + sigma_b^2 (sum_{i<k} lambda_i)/k.
/// M_emp is the ensemble max of ||x_k - x*||^2.
EnvelopeCurve rate_envelope_decsps(const std::vector<Trajectory>& ensemble,
                                   const FiniteSumProblem& problem,
                                   const LambdaSchedule& schedule, double gamma_init,
                                   double sigma_b_sq);

/// Envelope for SGD with SPS (lambda = 1, b = 1):
/// ||x0 - x*||^2/(alpha k) + 2 sigma^2 gamma_init / alpha.
EnvelopeCurve rate_envelope_sps(const std::vector<Trajectory>& ensemble,
                                const FiniteSumProblem& problem, double gamma_init,
                                double sigma_sq);

/// mu - average of component lower bounds; the neighborhood constant when
/// the lower bounds are the exact component minima.
double sigma_sq_from_lower_bounds(const FiniteSumProblem& problem);

/// mu - average of batch lower bounds over all size-b batches (the
/// sigma_b^2 diagnostic; an interpretation, not an exact quote).
double sigma_b_sq_from_lower_bounds(const FiniteSumProblem& problem);

double cesaro_mean(const std::vector<double>& sequence, long k);
double cesaro_mean(const LambdaSchedule& schedule, long k);

/// f(x) - lower - ||grad f(x)||^2 / (2 L); nonnegative for convex L-smooth
/// f bounded below by `lower`.
double lemma26_gap(const ConvexComponent& component, const Vector& x);

} // namespace spslab
