#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace spslab {

/// Raised by stepsize rules when ||grad||^2 = 0; the engine responds by
/// resampling a different batch.
class ZeroGradient : public std::runtime_error {
public:
    ZeroGradient() : std::runtime_error("zero gradient: resample a different batch") {}
};

/// Decreasing positive relaxation sequence lambda_k.
class LambdaSchedule {
public:
    enum class Kind { Constant, Power, LogPower, InvSqrt };

    static LambdaSchedule constant(double value);
    /// lambda_k = (k+1)^(-theta), theta in (0,1).
    static LambdaSchedule power(double theta);
    /// lambda_k = ln(k+2+s) / (k+2+s)^theta, theta in (0,1], with the index
    /// shift s chosen minimal so the sequence decreases from k = 0.
    static LambdaSchedule log_power(double theta);
    /// lambda_k = 1/sqrt(k+1).
    static LambdaSchedule inv_sqrt();

    double operator()(long k) const;
    double lambda0() const { return (*this)(0); }
    Kind kind() const { return kind_; }
    std::string describe() const;

private:
    LambdaSchedule(Kind kind, double param, long shift)
        : kind_(kind), param_(param), shift_(shift) {}
    Kind kind_;
    double param_;
    long shift_;
};

/// State of the DecSPS recursion. The cap gamma_{k-1}/lambda_{k-1} is
/// stored directly so repeated divisions cannot drift it; it starts at
/// gamma_init/lambda_0 (the lambda_{-1} := lambda_0 convention).
struct StepsizeState {
    LambdaSchedule schedule;
    double prev_gamma;  // gamma_{k-1}
    double prev_lambda; // lambda_{k-1}
    double prev_cap;    // gamma_{k-1} / lambda_{k-1}, carried exactly
    long k = 0;

    static StepsizeState init(LambdaSchedule schedule, double gamma_init);
};

/// SPS: lambda * min{(f - lower)/||g||^2, gamma_init/lambda}.
double sps(double fval, double lower, double gradsq, double lambda, double gamma_init);

/// One DecSPS step: gamma_k = lambda_k * min{(f - lower)/||g||^2, cap};
/// returns gamma_k and the advanced state.
std::pair<double, StepsizeState> decsps_next(const StepsizeState& state, double fval,
                                             double lower, double gradsq);

/// The two-sided bound on the DecSPS stepsize:
/// min{1/(2 L_max), gamma_init/lambda0} lambda_k <= gamma_k <= (gamma_init/lambda0) lambda_k.
std::pair<double, double> sandwich_bounds(long k, const LambdaSchedule& schedule,
                                          double gamma_init, double l_max);

/// Stepsize rule as declared in experiment configs.
struct StepsizeRule {
    enum class Kind { Constant, Sps, DecSps };
    Kind kind = Kind::DecSps;
    double constant_gamma = 0.0;            // Constant
    double lambda = 1.0;                    // Sps
    double gamma_init = 1.0;                // Sps, DecSps
    LambdaSchedule schedule = LambdaSchedule::inv_sqrt(); // DecSps
};

/// Uniform upper bound gamma on the stepsizes the rule can emit.
double gamma_cap(const StepsizeRule& rule);

/// The constant m in the surrogate inequality
/// gamma_k ||grad||^2 <= m (f - lower): 2 L_max gamma for bounded
/// stepsizes, lambda_0 for DecSPS.
double surrogate_constant(const StepsizeRule& rule, double l_max);

} // namespace spslab
