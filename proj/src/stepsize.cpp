#include "spslab/stepsize.hpp"

#include <algorithm>
#include <cmath>

namespace spslab {

LambdaSchedule LambdaSchedule::constant(double value) {
    if (!(value > 0.0))
        throw std::invalid_argument("schedule: constant lambda must be > 0");
    return {Kind::Constant, value, 0};
}

LambdaSchedule LambdaSchedule::power(double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("schedule: power theta must be in (0,1)");
    return {Kind::Power, theta, 0};
}

LambdaSchedule LambdaSchedule::log_power(double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("schedule: log_power theta must be in (0,1]");
    // ln(t)/t^theta decreases only for t > e^(1/theta); shift the index so
    // the sequence is decreasing from k = 0.
    const long shift =
        std::max(0L, static_cast<long>(std::ceil(std::exp(1.0 / theta))) - 2L);
    return {Kind::LogPower, theta, shift};
}

LambdaSchedule LambdaSchedule::inv_sqrt() { return {Kind::InvSqrt, 0.0, 0}; }

double LambdaSchedule::operator()(long k) const {
    if (k < 0) throw std::invalid_argument("schedule: negative index");
    switch (kind_) {
        case Kind::Constant:
            return param_;
        case Kind::Power:
            return std::pow(static_cast<double>(k + 1), -param_);
        case Kind::LogPower: {
            const double t = static_cast<double>(k + 2 + shift_);
            return std::log(t) / std::pow(t, param_);
        }
        case Kind::InvSqrt:
            return 1.0 / std::sqrt(static_cast<double>(k + 1));
    }
    throw std::logic_error("schedule: unknown kind");
}

std::string LambdaSchedule::describe() const {
    switch (kind_) {
        case Kind::Constant: return "constant(" + std::to_string(param_) + ")";
        case Kind::Power: return "power(" + std::to_string(param_) + ")";
        case Kind::LogPower:
            return "log_power(" + std::to_string(param_) + ",shift=" +
                   std::to_string(shift_) + ")";
        case Kind::InvSqrt: return "inv_sqrt";
    }
    return "?";
}

StepsizeState StepsizeState::init(LambdaSchedule schedule, double gamma_init) {
    if (!(gamma_init > 0.0))
        throw std::invalid_argument("stepsize: gamma_init must be > 0");
    StepsizeState s{schedule, gamma_init, schedule.lambda0(),
                    gamma_init / schedule.lambda0(), 0};
    return s;
}

double sps(double fval, double lower, double gradsq, double lambda, double gamma_init) {
    if (!(lambda > 0.0) || !(gamma_init > 0.0))
        throw std::invalid_argument("sps: lambda and gamma_init must be > 0");
    if (gradsq == 0.0) throw ZeroGradient();
    if (fval < lower)
        throw std::invalid_argument("sps: fval below the certified lower bound");
    return lambda * std::min((fval - lower) / gradsq, gamma_init / lambda);
}

std::pair<double, StepsizeState> decsps_next(const StepsizeState& state, double fval,
                                             double lower, double gradsq) {
    if (gradsq == 0.0) throw ZeroGradient();
    if (fval < lower)
        throw std::invalid_argument("decsps: fval below the certified lower bound");
    const double lambda_k = state.schedule(state.k);
    const double cap = std::min((fval - lower) / gradsq, state.prev_cap);
    const double gamma = lambda_k * cap;
    StepsizeState next = state;
    next.prev_gamma = gamma;
    next.prev_lambda = lambda_k;
    next.prev_cap = cap;
    next.k = state.k + 1;
    return {gamma, next};
}

std::pair<double, double> sandwich_bounds(long k, const LambdaSchedule& schedule,
                                          double gamma_init, double l_max) {
    if (!(l_max > 0.0)) throw std::invalid_argument("sandwich_bounds: l_max must be > 0");
    const double lambda_k = schedule(k);
    const double ratio = gamma_init / schedule.lambda0();
    return {std::min(1.0 / (2.0 * l_max), ratio) * lambda_k, ratio * lambda_k};
}

double gamma_cap(const StepsizeRule& rule) {
    switch (rule.kind) {
        case StepsizeRule::Kind::Constant: return rule.constant_gamma;
        // SPS and DecSPS are both capped by gamma_init
        case StepsizeRule::Kind::Sps: return rule.gamma_init;
        case StepsizeRule::Kind::DecSps: return rule.gamma_init;
    }
    throw std::logic_error("gamma_cap: unknown rule kind");
}

double surrogate_constant(const StepsizeRule& rule, double l_max) {
    switch (rule.kind) {
        case StepsizeRule::Kind::Constant:
            return 2.0 * l_max * rule.constant_gamma;
        case StepsizeRule::Kind::Sps:
            return 2.0 * l_max * rule.gamma_init;
        case StepsizeRule::Kind::DecSps:
            return rule.schedule.lambda0();
    }
    throw std::logic_error("surrogate_constant: unknown rule kind");
}

} // namespace spslab
