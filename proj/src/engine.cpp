#include "spslab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace spslab {

Sampler Sampler::uniform(int n, int b, std::uint64_t seed) {
    if (b < 1 || b > n) throw std::invalid_argument("sampler: need 1 <= b <= N");
    Sampler s;
    s.kind = Kind::Uniform;
    s.num_components = n;
    s.batch_size = b;
    s.seed = seed;
    return s;
}

Sampler Sampler::fixed(int n, Batch batch) {
    Sampler s;
    s.kind = Kind::Fixed;
    s.num_components = n;
    s.batch_size = static_cast<int>(batch.size());
    s.fixed_batch = std::move(batch);
    return s;
}

Sampler Sampler::cyclic(int n, std::vector<Batch> batches) {
    if (batches.empty()) throw std::invalid_argument("sampler: empty cycle");
    Sampler s;
    s.kind = Kind::Cyclic;
    s.num_components = n;
    s.batch_size = static_cast<int>(batches.front().size());
    for (const auto& b : batches)
        if (b.size() != batches.front().size())
            throw std::invalid_argument("sampler: cycle batches differ in size");
    s.cycle = std::move(batches);
    return s;
}

SamplerState init_sampler_state(const Sampler& sampler) {
    SamplerState st;
    st.rng = SplitMix64(sampler.seed);
    st.position = 0;
    return st;
}

Batch sample(const Sampler& sampler, SamplerState& state) {
    switch (sampler.kind) {
        case Sampler::Kind::Uniform: {
            const std::uint64_t total =
                binomial(sampler.num_components, sampler.batch_size);
            const std::uint64_t rank = state.rng.below(total);
            return unrank_combination(sampler.num_components, sampler.batch_size, rank);
        }
        case Sampler::Kind::Fixed:
            return sampler.fixed_batch;
        case Sampler::Kind::Cyclic: {
            const Batch& b =
                sampler.cycle[static_cast<std::size_t>(state.position) % sampler.cycle.size()];
            ++state.position;
            return b;
        }
    }
    throw std::logic_error("sample: unknown sampler kind");
}

std::string to_string(RunStatus status) {
    switch (status) {
        case RunStatus::Completed: return "completed";
        case RunStatus::Diverged: return "diverged";
        case RunStatus::ResampleExhausted: return "resample_exhausted";
    }
    return "?";
}

namespace {

double compute_gamma(const StepsizeRule& rule, StepsizeState& state, double fval,
                     double lower, double gradsq) {
    switch (rule.kind) {
        case StepsizeRule::Kind::Constant:
            return rule.constant_gamma;
        case StepsizeRule::Kind::Sps:
            return sps(fval, lower, gradsq, rule.lambda, rule.gamma_init);
        case StepsizeRule::Kind::DecSps: {
            auto [gamma, next] = decsps_next(state, fval, lower, gradsq);
            state = next;
            return gamma;
        }
    }
    throw std::logic_error("run: unknown stepsize rule");
}

} // namespace

Trajectory run(const FiniteSumProblem& problem, const StepsizeRule& rule,
               const Sampler& sampler, const Vector& x0, long iterations,
               const RunPolicy& policy) {
    if (x0.size() != problem.dim())
        throw std::invalid_argument("run: x0 dimension mismatch");
    if (iterations < 1) throw std::invalid_argument("run: need K >= 1");
    if (sampler.num_components != problem.num_components() ||
        sampler.batch_size != problem.batch_size())
        throw std::invalid_argument("run: sampler does not match the problem");
    if (rule.kind == StepsizeRule::Kind::Constant && !(rule.constant_gamma > 0.0))
        throw std::invalid_argument("run: constant stepsize must be > 0");

    const std::uint64_t total_batches =
        binomial(problem.num_components(), problem.batch_size());
    const bool decsps = rule.kind == StepsizeRule::Kind::DecSps;
    const double l_max = problem.l_max();
    const double m = surrogate_constant(rule, l_max);

    // f_B(0) per batch is an average of these
    std::vector<double> f_at_zero(problem.num_components());
    const Vector zero = Vector::Zero(problem.dim());
    for (int i = 0; i < problem.num_components(); ++i)
        f_at_zero[i] = problem.component(i).eval(zero);

    Trajectory traj;
    traj.record_stride = std::max(1L, policy.record_stride);
    traj.m_used = m;

    SamplerState sampler_state = init_sampler_state(sampler);
    StepsizeState step_state = StepsizeState::init(rule.schedule, rule.gamma_init);
    double prev_gamma = rule.kind == StepsizeRule::Kind::Constant
                            ? rule.constant_gamma
                            : rule.gamma_init;

    Vector x = x0;
    Vector xbar = x0;
    long xbar_count = 1; // iterates x_0..x_{xbar_count-1} included in xbar
    const long decade_start = iterations - iterations / 10;

    for (long k = 0; k < iterations; ++k) {
        if (k > 0) {
            xbar += (x - xbar) / static_cast<double>(k + 1);
            xbar_count = k + 1;
        }

        // sample; on zero gradient resample a batch not yet rejected this step
        std::vector<Batch> rejected;
        Batch batch;
        double fval = 0.0, gradsq = 0.0;
        Vector grad;
        bool accepted = false;
        for (int attempt = 0; attempt <= policy.max_resamples; ++attempt) {
            batch = sample(sampler, sampler_state);
            if (std::find(rejected.begin(), rejected.end(), batch) != rejected.end()) {
                if (sampler.kind == Sampler::Kind::Fixed) break;
                continue;
            }
            fval = problem.eval_batch(batch, x);
            grad = problem.grad_batch(batch, x);
            gradsq = grad.squaredNorm();
            if (!std::isfinite(fval) || !std::isfinite(gradsq))
                throw NumericalFailure("non-finite batch evaluation", k);
            if (gradsq > policy.eps_gradsq) {
                accepted = true;
                break;
            }
            rejected.push_back(batch);
            if (rejected.size() == total_batches) break;
        }
        if (!accepted) {
            traj.status = RunStatus::ResampleExhausted;
            traj.status_k = k;
            break;
        }

        if (std::isnan(traj.checks.initial_gradsq)) traj.checks.initial_gradsq = gradsq;

        const long step_index = decsps ? step_state.k : k;
        const double gamma = compute_gamma(rule, step_state, fval, problem.batch_lower_bound(batch), gradsq);
        const double lower = problem.batch_lower_bound(batch);

        // online invariants
        if (decsps) {
            auto [lo, hi] = sandwich_bounds(step_index, rule.schedule, rule.gamma_init, l_max);
            traj.checks.sandwich_lo_slack =
                std::min(traj.checks.sandwich_lo_slack, gamma - lo);
            traj.checks.sandwich_hi_slack =
                std::min(traj.checks.sandwich_hi_slack, hi - gamma);
            traj.checks.monotone_slack =
                std::min(traj.checks.monotone_slack, prev_gamma - gamma);
        }
        traj.checks.cond31_slack =
            std::min(traj.checks.cond31_slack, m * (fval - lower) - gamma * gradsq);

        if (k % traj.record_stride == 0) {
            Record rec;
            rec.k = k;
            rec.batch = batch;
            rec.x = x;
            rec.gamma = gamma;
            rec.fval = fval;
            rec.gradsq = gradsq;
            rec.lower = lower;
            rec.xbar = xbar;
            rec.avg_fval = problem.eval_full(xbar);
            traj.records.push_back(std::move(rec));
        }

        const double xnorm_before = x.norm();
        x -= gamma * grad;
        if (!x.allFinite()) throw NumericalFailure("non-finite iterate", k + 1);

        double f_b_zero = 0.0;
        for (Index i : batch) f_b_zero += f_at_zero[i];
        f_b_zero /= static_cast<double>(problem.batch_size());
        const double descent_rhs = xnorm_before * xnorm_before -
                                   (2.0 - m) * gamma * (fval - lower) +
                                   2.0 * gamma * (f_b_zero - lower);
        traj.checks.descent_slack =
            std::min(traj.checks.descent_slack, descent_rhs - x.squaredNorm());

        const double xnorm = x.norm();
        traj.checks.max_xnorm = std::max(traj.checks.max_xnorm, xnorm);
        if (k + 1 >= decade_start)
            traj.checks.min_xnorm_last_decade =
                std::min(traj.checks.min_xnorm_last_decade, xnorm);
        traj.checks.final_gradsq = gradsq;
        prev_gamma = gamma;
        traj.iterations = k + 1;

        if (xnorm > policy.divergence_threshold) {
            traj.status = RunStatus::Diverged;
            traj.status_k = k + 1;
            break;
        }
    }

    if (traj.iterations + 1 > xbar_count) // fold in the final iterate
        xbar += (x - xbar) / static_cast<double>(traj.iterations + 1);
    traj.final_x = x;
    traj.final_xbar = xbar;
    traj.final_avg_fval = problem.eval_full(xbar);
    traj.checks.max_xnorm = std::max(traj.checks.max_xnorm, x0.norm());
    return traj;
}

Vector running_average(const Trajectory& trajectory, long k) {
    if (trajectory.record_stride != 1)
        throw std::invalid_argument("running_average: needs stride-1 records");
    if (k < 1 || k > static_cast<long>(trajectory.records.size()))
        throw std::out_of_range("running_average: k out of range");
    Vector sum = Vector::Zero(trajectory.records.front().x.size());
    for (long i = 0; i < k; ++i) sum += trajectory.records[i].x;
    return sum / static_cast<double>(k);
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string encode_batch(const Batch& b) {
    std::string out;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) out += '|';
        out += std::to_string(b[i]);
    }
    return out;
}

} // namespace

void write_csv(const Trajectory& trajectory, int dim, std::ostream& out) {
    const bool full = dim <= 4;
    out << "k,batch,gamma,fval,gradsq,lower,xnorm,avg_fval";
    if (full)
        for (int i = 0; i < dim; ++i) out << ",x" << i;
    out << '\n';
    for (const auto& r : trajectory.records) {
        out << r.k << ',' << encode_batch(r.batch) << ',' << fmt17(r.gamma) << ','
            << fmt17(r.fval) << ',' << fmt17(r.gradsq) << ',' << fmt17(r.lower) << ','
            << fmt17(r.x.norm()) << ',' << fmt17(r.avg_fval);
        if (full)
            for (int i = 0; i < dim; ++i) out << ',' << fmt17(r.x[i]);
        out << '\n';
    }
}

std::vector<CsvRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty file");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) header.push_back(field);
    }
    auto col = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw std::runtime_error("csv: missing column " + name);
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t ck = col("k"), cg = col("gamma"), cf = col("fval"),
                      cq = col("gradsq"), cl = col("lower"), cx = col("xnorm");
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        CsvRow r;
        r.k = std::stol(fields.at(ck));
        r.gamma = std::stod(fields.at(cg));
        r.fval = std::stod(fields.at(cf));
        r.gradsq = std::stod(fields.at(cq));
        r.lower = std::stod(fields.at(cl));
        r.xnorm = std::stod(fields.at(cx));
        rows.push_back(r);
    }
    return rows;
}

} // namespace spslab
