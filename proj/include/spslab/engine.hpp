#pragma once

#include "spslab/problems.hpp"
#include "spslab/rng.hpp"
#include "spslab/stepsize.hpp"
#include "spslab/types.hpp"

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace spslab {

class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, long k)
        : std::runtime_error(what + " at iteration " + std::to_string(k)), k(k) {}
    long k;
};

/// Batch source. Uniform draws size-b subsets with equal probability over
/// all C(N,b) of them, via the SplitMix64 word stream and lexicographic
/// unranking, so identical seeds give identical sequences everywhere.
struct Sampler {
    enum class Kind { Uniform, Fixed, Cyclic };
    Kind kind = Kind::Uniform;
    int num_components = 0;
    int batch_size = 1;
    std::uint64_t seed = 0;      // Uniform
    Batch fixed_batch;           // Fixed
    std::vector<Batch> cycle;    // Cyclic

    static Sampler uniform(int n, int b, std::uint64_t seed);
    static Sampler fixed(int n, Batch batch);
    static Sampler cyclic(int n, std::vector<Batch> batches);
};

struct SamplerState {
    SplitMix64 rng{0};
    long position = 0;
};

SamplerState init_sampler_state(const Sampler& sampler);
Batch sample(const Sampler& sampler, SamplerState& state);

struct RunPolicy {
    /// Resample threshold on ||grad||^2 (i.e. ||grad|| <= 1e-12).
    double eps_gradsq = 1e-24;
    int max_resamples = 1024;
    double divergence_threshold = 1e8;
    /// Record every stride-th iteration (plus the final state). Online
    /// checks run at every iteration regardless.
    long record_stride = 1;
};

enum class RunStatus { Completed, Diverged, ResampleExhausted };

std::string to_string(RunStatus status);

struct Record {
    long k = 0;
    Batch batch;
    Vector x;       // iterate before the update
    double gamma = 0.0;
    double fval = 0.0;
    double gradsq = 0.0;
    double lower = 0.0;
    Vector xbar;    // (1/(k+1)) sum_{i<=k} x_i
    double avg_fval = 0.0; // full objective at xbar
};

/// Worst-case slacks tracked at every iteration. All slacks are oriented
/// so that nonnegative (up to tolerance) means the inequality held.
struct OnlineChecks {
    double sandwich_lo_slack = std::numeric_limits<double>::infinity();
    double sandwich_hi_slack = std::numeric_limits<double>::infinity();
    double monotone_slack = std::numeric_limits<double>::infinity();
    double cond31_slack = std::numeric_limits<double>::infinity();
    double descent_slack = std::numeric_limits<double>::infinity();
    double max_xnorm = 0.0;
    double min_xnorm_last_decade = std::numeric_limits<double>::infinity();
    double initial_gradsq = std::numeric_limits<double>::quiet_NaN();
    double final_gradsq = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
    std::vector<Record> records;
    RunStatus status = RunStatus::Completed;
    long status_k = 0;       // iteration at which the status was set
    long iterations = 0;     // accepted SGD steps actually performed
    long record_stride = 1;
    Vector final_x;
    Vector final_xbar;
    double final_avg_fval = 0.0;
    double m_used = 0.0;     // surrogate constant used by the online checks
    OnlineChecks checks;
};

/// Run K iterations of SGD with the given stepsize rule, recording the
/// trajectory. On a zero batch gradient the engine resamples a different
/// batch (never one already rejected this step); when every batch has zero
/// gradient the run stops with ResampleExhausted (the iterate minimizes
/// every batch function).
Trajectory run(const FiniteSumProblem& problem, const StepsizeRule& rule,
               const Sampler& sampler, const Vector& x0, long iterations,
               const RunPolicy& policy = {});

/// Exact average of x_0..x_{k-1}; requires stride-1 records.
Vector running_average(const Trajectory& trajectory, long k);

/// CSV export: header k,batch,gamma,fval,gradsq,lower,xnorm,avg_fval with
/// full-iterate columns appended for dim <= 4; 17 significant digits.
void write_csv(const Trajectory& trajectory, int dim, std::ostream& out);

/// The numeric columns `verify` can check from a CSV alone.
struct CsvRow {
    long k;
    double gamma, fval, gradsq, lower, xnorm;
};
std::vector<CsvRow> read_csv(std::istream& in);

} // namespace spslab
