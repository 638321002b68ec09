#pragma once

#include "spslab/engine.hpp"
#include "spslab/library.hpp"
#include "spslab/stepsize.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace spslab {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VerifierSpec {
    std::string check;           // condition31 | descent | boundedness | monotone | sandwich
    std::optional<double> m;     // override; default from the stepsize rule
    std::optional<double> gamma; // stepsize cap for boundedness
    bool expect_fail = false;    // negative control: pass iff the check fails
};

/// A fully described experiment: problem, stepsize rule, sampler, policy
/// and the verifiers to apply afterwards.
struct ExperimentConfig {
    std::string name = "experiment";
    std::optional<std::string> instance; // library instance name
    std::vector<ConvexComponent> components; // inline problem, when no instance
    int batch_size = 1;
    StepsizeRule rule;
    Sampler::Kind sampler_kind = Sampler::Kind::Uniform;
    std::uint64_t seed = 1;
    int runs = 1; // ensemble size; seeds are seed, seed+1, ...
    Batch fixed_batch;
    std::vector<Batch> cyclic_batches;
    Vector x0;
    long iterations = 1000;
    RunPolicy policy;
    std::string output_dir = "out";
    std::vector<VerifierSpec> verifiers;
};

ConvexSetPtr parse_set(const nlohmann::json& spec);
ConvexComponent parse_component(const nlohmann::json& spec);
LambdaSchedule parse_schedule(const nlohmann::json& spec);
StepsizeRule parse_stepsize(const nlohmann::json& spec);
ExperimentConfig parse_config(const nlohmann::json& spec);
ExperimentConfig load_config_file(const std::string& path);

/// Problem described by the config: library instance or inline components.
FiniteSumProblem build_problem(const ExperimentConfig& config);

Sampler build_sampler(const ExperimentConfig& config, const FiniteSumProblem& problem,
                      std::uint64_t seed);

} // namespace spslab
