#pragma once

#include "spslab/config.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spslab {

struct RecipeCheck {
    std::string name;
    bool pass = false;
    bool negative_control = false; // pass means the verifier correctly rejected
    std::string detail;
};

struct RecipeResult {
    std::string recipe;
    bool pass = false; // all non-negative-control checks passed
    std::vector<RecipeCheck> checks;
    nlohmann::json summary;
};

struct RecipeOptions {
    std::uint64_t seed = 1;
    std::optional<long> iterations; // override the recipe's default horizon
    std::string out_dir = "out";
    int workers = 0; // 0 = one per hardware thread, capped by the ensemble
};

struct RecipeInfo {
    std::string name;
    std::string claim;    // the quantitative statement being exercised
    std::string expected; // expected outcome
};

std::vector<RecipeInfo> list_recipes();

/// Run a named recipe, writing CSV artifacts and summary.json under
/// opts.out_dir. Deterministic: identical options give byte-identical files.
RecipeResult run_recipe(const std::string& name, const RecipeOptions& opts);

/// Run a config-file experiment: ensemble of seeded runs, per-run CSV and
/// summary.json, then the configured verifiers.
RecipeResult run_experiment(const ExperimentConfig& config);

/// Ensemble helper: runs seeds seed..seed+count-1 concurrently, results in
/// seed order regardless of worker count.
std::vector<Trajectory> run_ensemble(const FiniteSumProblem& problem,
                                     const StepsizeRule& rule,
                                     const std::function<Sampler(std::uint64_t)>& sampler_for_seed,
                                     std::uint64_t first_seed, int count,
                                     const Vector& x0, long iterations,
                                     const RunPolicy& policy, int workers);

} // namespace spslab
