#include "spslab/recipes.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifierFail = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalFailure = 3;

std::string default_out_dir() {
    if (const char* env = std::getenv("SPSLAB_OUT_DIR")) return env;
    return "out";
}

void print_checks(const spslab::RecipeResult& result) {
    for (const auto& c : result.checks) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << result.recipe << "/" << c.name;
        if (c.negative_control) std::cout << "  [negative control]";
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        std::cout << '\n';
    }
    std::cout << (result.pass ? "PASS" : "FAIL") << "  " << result.recipe << '\n';
}

spslab::LambdaSchedule schedule_from_flags(const std::string& kind, double theta) {
    if (kind == "constant") return spslab::LambdaSchedule::constant(theta);
    if (kind == "power") return spslab::LambdaSchedule::power(theta);
    if (kind == "log_power") return spslab::LambdaSchedule::log_power(theta);
    if (kind == "inv_sqrt") return spslab::LambdaSchedule::inv_sqrt();
    throw spslab::ConfigError("unknown schedule kind: " + kind);
}

int cmd_verify(const std::string& csv_path, const std::string& check, double m,
               double gamma_init, double lmax, const std::string& schedule_kind,
               double theta, double bound) {
    std::ifstream in(csv_path);
    if (!in) {
        std::cerr << "error: cannot open " << csv_path << '\n';
        return kExitConfigError;
    }
    const auto rows = spslab::read_csv(in);
    if (rows.empty()) {
        std::cerr << "error: no data rows in " << csv_path << '\n';
        return kExitConfigError;
    }

    bool pass = true;
    double worst = std::numeric_limits<double>::infinity();
    long worst_k = -1;
    auto track = [&](double slack, long k) {
        if (slack < worst) {
            worst = slack;
            worst_k = k;
        }
    };

    if (check == "condition31") {
        if (!(m > 0)) {
            std::cerr << "error: condition31 needs --m > 0\n";
            return kExitConfigError;
        }
        for (const auto& r : rows) track(m * (r.fval - r.lower) - r.gamma * r.gradsq, r.k);
        pass = worst >= -1e-10;
    } else if (check == "monotone") {
        for (std::size_t i = 1; i < rows.size(); ++i)
            track(rows[i - 1].gamma - rows[i].gamma, rows[i].k);
        pass = worst >= -1e-15;
    } else if (check == "sandwich") {
        if (!(gamma_init > 0) || !(lmax > 0)) {
            std::cerr << "error: sandwich needs --gamma-init > 0 and --lmax > 0\n";
            return kExitConfigError;
        }
        const auto schedule = schedule_from_flags(schedule_kind, theta);
        for (const auto& r : rows) {
            const auto [lo, hi] = spslab::sandwich_bounds(r.k, schedule, gamma_init, lmax);
            track(std::min(r.gamma - lo, hi - r.gamma), r.k);
        }
        pass = worst >= -1e-12;
    } else if (check == "bounded") {
        if (!(bound > 0)) {
            std::cerr << "error: bounded needs --bound > 0\n";
            return kExitConfigError;
        }
        for (const auto& r : rows) track(bound - r.xnorm * r.xnorm, r.k);
        pass = worst >= -1e-8;
    } else {
        std::cerr << "error: unknown check '" << check
                  << "' (condition31 | monotone | sandwich | bounded)\n";
        return kExitConfigError;
    }

    std::cout << (pass ? "PASS" : "FAIL") << "  " << check << "  worst slack " << worst
              << " at k=" << worst_k << '\n';
    return pass ? kExitPass : kExitVerifierFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-sum SGD laboratory with Polyak-type stepsizes"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
    run_cmd->add_option("config", config_path, "JSON experiment config")->required();
    std::string run_out;
    run_cmd->add_option("--out", run_out, "output directory (overrides the config)");
    std::uint64_t run_seed = 0;
    auto* run_seed_opt = run_cmd->add_option("--seed", run_seed, "base seed override");
    long run_iters = 0;
    auto* run_iters_opt = run_cmd->add_option("--iters", run_iters, "iteration override");

    std::string recipe_name;
    auto* recipe_cmd = app.add_subcommand("recipe", "run a named built-in recipe");
    recipe_cmd->add_option("name", recipe_name, "recipe name (see `list`)")->required();
    spslab::RecipeOptions opts;
    opts.out_dir = default_out_dir();
    recipe_cmd->add_option("--seed", opts.seed, "base seed (default 1)");
    long recipe_iters = 0;
    auto* recipe_iters_opt =
        recipe_cmd->add_option("--iters", recipe_iters, "iteration override");
    recipe_cmd->add_option("--out", opts.out_dir,
                           "output directory (default $SPSLAB_OUT_DIR or ./out)");
    recipe_cmd->add_option("--workers", opts.workers, "ensemble worker threads (0 = auto)");

    auto* list_cmd = app.add_subcommand("list", "list built-in recipes");

    std::string csv_path, check_name, schedule_kind = "inv_sqrt";
    double m = 0, gamma_init = 0, lmax = 0, theta = 0.5, bound = 0;
    auto* verify_cmd = app.add_subcommand("verify", "check inequalities on a trajectory CSV");
    verify_cmd->add_option("trajectory", csv_path, "trajectory CSV file")->required();
    verify_cmd->add_option("--check", check_name, "condition31 | monotone | sandwich | bounded")
        ->required();
    verify_cmd->add_option("--m", m, "surrogate constant for condition31");
    verify_cmd->add_option("--gamma-init", gamma_init, "initial stepsize for sandwich");
    verify_cmd->add_option("--lmax", lmax, "max smoothness constant for sandwich");
    verify_cmd->add_option("--schedule", schedule_kind,
                           "constant | power | log_power | inv_sqrt");
    verify_cmd->add_option("--theta", theta, "schedule parameter (value for constant)");
    verify_cmd->add_option("--bound", bound, "squared-norm bound for bounded");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list_cmd) {
            for (const auto& info : spslab::list_recipes())
                std::cout << info.name << "\n    claim: " << info.claim
                          << "\n    expected: " << info.expected << '\n';
            return kExitPass;
        }
        if (*verify_cmd)
            return cmd_verify(csv_path, check_name, m, gamma_init, lmax, schedule_kind,
                              theta, bound);
        if (*recipe_cmd) {
            if (*recipe_iters_opt) opts.iterations = recipe_iters;
            const auto result = spslab::run_recipe(recipe_name, opts);
            print_checks(result);
            return result.pass ? kExitPass : kExitVerifierFail;
        }
        if (*run_cmd) {
            auto config = spslab::load_config_file(config_path);
            if (!run_out.empty()) config.output_dir = run_out;
            if (*run_seed_opt) config.seed = run_seed;
            if (*run_iters_opt) config.iterations = run_iters;
            const auto result = spslab::run_experiment(config);
            print_checks(result);
            return result.pass ? kExitPass : kExitVerifierFail;
        }
    } catch (const spslab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const spslab::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumericalFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumericalFailure;
    }
    return kExitConfigError;
}
