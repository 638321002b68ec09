#include "spslab/config.hpp"

#include <json.hpp>

#include <fstream>

namespace spslab {

using nlohmann::json;

namespace {

Vector parse_vector(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty())
        throw ConfigError(what + ": expected a non-empty array of numbers");
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(what + ": entry is not a number");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

Batch parse_batch(const json& j) {
    if (!j.is_array()) throw ConfigError("batch: expected an array of indices");
    Batch b;
    for (const auto& e : j) b.push_back(e.get<int>());
    return b;
}

template <typename T>
T require(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key)) throw ConfigError(ctx + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(ctx + ": field '" + key + "' has the wrong type");
    }
}

} // namespace

ConvexSetPtr parse_set(const json& spec) {
    const auto kind = require<std::string>(spec, "kind", "set");
    try {
        if (kind == "halfspace")
            return make_halfspace(parse_vector(spec.at("a"), "set.a"),
                                  require<double>(spec, "beta", "set"));
        if (kind == "hyperplane")
            return make_hyperplane(parse_vector(spec.at("a"), "set.a"),
                                   require<double>(spec, "beta", "set"));
        if (kind == "ball")
            return make_ball(parse_vector(spec.at("center"), "set.center"),
                             require<double>(spec, "radius", "set"));
        if (kind == "box")
            return make_box(parse_vector(spec.at("lo"), "set.lo"),
                            parse_vector(spec.at("hi"), "set.hi"));
        if (kind == "polyhedron") {
            std::vector<std::pair<Vector, double>> hs;
            for (const auto& h : spec.at("halfspaces"))
                hs.emplace_back(parse_vector(h.at("a"), "set.a"),
                                require<double>(h, "beta", "set"));
            return make_polyhedron(hs);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("set: ") + e.what());
    }
    throw ConfigError("set: unknown kind '" + kind + "'");
}

ConvexComponent parse_component(const json& spec) {
    const auto type = require<std::string>(spec, "type", "component");
    try {
        if (type == "quadratic")
            return make_quadratic(parse_vector(spec.at("center"), "component.center"),
                                  require<double>(spec, "scale", "component"));
        if (type == "softplus")
            return make_softplus(parse_vector(spec.at("a"), "component.a"));
        if (type == "sq_dist") return make_sq_dist(parse_set(spec.at("set")));
        if (type == "one_sided_quadratic") return make_one_sided_quadratic();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("component: ") + e.what());
    }
    throw ConfigError("component: unknown type '" + type + "'");
}

LambdaSchedule parse_schedule(const json& spec) {
    const auto kind = require<std::string>(spec, "kind", "schedule");
    try {
        if (kind == "constant")
            return LambdaSchedule::constant(require<double>(spec, "value", "schedule"));
        if (kind == "power")
            return LambdaSchedule::power(require<double>(spec, "theta", "schedule"));
        if (kind == "log_power")
            return LambdaSchedule::log_power(require<double>(spec, "theta", "schedule"));
        if (kind == "inv_sqrt") return LambdaSchedule::inv_sqrt();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("schedule: ") + e.what());
    }
    throw ConfigError("schedule: unknown kind '" + kind + "'");
}

StepsizeRule parse_stepsize(const json& spec) {
    StepsizeRule rule;
    const auto kind = require<std::string>(spec, "rule", "stepsize");
    if (kind == "constant") {
        rule.kind = StepsizeRule::Kind::Constant;
        rule.constant_gamma = require<double>(spec, "gamma", "stepsize");
        if (!(rule.constant_gamma > 0.0))
            throw ConfigError("stepsize: constant gamma must be > 0");
        return rule;
    }
    // no silent default for gamma_init
    rule.gamma_init = require<double>(spec, "gamma_init", "stepsize");
    if (!(rule.gamma_init > 0.0)) throw ConfigError("stepsize: gamma_init must be > 0");
    if (kind == "sps") {
        rule.kind = StepsizeRule::Kind::Sps;
        rule.lambda = spec.value("lambda", 1.0);
        if (!(rule.lambda > 0.0)) throw ConfigError("stepsize: lambda must be > 0");
        return rule;
    }
    if (kind == "decsps") {
        rule.kind = StepsizeRule::Kind::DecSps;
        rule.schedule = spec.contains("schedule") ? parse_schedule(spec.at("schedule"))
                                                  : LambdaSchedule::inv_sqrt();
        return rule;
    }
    throw ConfigError("stepsize: unknown rule '" + kind + "'");
}

ExperimentConfig parse_config(const json& spec) {
    ExperimentConfig cfg;
    cfg.name = spec.value("name", std::string("experiment"));

    const json& prob = spec.contains("problem") ? spec.at("problem") : json::object();
    if (prob.contains("instance")) {
        cfg.instance = prob.at("instance").get<std::string>();
    } else if (prob.contains("components")) {
        for (const auto& c : prob.at("components"))
            cfg.components.push_back(parse_component(c));
    } else {
        throw ConfigError("problem: need either 'instance' or 'components'");
    }
    cfg.batch_size = prob.value("batch_size", 1);

    cfg.rule = parse_stepsize(spec.contains("stepsize") ? spec.at("stepsize")
                                                        : json{{"rule", "none"}});

    const json& samp = spec.contains("sampler") ? spec.at("sampler") : json::object();
    const auto skind = samp.value("kind", std::string("uniform"));
    if (skind == "uniform") {
        cfg.sampler_kind = Sampler::Kind::Uniform;
    } else if (skind == "fixed") {
        cfg.sampler_kind = Sampler::Kind::Fixed;
        cfg.fixed_batch = parse_batch(samp.at("batch"));
    } else if (skind == "cyclic") {
        cfg.sampler_kind = Sampler::Kind::Cyclic;
        for (const auto& b : samp.at("batches")) cfg.cyclic_batches.push_back(parse_batch(b));
    } else {
        throw ConfigError("sampler: unknown kind '" + skind + "'");
    }
    cfg.seed = samp.value("seed", 1ULL);
    cfg.runs = samp.value("runs", 1);
    if (cfg.runs < 1) throw ConfigError("sampler: runs must be >= 1");

    cfg.x0 = parse_vector(spec.at("x0"), "x0");
    cfg.iterations = require<long>(spec, "iterations", "config");
    if (cfg.iterations < 1) throw ConfigError("config: iterations must be >= 1");

    if (spec.contains("policy")) {
        const json& pol = spec.at("policy");
        cfg.policy.eps_gradsq = pol.value("eps_gradsq", cfg.policy.eps_gradsq);
        cfg.policy.max_resamples = pol.value("max_resamples", cfg.policy.max_resamples);
        cfg.policy.divergence_threshold =
            pol.value("divergence_threshold", cfg.policy.divergence_threshold);
        cfg.policy.record_stride = pol.value("record_stride", cfg.policy.record_stride);
    }
    cfg.output_dir = spec.value("output_dir", std::string("out"));

    if (spec.contains("verifiers")) {
        for (const auto& v : spec.at("verifiers")) {
            VerifierSpec vs;
            vs.check = require<std::string>(v, "check", "verifier");
            if (v.contains("m")) vs.m = v.at("m").get<double>();
            if (v.contains("gamma")) vs.gamma = v.at("gamma").get<double>();
            vs.expect_fail = v.value("expect_fail", false);
            cfg.verifiers.push_back(std::move(vs));
        }
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    return parse_config(j);
}

FiniteSumProblem build_problem(const ExperimentConfig& config) {
    if (config.instance) return make_library_instance(*config.instance).problem;
    try {
        return FiniteSumProblem(config.components, config.batch_size);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("problem: ") + e.what());
    }
}

Sampler build_sampler(const ExperimentConfig& config, const FiniteSumProblem& problem,
                      std::uint64_t seed) {
    switch (config.sampler_kind) {
        case Sampler::Kind::Uniform:
            return Sampler::uniform(problem.num_components(), problem.batch_size(), seed);
        case Sampler::Kind::Fixed:
            return Sampler::fixed(problem.num_components(), config.fixed_batch);
        case Sampler::Kind::Cyclic:
            return Sampler::cyclic(problem.num_components(), config.cyclic_batches);
    }
    throw ConfigError("sampler: unknown kind");
}

} // namespace spslab
