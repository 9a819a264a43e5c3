#pragma once

// JSON schemas (format "reachkit/1") for manifold specs, experiment
// configs/results, reach reports, and verification reports.

#include <string>

#include <json.hpp>

#include "experiments.hpp"
#include "manifolds.hpp"
#include "reach.hpp"
#include "verify.hpp"

namespace reachkit {

using json = nlohmann::json;

inline json spec_to_json(const ManifoldSpec& spec) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle>)
                return {{"variant", "circle"}, {"R", s.R}};
            else if constexpr (std::is_same_v<T, Sphere>) {
                json j{{"variant", "sphere"}, {"d", s.d}, {"D", s.D}, {"R", s.R}};
                if (!s.center.empty()) j["center"] = s.center;
                return j;
            } else if constexpr (std::is_same_v<T, Ellipse>)
                return {{"variant", "ellipse"}, {"a", s.a}, {"b", s.b}};
            else if constexpr (std::is_same_v<T, Torus>)
                return {{"variant", "torus"}, {"R", s.R}, {"r", s.r}};
            else
                return {{"variant", "bumped_sphere"}, {"d", s.d}, {"D", s.D},
                        {"R", s.R},                   {"ell", s.ell}, {"eta", s.eta}};
        },
        spec);
}

inline ManifoldSpec spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("variant"))
        throw InvalidSpec("spec JSON: missing variant");
    const std::string variant = j.at("variant").get<std::string>();
    ManifoldSpec spec;
    if (variant == "circle") {
        spec = Circle{j.at("R").get<double>()};
    } else if (variant == "sphere") {
        Sphere s;
        s.d = j.at("d").get<int>();
        s.D = j.at("D").get<int>();
        s.R = j.at("R").get<double>();
        if (j.contains("center")) s.center = j.at("center").get<Vector>();
        spec = s;
    } else if (variant == "ellipse") {
        spec = Ellipse{j.at("a").get<double>(), j.at("b").get<double>()};
    } else if (variant == "torus") {
        spec = Torus{j.at("R").get<double>(), j.at("r").get<double>()};
    } else if (variant == "bumped_sphere") {
        BumpedSphere s;
        s.d = j.at("d").get<int>();
        s.D = j.at("D").get<int>();
        s.R = j.at("R").get<double>();
        s.ell = j.at("ell").get<double>();
        s.eta = j.at("eta").get<double>();
        spec = s;
    } else {
        throw InvalidSpec("spec JSON: unknown variant '" + variant + "'");
    }
    validate(spec);
    return spec;
}

inline json true_reach_to_json(const TrueReach& tr) {
    json j;
    if (tr.exact) j["exact"] = *tr.exact;
    if (tr.upper) j["upper"] = *tr.upper;
    if (tr.lower) j["lower"] = *tr.lower;
    return j;
}

inline std::string reach_case_name(ReachCase c) {
    switch (c) {
        case ReachCase::Global: return "global";
        case ReachCase::Local: return "local";
        default: return "both";
    }
}

inline json report_to_json(const ReachReport& rep) {
    return {{"tau_hat", rep.tau_hat},
            {"argmin_pair", {rep.argmin_pair.first, rep.argmin_pair.second}},
            {"pairs_evaluated", rep.pairs_evaluated},
            {"pairs_pruned", rep.pairs_pruned},
            {"skipped_degenerate", rep.skipped_degenerate}};
}

inline json tangent_mode_to_json(const TangentMode& mode) {
    return std::visit(
        [](const auto& m) -> json {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, ExactTangents>)
                return {{"mode", "exact"}};
            else if constexpr (std::is_same_v<M, PcaTangents>) {
                json j{{"mode", "pca"}};
                if (m.k) j["k"] = *m.k;
                return j;
            } else
                return {{"mode", "perturbed"}, {"theta", m.theta}};
        },
        mode);
}

inline TangentMode tangent_mode_from_json(const json& j) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "exact") return ExactTangents{};
    if (mode == "pca") {
        PcaTangents m;
        if (j.contains("k")) m.k = j.at("k").get<int>();
        return m;
    }
    if (mode == "perturbed") return PerturbedTangents{j.at("theta").get<double>()};
    throw InvalidSpec("tangent_mode JSON: unknown mode '" + mode + "'");
}

inline json config_to_json(const ExperimentConfig& cfg) {
    json j{{"format", "reachkit/1"},
           {"spec", spec_to_json(cfg.spec)},
           {"n_grid", cfg.n_grid},
           {"trials", cfg.trials},
           {"seed", cfg.seed},
           {"tangent_mode", tangent_mode_to_json(cfg.tangent_mode)},
           {"p", cfg.p}};
    if (cfg.sparsify_epsilon) j["sparsify_epsilon"] = *cfg.sparsify_epsilon;
    if (cfg.model_class) {
        j["model_class"] = {{"tau_min", cfg.model_class->tau_min},
                            {"L", cfg.model_class->L},
                            {"f_min", cfg.model_class->f_min},
                            {"p", cfg.model_class->p}};
    }
    return j;
}

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.spec = spec_from_json(j.at("spec"));
    cfg.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
    cfg.trials = j.at("trials").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tangent_mode")) cfg.tangent_mode = tangent_mode_from_json(j.at("tangent_mode"));
    if (j.contains("p")) cfg.p = j.at("p").get<double>();
    if (j.contains("sparsify_epsilon"))
        cfg.sparsify_epsilon = j.at("sparsify_epsilon").get<double>();
    if (j.contains("model_class")) {
        const auto& m = j.at("model_class");
        cfg.model_class = ModelClassParams{
            m.at("tau_min").get<double>(), m.at("L").get<double>(),
            m.at("f_min").get<double>(), m.at("p").get<double>()};
    }
    return cfg;
}

inline json result_to_json(const ExperimentResult& res) {
    json rows = json::array();
    for (const auto& row : res.rows)
        rows.push_back({{"n", row.n}, {"trial", row.trial},
                        {"tau_hat", row.tau_hat}, {"loss", row.loss}});
    json stats = json::array();
    for (const auto& st : res.stats)
        stats.push_back({{"n", st.n}, {"mean", st.mean}, {"median", st.median},
                         {"q1", st.q1}, {"q3", st.q3}});
    json j{{"format", "reachkit/1"}, {"rows", rows}, {"stats", stats},
           {"loss_vs_upper_bound", res.loss_vs_upper_bound}};
    if (res.rate) {
        j["rate_fit"] = {{"slope", res.rate->slope},
                         {"intercept", res.rate->intercept},
                         {"r2", res.rate->r2}};
    } else {
        j["rate_fit"] = "exact_model";
    }
    return j;
}

inline std::string result_to_csv(const ExperimentResult& res) {
    std::string out = "n,trial,tau_hat,loss\n";
    char buf[128];
    for (const auto& row : res.rows) {
        std::snprintf(buf, sizeof(buf), "%zu,%d,%.17g,%.17g\n", row.n, row.trial,
                      row.tau_hat, row.loss);
        out += buf;
    }
    return out;
}

inline json checks_to_json(const std::vector<Check>& checks) {
    json arr = json::array();
    bool all_ok = true;
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"ok", c.ok}});
        all_ok = all_ok && c.ok;
    }
    return {{"format", "reachkit/1"}, {"checks", arr}, {"passed", all_ok}};
}

} // namespace reachkit
