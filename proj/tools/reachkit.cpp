// reachkit command-line front end: generate synthetic clouds, estimate
// reach, run Monte-Carlo experiments, and run the verification suites.
// Exit codes: 0 success, 2 usage/input error, 3 estimation impossible.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <reachkit/cloud_io.hpp>
#include <reachkit/experiments.hpp>
#include <reachkit/json_io.hpp>
#include <reachkit/manifolds.hpp>
#include <reachkit/reach.hpp>
#include <reachkit/tangents.hpp>
#include <reachkit/verify.hpp>

namespace rk = reachkit;

namespace {

int cmd_generate(const std::string& spec_str, std::size_t n, std::uint64_t seed,
                 bool with_frames, const std::string& out_path) {
    rk::ManifoldSpec spec;
    try {
        spec = rk::spec_from_json(rk::json::parse(spec_str));
    } catch (const std::exception& e) {
        std::cerr << "error: invalid spec: " << e.what() << "\n";
        return 2;
    }
    const rk::TangentCloud cloud = rk::sample(spec, n, seed, with_frames);

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot open " << out_path << "\n";
        return 2;
    }
    const std::string spec_json = rk::spec_to_json(spec).dump();
    rk::write_cloud(out, cloud, spec_json);

    rk::json meta{{"spec", rk::spec_to_json(spec)},
                  {"true_reach", rk::true_reach_to_json(rk::true_reach(spec))},
                  {"reach_case", rk::reach_case_name(rk::reach_case(spec))},
                  {"n", n},
                  {"seed", seed}};
    std::cerr << meta.dump() << "\n";
    return 0;
}

int cmd_estimate(const std::string& in_path, const std::string& tangents,
                 std::optional<int> pca_k, std::optional<double> sparsify, double p,
                 bool json_out) {
    std::ifstream in(in_path);
    if (!in) {
        std::cerr << "error: cannot open " << in_path << "\n";
        return 2;
    }
    rk::CloudFile file = rk::read_cloud(in);
    rk::TangentCloud cloud = std::move(file.cloud);

    std::size_t n_after_sparsify = cloud.size();
    if (sparsify) {
        const auto idx = rk::farthest_point_sampling(cloud.points, *sparsify);
        if (idx.size() < 2) {
            std::cerr << "error: sparsification left fewer than 2 points\n";
            return 3;
        }
        cloud = cloud.subset(idx);
        n_after_sparsify = cloud.size();
    }

    if (tangents == "exact" || tangents == "file") {
        if (!cloud.has_frames()) {
            std::cerr << "error: --tangents " << tangents
                      << " requires frames in the input file\n";
            return 2;
        }
    } else if (tangents == "pca") {
        rk::PcaConfig cfg{pca_k, cloud.d};
        cloud.frames = rk::estimate_all_tangents(cloud.points, cfg);
    } else {
        std::cerr << "error: unknown --tangents mode '" << tangents << "'\n";
        return 2;
    }

    rk::ReachReport rep;
    try {
        rep = rk::estimate_reach(cloud);
    } catch (const rk::AllPairsDegenerate& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    (void)p;

    rk::json out = rk::report_to_json(rep);
    out["n_after_sparsify"] = n_after_sparsify;
    if (json_out)
        std::cout << out.dump() << "\n";
    else
        std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open " << config_path << "\n";
        return 2;
    }
    rk::ExperimentConfig cfg;
    try {
        cfg = rk::config_from_json(rk::json::parse(in));
    } catch (const std::exception& e) {
        std::cerr << "error: invalid config: " << e.what() << "\n";
        return 2;
    }
    const rk::ExperimentResult res = rk::run_experiment(cfg);

    std::filesystem::create_directories(out_dir);
    {
        std::ofstream jf(out_dir + "/result.json");
        jf << rk::result_to_json(res).dump(2) << "\n";
    }
    {
        std::ofstream cf(out_dir + "/result.csv");
        cf << rk::result_to_csv(res);
    }
    if (res.rate)
        std::cout << "rate fit: slope=" << res.rate->slope
                  << " intercept=" << res.rate->intercept << " r2=" << res.rate->r2 << "\n";
    else
        std::cout << "rate fit: exact model (zero loss)\n";
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
    std::vector<rk::Check> checks;
    if (suite == "geometry" || suite == "all") {
        auto g = rk::geometry_suite(seed);
        checks.insert(checks.end(), g.begin(), g.end());
    }
    if (suite == "bounds" || suite == "all") {
        auto b = rk::bounds_suite();
        checks.insert(checks.end(), b.begin(), b.end());
    }
    if (suite == "stability" || suite == "all") {
        auto s = rk::stability_suite(seed);
        checks.insert(checks.end(), s.begin(), s.end());
    }
    if (checks.empty()) {
        std::cerr << "error: unknown suite '" << suite << "'\n";
        return 2;
    }
    const rk::json rep = rk::checks_to_json(checks);
    std::cout << rep.dump(2) << "\n";
    return rep["passed"].get<bool>() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"reachkit: manifold reach estimation toolkit"};
    app.require_subcommand(1);

    std::string spec_str, out_path = "cloud.txt";
    std::size_t n = 100;
    std::uint64_t seed = 0;
    bool with_frames = false;
    auto* gen = app.add_subcommand("generate", "sample a synthetic manifold");
    gen->add_option("--spec", spec_str, "manifold spec JSON")->required();
    gen->add_option("-n,--n", n, "number of points");
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_flag("--frames", with_frames, "include analytic tangent frames");
    gen->add_option("--out", out_path, "output CloudFile path")->required();

    std::string in_path, tangents = "exact";
    std::optional<int> pca_k;
    std::optional<double> sparsify;
    double p = 1.0;
    bool json_out = false;
    auto* est = app.add_subcommand("estimate", "estimate reach from a CloudFile");
    est->add_option("--in", in_path, "input CloudFile")->required();
    est->add_option("--tangents", tangents, "exact|file|pca");
    est->add_option("--pca-k", pca_k, "PCA neighbor count");
    est->add_option("--sparsify", sparsify, "FPS sparsification epsilon");
    est->add_option("--p", p, "loss exponent");
    est->add_flag("--json", json_out, "compact JSON on stdout");

    std::string config_path, out_dir = "experiment_out";
    auto* exp = app.add_subcommand("experiment", "run a Monte-Carlo experiment");
    exp->add_option("--config", config_path, "ExperimentConfig JSON file")->required();
    exp->add_option("--out", out_dir, "output directory");

    std::string suite = "all";
    std::uint64_t verify_seed = 7;
    auto* ver = app.add_subcommand("verify", "run verification suites");
    ver->add_option("--suite", suite, "all|bounds|geometry|stability");
    ver->add_option("--seed", verify_seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_generate(spec_str, n, seed, with_frames, out_path);
        if (est->parsed()) return cmd_estimate(in_path, tangents, pca_k, sparsify, p, json_out);
        if (exp->parsed()) return cmd_experiment(config_path, out_dir);
        if (ver->parsed()) return cmd_verify(suite, verify_seed);
    } catch (const rk::AllPairsDegenerate& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
