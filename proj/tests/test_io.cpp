#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <reachkit/cloud_io.hpp>
#include <reachkit/json_io.hpp>
#include <reachkit/manifolds.hpp>

using namespace reachkit;

TEST_CASE("CloudFile round trip is exact") {
    const TangentCloud cloud = sample(Torus{2.0, 0.5}, 257, 99, true);
    std::stringstream ss;
    write_cloud(ss, cloud, spec_to_json(Torus{2.0, 0.5}).dump());
    const CloudFile back = read_cloud(ss);

    REQUIRE(back.cloud.size() == cloud.size());
    CHECK(back.cloud.d == cloud.d);
    CHECK(back.cloud.D == cloud.D);
    REQUIRE(back.spec_json);
    CHECK(spec_from_json(json::parse(*back.spec_json)).index() == ManifoldSpec{Torus{}}.index());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        CHECK(back.cloud.points[i] == cloud.points[i]); // bitwise via %.17g
        CHECK((*back.cloud.frames)[i].data == (*cloud.frames)[i].data);
    }
}

TEST_CASE("CloudFile without frames") {
    const TangentCloud cloud = sample(Circle{1.0}, 50, 2, false);
    std::stringstream ss;
    write_cloud(ss, cloud);
    const CloudFile back = read_cloud(ss);
    CHECK_FALSE(back.cloud.has_frames());
    CHECK_FALSE(back.spec_json);
    CHECK(back.cloud.points == cloud.points);
}

TEST_CASE("CloudFile rejects malformed input") {
    {
        std::stringstream ss("bogus 2 1 0\n1 2\n");
        CHECK_THROWS_AS(read_cloud(ss), Error);
    }
    {
        std::stringstream ss("reachkit/1 2 1 0\n1 2 3\n");
        CHECK_THROWS_AS(read_cloud(ss), Error); // row width mismatch
    }
    {
        std::stringstream ss("");
        CHECK_THROWS_AS(read_cloud(ss), Error);
    }
}

TEST_CASE("spec JSON round trip") {
    const std::vector<ManifoldSpec> specs{
        Circle{1.5}, Sphere{2, 5, 2.0, {0, 0, 0, 1, 0}}, Ellipse{2.0, 1.0},
        Torus{2.0, 1.3}, BumpedSphere{2, 3, 1.0, 0.2, 0.02}};
    for (const auto& spec : specs) {
        const ManifoldSpec back = spec_from_json(spec_to_json(spec));
        CHECK(spec_to_json(back) == spec_to_json(spec));
    }
    CHECK_THROWS_AS(spec_from_json(json{{"variant", "mobius"}}), InvalidSpec);
    CHECK_THROWS_AS(spec_from_json(json::parse("{\"variant\":\"torus\",\"R\":1,\"r\":2}")),
                    InvalidSpec);
}

TEST_CASE("experiment config JSON round trip") {
    ExperimentConfig cfg;
    cfg.spec = Torus{2.0, 0.5};
    cfg.n_grid = {128, 256, 512};
    cfg.trials = 5;
    cfg.seed = 42;
    cfg.tangent_mode = PcaTangents{17};
    cfg.p = 2.0;
    cfg.sparsify_epsilon = 0.01;
    cfg.model_class = ModelClassParams{0.5, 4.0, 0.01, 2.0};

    const json j = config_to_json(cfg);
    CHECK(j.at("format") == "reachkit/1");
    const ExperimentConfig back = config_from_json(j);
    CHECK(config_to_json(back) == j);
    CHECK(std::get<PcaTangents>(back.tangent_mode).k == 17);
}

TEST_CASE("result JSON and CSV shapes") {
    ExperimentConfig cfg;
    cfg.spec = Ellipse{2.0, 1.0};
    cfg.n_grid = {32, 64, 128};
    cfg.trials = 3;
    cfg.seed = 6;
    const ExperimentResult res = run_experiment(cfg);

    const json j = result_to_json(res);
    CHECK(j.at("rows").size() == 9);
    CHECK(j.at("stats").size() == 3);
    CHECK(j.contains("rate_fit"));

    const std::string csv = result_to_csv(res);
    CHECK(csv.rfind("n,trial,tau_hat,loss\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);

    // a missing fit (some mean loss exactly zero) serializes as "exact_model"
    ExperimentResult zero;
    zero.rows = {{16, 0, 1.0, 0.0}};
    zero.stats = {{16, 0.0, 0.0, 0.0, 0.0}};
    zero.rate = std::nullopt;
    const json je = result_to_json(zero);
    CHECK(je.at("rate_fit") == "exact_model");
}

TEST_CASE("checks JSON carries pass flag") {
    const std::vector<Check> checks{make_check("a", 0.0, 1.0), make_check("b", 2.0, 1.0)};
    const json j = checks_to_json(checks);
    CHECK(j.at("passed") == false);
    CHECK(j.at("checks").size() == 2);
    CHECK(j.at("checks")[0].at("ok") == true);
}
