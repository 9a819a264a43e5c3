#include <catch2/catch_amalgamated.hpp>

#include <reachkit/manifolds.hpp>
#include <reachkit/reach.hpp>
#include <reachkit/rng.hpp>

using namespace reachkit;

namespace {

Frame line_frame(Vector dir) {
    return orthonormalize({std::move(dir)});
}

// Random cloud in a box with random unit-line frames; occasionally plants
// exactly tangential pairs so the degenerate path gets exercised.
TangentCloud random_cloud(Rng& rng, int n, int D, bool plant_degenerate) {
    std::vector<Vector> pts;
    std::vector<Frame> frs;
    for (int i = 0; i < n; ++i) {
        Vector p(D);
        for (auto& c : p) c = rng.uniform(-1.0, 1.0);
        Vector dir(D);
        for (auto& c : dir) c = rng.normal();
        pts.push_back(std::move(p));
        frs.push_back(line_frame(std::move(dir)));
    }
    if (plant_degenerate && n >= 2) {
        // make point 1 lie exactly along point 0's tangent line
        const Frame& f = frs[0];
        Vector q = pts[0];
        for (int k = 0; k < D; ++k) q[k] += 0.25 * f.row(0)[k];
        pts[1] = q;
    }
    return TangentCloud::make(std::move(pts), std::move(frs), 1);
}

} // namespace

TEST_CASE("pair_ratio examples") {
    const Frame e2 = line_frame({0.0, 1.0});
    const Frame e1 = line_frame({1.0, 0.0});

    SECTION("circle identity") {
        const auto r = pair_ratio({1, 0}, e2, {0, 1});
        REQUIRE(r);
        CHECK_THAT(*r, Catch::Matchers::WithinAbs(1.0, 1e-15));
    }
    SECTION("purely normal offset") {
        const auto r = pair_ratio({0, 0}, e1, {0, 2});
        REQUIRE(r);
        CHECK_THAT(*r, Catch::Matchers::WithinAbs(1.0, 1e-15));
    }
    SECTION("tangential pair degenerate") {
        CHECK_FALSE(pair_ratio({0, 0}, e1, {1, 0}).has_value());
    }
    SECTION("identical points") {
        CHECK_THROWS_AS(pair_ratio({1, 1}, e1, {1, 1}), IdenticalPoints);
    }
}

TEST_CASE("estimate_reach examples") {
    SECTION("100 circle points, exact tangents") {
        // Thin to a well-separated subset first: nearly-coincident samples
        // round the Federer denominator into its last bits and the recovered
        // radius drifts by ~eps * (2R / min_gap)^2.
        const TangentCloud raw = sample(Circle{1.0}, 400, 5, true);
        const std::vector<int> order = farthest_point_sampling(raw.points, 1e-12);
        const TangentCloud cloud = raw.subset({order.begin(), order.begin() + 100});
        const ReachReport rep = estimate_reach(cloud);
        CHECK_THAT(rep.tau_hat, Catch::Matchers::WithinRel(1.0, 1e-12));
    }
    SECTION("100 raw circle points stay within last-bit noise") {
        const TangentCloud cloud = sample(Circle{1.0}, 100, 5, true);
        const ReachReport rep = estimate_reach(cloud);
        CHECK_THAT(rep.tau_hat, Catch::Matchers::WithinRel(1.0, 1e-8));
    }
    SECTION("two-point hand computation") {
        const TangentCloud cloud = TangentCloud::make(
            {{0, 0}, {1, 1}}, std::vector<Frame>{line_frame({1, 0}), line_frame({1, 0})}, 1);
        const ReachReport rep = estimate_reach(cloud);
        CHECK_THAT(rep.tau_hat, Catch::Matchers::WithinAbs(1.0, 1e-15));
        CHECK(rep.argmin_pair == std::pair<int, int>{0, 1});
    }
    SECTION("torus 2000 points") {
        const TangentCloud cloud = sample(Torus{2.0, 0.5}, 2000, 9, true);
        const ReachReport rep = estimate_reach(cloud);
        CHECK(rep.tau_hat >= 0.5);
        CHECK(rep.tau_hat <= 0.6);
    }
    SECTION("missing frames") {
        const TangentCloud cloud = sample(Circle{1.0}, 10, 5, false);
        CHECK_THROWS_AS(estimate_reach(cloud), MissingFrames);
    }
    SECTION("all pairs degenerate") {
        // two points along each other's tangent lines
        const TangentCloud cloud = TangentCloud::make(
            {{0, 0}, {1, 0}}, std::vector<Frame>{line_frame({1, 0}), line_frame({1, 0})}, 1);
        CHECK_THROWS_AS(estimate_reach(cloud), AllPairsDegenerate);
        CHECK_THROWS_AS(estimate_reach_bruteforce(cloud), AllPairsDegenerate);
    }
}

TEST_CASE("report invariants") {
    const TangentCloud cloud = sample(Torus{2.0, 0.5}, 600, 21, true);
    const ReachReport rep = estimate_reach(cloud);
    const std::uint64_t total = static_cast<std::uint64_t>(cloud.size()) * (cloud.size() - 1);
    CHECK(rep.pairs_evaluated + rep.pairs_pruned + rep.skipped_degenerate == total);
    const auto [i, j] = rep.argmin_pair;
    const auto r = pair_ratio(cloud.points[i], (*cloud.frames)[i], cloud.points[j]);
    REQUIRE(r);
    CHECK_THAT(rep.tau_hat, Catch::Matchers::WithinRel(*r, 1e-15));
}

TEST_CASE("oracle equivalence on random clouds") {
    Rng rng(777);
    for (int iter = 0; iter < 50; ++iter) {
        const int n = 2 + static_cast<int>(rng.index(499));
        const int D = 2 + static_cast<int>(rng.index(3));
        const bool plant = iter % 3 == 0;
        const TangentCloud cloud = random_cloud(rng, n, D, plant);
        ReachReport a, b;
        bool threw_a = false, threw_b = false;
        try {
            a = estimate_reach(cloud);
        } catch (const AllPairsDegenerate&) {
            threw_a = true;
        }
        try {
            b = estimate_reach_bruteforce(cloud);
        } catch (const AllPairsDegenerate&) {
            threw_b = true;
        }
        REQUIRE(threw_a == threw_b);
        if (threw_a) continue;
        CHECK(a.tau_hat == b.tau_hat); // bitwise
        CHECK(a.argmin_pair == b.argmin_pair);
    }
}

TEST_CASE("duplicate points rejected at construction") {
    CHECK_THROWS_AS(TangentCloud::make({{1, 2}, {1, 2}}, std::nullopt, 1), IdenticalPoints);
}

TEST_CASE("degenerate pair never changes tau_hat") {
    // p0, p1 give ratio 1 both ways; p2 forms exactly tangential pairs with
    // p0 and its remaining pairs have ratio 1.25, so tau_hat must stay 1.
    const Frame e1 = line_frame({1.0, 0.0});
    const TangentCloud base = TangentCloud::make(
        {{0, 0}, {0, 2}}, std::vector<Frame>{e1, e1}, 1);
    const double before = estimate_reach(base).tau_hat;
    CHECK(before == 1.0);

    const TangentCloud grown = TangentCloud::make(
        {{0, 0}, {0, 2}, {1, 0}}, std::vector<Frame>{e1, e1, e1}, 1);
    const ReachReport rep = estimate_reach(grown);
    CHECK(rep.tau_hat == before);
    CHECK(rep.skipped_degenerate == 2);
    CHECK_FALSE(pair_ratio(grown.points[0], (*grown.frames)[0], grown.points[2]));
}

TEST_CASE("scale equivariance") {
    const TangentCloud cloud = sample(Ellipse{2.0, 1.0}, 300, 13, true);
    const double base = estimate_reach(cloud).tau_hat;
    for (double s : {0.25, 3.0, 117.5}) {
        std::vector<Vector> pts;
        for (const auto& p : cloud.points) pts.push_back(scale(p, s));
        const TangentCloud scaled = TangentCloud::make(std::move(pts), *cloud.frames, 1);
        const double got = estimate_reach(scaled).tau_hat;
        CHECK_THAT(got, Catch::Matchers::WithinRel(s * base, 1e-12));
    }
}

TEST_CASE("rigid motion invariance") {
    const TangentCloud cloud = sample(Torus{2.0, 0.5}, 400, 17, true);
    const double base = estimate_reach(cloud).tau_hat;

    // random rotation from orthonormalized Gaussian rows (3x3 needs a square
    // trick: extend with a helper dimension is not allowed, so build from
    // Gram-Schmidt on 3 Gaussian vectors directly)
    Rng rng(55);
    Vector a(3), b(3), c(3);
    for (auto& v : a) v = rng.normal();
    for (auto& v : b) v = rng.normal();
    for (auto& v : c) v = rng.normal();
    std::vector<Vector> rows{a, b, c};
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < i; ++k) {
            const double d = dot(rows[i], rows[k]);
            for (int m = 0; m < 3; ++m) rows[i][m] -= d * rows[k][m];
        }
        const double nn = norm(rows[i]);
        for (int m = 0; m < 3; ++m) rows[i][m] /= nn;
    }
    const Vector shift{0.7, -1.3, 2.2};
    const auto rotate = [&](const Vector& v) {
        Vector out(3, 0.0);
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) out[i] += rows[i][k] * v[k];
        return out;
    };

    std::vector<Vector> pts;
    std::vector<Frame> frs;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        pts.push_back(add(rotate(cloud.points[i]), shift));
        const Frame& f = (*cloud.frames)[i];
        std::vector<Vector> fr;
        for (int r = 0; r < f.d; ++r) fr.push_back(rotate(f.row_vec(r)));
        frs.push_back(orthonormalize(fr));
    }
    const TangentCloud moved = TangentCloud::make(std::move(pts), std::move(frs), 2);
    CHECK_THAT(estimate_reach(moved).tau_hat, Catch::Matchers::WithinRel(base, 1e-10));
}

TEST_CASE("monotonicity on nested subsets") {
    Rng rng(8675309);
    const TangentCloud cloud = sample(Torus{2.0, 1.3}, 500, 3, true);
    const double tau_true = *true_reach(Torus{2.0, 1.3}).exact;
    const double tau_full = estimate_reach(cloud).tau_hat;
    CHECK(tau_full >= tau_true * (1.0 - 1e-12));
    for (int iter = 0; iter < 10; ++iter) {
        std::vector<int> idx;
        for (int i = 0; i < static_cast<int>(cloud.size()); ++i)
            if (rng.uniform() < 0.5) idx.push_back(i);
        if (idx.size() < 2) continue;
        const double tau_sub = estimate_reach(cloud.subset(idx)).tau_hat;
        CHECK(tau_sub >= tau_full - 1e-15);
    }
}

TEST_CASE("farthest_point_sampling examples") {
    SECTION("epsilon above diameter") {
        const std::vector<Vector> pts{{0.0}, {1.0}, {2.0}};
        CHECK(farthest_point_sampling(pts, 10.0) == std::vector<int>{0});
    }
    SECTION("hand-run on a line") {
        const std::vector<Vector> pts{{0.0}, {1.0}, {2.0}, {3.0}};
        CHECK(farthest_point_sampling(pts, 1.5) == std::vector<int>{0, 3});
    }
    SECTION("epsilon below min pairwise distance keeps everything") {
        const std::vector<Vector> pts{{0.0}, {1.0}, {2.0}, {3.0}};
        const auto idx = farthest_point_sampling(pts, 0.5);
        CHECK(idx.size() == pts.size());
        CHECK(idx[0] == 0);
    }
    SECTION("bad epsilon") {
        CHECK_THROWS_AS(farthest_point_sampling({{0.0}}, 0.0), Error);
    }
}

TEST_CASE("farthest_point_sampling sparse and covering") {
    Rng rng(99);
    std::vector<Vector> pts;
    for (int i = 0; i < 300; ++i) {
        Vector p(3);
        for (auto& c : p) c = rng.uniform(-1.0, 1.0);
        pts.push_back(std::move(p));
    }
    const double eps = 0.4;
    const auto idx = farthest_point_sampling(pts, eps);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j)
            CHECK(std::sqrt(dist2(pts[idx[i]], pts[idx[j]])) >= eps);
    for (const auto& p : pts) {
        double best = std::numeric_limits<double>::infinity();
        for (int k : idx) best = std::min(best, std::sqrt(dist2(p, pts[k])));
        CHECK(best < eps);
    }
}

TEST_CASE("loss examples") {
    CHECK(loss(1.5, 1.5, 2.0) == 0.0);
    CHECK_THAT(loss(1.0, 2.0, 1.0), Catch::Matchers::WithinAbs(0.5, 1e-15));
    CHECK_THAT(loss(1.0, 2.0, 2.0), Catch::Matchers::WithinAbs(0.25, 1e-15));
    CHECK_THROWS_AS(loss(0.0, 1.0, 1.0), NonPositiveReach);
    CHECK_THROWS_AS(loss(1.0, -2.0, 1.0), NonPositiveReach);
}
