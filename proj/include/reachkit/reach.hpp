#pragma once

// Federer-ratio reach estimator: infimum of ||y-x||^2 / (2 d(y-x, T_x)) over
// ordered point pairs, with an exact pruned scan (spatial hash grid), a
// brute-force reference, farthest point sampling, and the inverse-reach loss.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace reachkit {

// Denominators at or below this fraction of the chord length are treated as
// unconstraining: the ratio is conceptually infinite and never attains the
// infimum.
inline constexpr double kDegenerateDenomRel = 1e-14;

struct TangentCloud {
    std::vector<Vector> points;
    std::optional<std::vector<Frame>> frames;
    int d = 0;
    int D = 0;

    std::size_t size() const { return points.size(); }
    bool has_frames() const { return frames.has_value(); }

    // Validating constructor. Exact duplicates are a data error, not a
    // skippable pair: they would make delta-sparsity vacuous.
    static TangentCloud make(std::vector<Vector> points,
                             std::optional<std::vector<Frame>> frames,
                             int d) {
        TangentCloud c;
        if (points.empty()) throw Error("TangentCloud: empty point set");
        c.D = static_cast<int>(points[0].size());
        c.d = d;
        for (const auto& p : points) {
            if (static_cast<int>(p.size()) != c.D)
                throw DimensionMismatch("TangentCloud: ragged points");
            for (double v : p)
                if (!std::isfinite(v)) throw Error("TangentCloud: non-finite coordinate");
        }
        {
            std::vector<const Vector*> sorted;
            sorted.reserve(points.size());
            for (const auto& p : points) sorted.push_back(&p);
            std::sort(sorted.begin(), sorted.end(),
                      [](const Vector* a, const Vector* b) { return *a < *b; });
            for (std::size_t i = 1; i < sorted.size(); ++i)
                if (*sorted[i] == *sorted[i - 1])
                    throw IdenticalPoints("TangentCloud: exact duplicate points");
        }
        if (frames) {
            if (frames->size() != points.size())
                throw DimensionMismatch("TangentCloud: one frame per point required");
            for (const auto& f : *frames) {
                if (f.d != d || f.D != c.D)
                    throw DimensionMismatch("TangentCloud: frame shape mismatch");
                for (int i = 0; i < f.d; ++i)
                    for (int j = 0; j < f.d; ++j) {
                        double s = 0.0;
                        for (int k = 0; k < f.D; ++k) s += f.row(i)[k] * f.row(j)[k];
                        const double target = (i == j) ? 1.0 : 0.0;
                        if (std::abs(s - target) > 1e-10)
                            throw Error("TangentCloud: frame not orthonormal");
                    }
            }
            c.frames = std::move(frames);
        }
        c.points = std::move(points);
        return c;
    }

    TangentCloud subset(const std::vector<int>& idx) const {
        std::vector<Vector> pts;
        pts.reserve(idx.size());
        for (int i : idx) pts.push_back(points[i]);
        std::optional<std::vector<Frame>> frs;
        if (frames) {
            frs.emplace();
            frs->reserve(idx.size());
            for (int i : idx) frs->push_back((*frames)[i]);
        }
        return make(std::move(pts), std::move(frs), d);
    }
};

struct ReachReport {
    double tau_hat = 0.0;
    std::pair<int, int> argmin_pair{-1, -1}; // (base point x, other point y)
    std::uint64_t pairs_evaluated = 0;
    std::uint64_t pairs_pruned = 0;
    std::uint64_t skipped_degenerate = 0;
};

// Federer ratio at an ordered pair. nullopt = degenerate (chord tangent to
// T_x within tolerance; the pair imposes no constraint).
inline std::optional<double> pair_ratio(const Vector& x, const Frame& T_x, const Vector& y) {
    if (x == y) throw IdenticalPoints("pair_ratio: identical points");
    const Vector diff = sub(y, x);
    const double len = norm(diff);
    const double den = distance_to_subspace(diff, T_x);
    if (den <= kDegenerateDenomRel * len) return std::nullopt;
    return len * len / (2.0 * den);
}

namespace detail {

inline void check_estimable(const TangentCloud& cloud) {
    if (!cloud.has_frames()) throw MissingFrames("estimate_reach: cloud has no frames");
    if (cloud.size() < 2) throw Error("estimate_reach: need at least 2 points");
}

// Update rule shared by both scans: strict improvement, or equal value with
// lexicographically smaller (x, y). Deterministic across enumeration orders.
inline void consider(double ratio, int i, int j, double& best, std::pair<int, int>& argmin) {
    const std::pair<int, int> pr{i, j};
    if (ratio < best || (ratio == best && pr < argmin)) {
        best = ratio;
        argmin = pr;
    }
}

// Uniform hash grid over the first min(3, D) coordinates. Gridding a
// coordinate subset is conservative: subspace distance never exceeds the
// full Euclidean distance, so no candidate inside the query radius is lost.
class HashGrid {
public:
    HashGrid(const std::vector<Vector>& points, double cell)
        : cell_(cell), g_(std::min<int>(3, static_cast<int>(points[0].size()))) {
        buckets_.reserve(points.size());
        for (int i = 0; i < static_cast<int>(points.size()); ++i)
            buckets_[key_of(points[i].data())].push_back(i);
    }

    void gather(const Vector& p, std::vector<int>& out) const {
        out.clear();
        std::array<std::int64_t, 3> base{};
        for (int k = 0; k < g_; ++k)
            base[k] = static_cast<std::int64_t>(std::floor(p[k] / cell_));
        std::array<const std::vector<int>*, 27> seen{};
        int nseen = 0;
        std::array<std::int64_t, 3> c = base;
        const int lo = -1, hi = 1;
        for (int a = lo; a <= hi; ++a) {
            c[0] = base[0] + a;
            for (int b = (g_ > 1 ? lo : 0); b <= (g_ > 1 ? hi : 0); ++b) {
                if (g_ > 1) c[1] = base[1] + b;
                for (int d3 = (g_ > 2 ? lo : 0); d3 <= (g_ > 2 ? hi : 0); ++d3) {
                    if (g_ > 2) c[2] = base[2] + d3;
                    const auto it = buckets_.find(key_cells(c));
                    if (it == buckets_.end()) continue;
                    bool dup = false;
                    for (int s = 0; s < nseen; ++s)
                        if (seen[s] == &it->second) dup = true;
                    if (dup) continue;
                    seen[nseen++] = &it->second;
                    out.insert(out.end(), it->second.begin(), it->second.end());
                }
            }
        }
    }

private:
    std::uint64_t key_of(const double* p) const {
        std::array<std::int64_t, 3> c{};
        for (int k = 0; k < g_; ++k)
            c[k] = static_cast<std::int64_t>(std::floor(p[k] / cell_));
        return key_cells(c);
    }

    std::uint64_t key_cells(const std::array<std::int64_t, 3>& c) const {
        std::uint64_t h = 0x12345678abcdef01ULL;
        for (int k = 0; k < g_; ++k)
            h = mix64(h ^ static_cast<std::uint64_t>(c[k]));
        return h;
    }

    double cell_;
    int g_;
    std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

} // namespace detail

// Reference oracle: plain double loop over ordered pairs.
inline ReachReport estimate_reach_bruteforce(const TangentCloud& cloud) {
    detail::check_estimable(cloud);
    const int n = static_cast<int>(cloud.size());
    const auto& frames = *cloud.frames;

    ReachReport rep;
    double best = std::numeric_limits<double>::infinity();
    std::pair<int, int> argmin{std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto r = pair_ratio(cloud.points[i], frames[i], cloud.points[j]);
            if (!r) {
                ++rep.skipped_degenerate;
                continue;
            }
            ++rep.pairs_evaluated;
            detail::consider(*r, i, j, best, argmin);
        }
    }
    if (!std::isfinite(best))
        throw AllPairsDegenerate("estimate_reach: every ordered pair is degenerate");
    rep.tau_hat = best;
    rep.argmin_pair = argmin;
    rep.pairs_pruned = 0;
    return rep;
}

// Pruned scan. Since d(y-x, T_x) <= ||y-x||, every pair satisfies
// ratio >= ||y-x||/2, so pairs with ||y-x|| > 2*(running minimum) cannot
// improve it. Equals the brute-force oracle bitwise on tau_hat and on the
// argmin pair. Pairs never enumerated or outside the radius are reported as
// pruned.
inline ReachReport estimate_reach(const TangentCloud& cloud) {
    detail::check_estimable(cloud);
    const int n = static_cast<int>(cloud.size());
    if (n < 256) return estimate_reach_bruteforce(cloud);
    const auto& pts = cloud.points;
    const auto& frames = *cloud.frames;

    // Seed a finite bound: scan base points in order until one yields a
    // non-degenerate ratio.
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n && !std::isfinite(best); ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto r = pair_ratio(pts[i], frames[i], pts[j]);
            if (r && *r < best) best = *r;
        }
    if (!std::isfinite(best))
        throw AllPairsDegenerate("estimate_reach: every ordered pair is degenerate");

    // Shrink the minimum to its exact value; rebuild the grid whenever the
    // running minimum halves. Pruning is conservative at every step, so a
    // completed pass certifies the global minimum.
    std::vector<int> cand;
    for (;;) {
        const double basis = best;
        detail::HashGrid grid(pts, 2.0 * basis);
        for (int i = 0; i < n; ++i) {
            grid.gather(pts[i], cand);
            for (int j : cand) {
                if (j == i) continue;
                if (dist2(pts[i], pts[j]) > 4.0 * best * best) continue;
                const auto r = pair_ratio(pts[i], frames[i], pts[j]);
                if (r && *r < best) best = *r;
            }
        }
        if (best >= 0.5 * basis) break;
    }

    // Counted pass at the certified minimum: deterministic statistics and
    // lexicographic argmin among exact ties.
    ReachReport rep;
    double tau = std::numeric_limits<double>::infinity();
    std::pair<int, int> argmin{std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
    detail::HashGrid grid(pts, 2.0 * best);
    for (int i = 0; i < n; ++i) {
        grid.gather(pts[i], cand);
        for (int j : cand) {
            if (j == i) continue;
            if (dist2(pts[i], pts[j]) > 4.0 * best * best) continue;
            const auto r = pair_ratio(pts[i], frames[i], pts[j]);
            if (!r) {
                ++rep.skipped_degenerate;
                continue;
            }
            ++rep.pairs_evaluated;
            detail::consider(*r, i, j, tau, argmin);
        }
    }
    rep.tau_hat = tau;
    rep.argmin_pair = argmin;
    rep.pairs_pruned = static_cast<std::uint64_t>(n) * (n - 1) -
                       rep.pairs_evaluated - rep.skipped_degenerate;
    return rep;
}

// Greedy farthest point sampling from index 0, ties broken by smallest
// index. Output is epsilon-sparse and epsilon-covering.
inline std::vector<int> farthest_point_sampling(const std::vector<Vector>& points,
                                                double epsilon) {
    if (points.empty()) throw Error("farthest_point_sampling: empty input");
    if (!(epsilon > 0.0)) throw Error("farthest_point_sampling: epsilon must be > 0");
    const int n = static_cast<int>(points.size());
    std::vector<int> selected{0};
    std::vector<double> dist(n);
    for (int i = 0; i < n; ++i) dist[i] = std::sqrt(dist2(points[i], points[0]));
    for (;;) {
        int far = 0;
        for (int i = 1; i < n; ++i)
            if (dist[i] > dist[far]) far = i;
        if (dist[far] < epsilon) break;
        selected.push_back(far);
        for (int i = 0; i < n; ++i)
            dist[i] = std::min(dist[i], std::sqrt(dist2(points[i], points[far])));
    }
    return selected;
}

// ell(tau, tau') = |1/tau - 1/tau'|^p
inline double loss(double tau, double tau_prime, double p) {
    if (!(tau > 0.0) || !(tau_prime > 0.0))
        throw NonPositiveReach("loss: reach values must be positive");
    if (!(p >= 1.0)) throw Error("loss: exponent p must be >= 1");
    return std::pow(std::abs(1.0 / tau - 1.0 / tau_prime), p);
}

} // namespace reachkit
