#pragma once

// Monte-Carlo harness: per-trial estimation with exact / PCA / perturbed
// frames, loss tables with log-log rate fits, and the deterministic bound
// probes (tangent stability, global bottleneck, local curvature).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "manifolds.hpp"
#include "reach.hpp"
#include "rng.hpp"
#include "tangents.hpp"

namespace reachkit {

struct ModelClassParams {
    double tau_min = 0.0;
    double L = std::numeric_limits<double>::infinity();
    double f_min = 0.0;
    double p = 1.0;
};

struct ExactTangents {};
struct PcaTangents {
    std::optional<int> k;
};
struct PerturbedTangents {
    double theta = 0.0;
};
using TangentMode = std::variant<ExactTangents, PcaTangents, PerturbedTangents>;

struct ExperimentConfig {
    ManifoldSpec spec;
    std::vector<std::size_t> n_grid;
    int trials = 1;
    std::uint64_t seed = 0;
    TangentMode tangent_mode = ExactTangents{};
    double p = 1.0;
    std::optional<double> sparsify_epsilon;
    std::optional<ModelClassParams> model_class; // recorded metadata only
};

struct TrialRow {
    std::size_t n = 0;
    int trial = 0;
    double tau_hat = 0.0;
    double loss = 0.0;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

struct NStats {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
};

struct ExperimentResult {
    std::vector<TrialRow> rows;     // |n_grid| * trials, (n asc, trial asc)
    std::vector<NStats> stats;      // per n
    std::optional<RateFit> rate;    // absent when some mean loss is 0 (exact model)
    bool loss_vs_upper_bound = false; // set for models without exact reach
};

inline unsigned resolve_thread_count() {
    if (const char* env = std::getenv("REACHKIT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

template <class F>
inline void parallel_for(std::size_t count, F&& body) {
    const unsigned workers = std::min<std::size_t>(resolve_thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (auto& t : pool) t.join();
}

// Rotate each frame by a random angle <= theta within a random 2-plane
// containing one frame vector; the complement direction is orthogonal to
// the whole frame, so the result stays orthonormal.
inline std::vector<Frame> perturb_frames(const std::vector<Frame>& frames, double theta,
                                         Rng& rng) {
    std::vector<Frame> out = frames;
    for (auto& f : out) {
        const double alpha = theta * rng.uniform();
        const int ri = static_cast<int>(rng.index(f.d));
        Vector w(f.D);
        for (;;) {
            for (int k = 0; k < f.D; ++k) w[k] = rng.normal();
            for (int i = 0; i < f.d; ++i) {
                double c = 0.0;
                for (int k = 0; k < f.D; ++k) c += w[k] * f.row(i)[k];
                for (int k = 0; k < f.D; ++k) w[k] -= c * f.row(i)[k];
            }
            const double nw = norm(w);
            if (nw > 1e-8) {
                for (int k = 0; k < f.D; ++k) w[k] /= nw;
                break;
            }
        }
        const double c = std::cos(alpha), s = std::sin(alpha);
        double* r = f.row(ri);
        for (int k = 0; k < f.D; ++k) r[k] = c * r[k] + s * w[k];
    }
    return out;
}

struct TrialOutcome {
    double tau_hat = 0.0;
    double loss = 0.0;
    bool loss_vs_upper_bound = false;
};

inline TrialOutcome run_trial(const ManifoldSpec& spec, std::size_t n,
                              const TangentMode& mode, double p, std::uint64_t seed,
                              std::optional<double> sparsify_epsilon = std::nullopt) {
    TangentCloud cloud = sample(spec, n, seed, true);
    if (sparsify_epsilon) {
        const auto idx = farthest_point_sampling(cloud.points, *sparsify_epsilon);
        cloud = cloud.subset(idx);
    }

    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, PcaTangents>) {
                PcaConfig cfg{m.k, intrinsic_dim(spec)};
                cloud.frames = estimate_all_tangents(cloud.points, cfg);
            } else if constexpr (std::is_same_v<M, PerturbedTangents>) {
                Rng prng(mix_seed(seed, 0x70657274ULL, 0));
                cloud.frames = perturb_frames(*cloud.frames, m.theta, prng);
            }
        },
        mode);

    const ReachReport rep = estimate_reach(cloud);
    const TrueReach tr = true_reach(spec);
    TrialOutcome out;
    out.tau_hat = rep.tau_hat;
    if (tr.exact) {
        out.loss = loss(*tr.exact, rep.tau_hat, p);
    } else if (tr.upper) {
        out.loss = loss(*tr.upper, rep.tau_hat, p);
        out.loss_vs_upper_bound = true;
    } else {
        throw Error("run_trial: model has no reach reference value");
    }
    return out;
}

// OLS of log(mean loss) on log(n).
inline RateFit fit_rate(const std::vector<std::pair<double, double>>& means) {
    if (means.size() < 3) throw Error("fit_rate: need at least 3 points");
    for (const auto& [n, m] : means)
        if (!(m > 0.0)) throw Error("fit_rate: zero loss (exact model)");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double k = static_cast<double>(means.size());
    for (const auto& [n, m] : means) {
        const double x = std::log(n), y = std::log(m);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    RateFit fit;
    fit.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / k;
    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / k;
    for (const auto& [n, m] : means) {
        const double y = std::log(m);
        const double yhat = fit.intercept + fit.slope * std::log(n);
        ss_res += (y - yhat) * (y - yhat);
        ss_tot += (y - ybar) * (y - ybar);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

namespace detail {

inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * (v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - lo;
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

} // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw Error("run_experiment: trials must be >= 1");
    for (std::size_t i = 1; i < cfg.n_grid.size(); ++i)
        if (cfg.n_grid[i] <= cfg.n_grid[i - 1])
            throw Error("run_experiment: n_grid must be ascending");

    ExperimentResult res;
    res.rows.resize(cfg.n_grid.size() * cfg.trials);
    std::atomic<bool> upper_flag{false};

    // Pre-sized result slots keyed by (n index, trial); per-trial seeds come
    // from an avalanche mix, so completion order is irrelevant.
    parallel_for(res.rows.size(), [&](std::size_t task) {
        const std::size_t ni = task / cfg.trials;
        const int trial = static_cast<int>(task % cfg.trials);
        const std::size_t n = cfg.n_grid[ni];
        const std::uint64_t seed = mix_seed(cfg.seed, n, static_cast<std::uint64_t>(trial));
        const TrialOutcome out =
            run_trial(cfg.spec, n, cfg.tangent_mode, cfg.p, seed, cfg.sparsify_epsilon);
        res.rows[task] = TrialRow{n, trial, out.tau_hat, out.loss};
        if (out.loss_vs_upper_bound) upper_flag.store(true);
    });
    res.loss_vs_upper_bound = upper_flag.load();

    std::vector<std::pair<double, double>> means;
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        std::vector<double> losses;
        losses.reserve(cfg.trials);
        for (int t = 0; t < cfg.trials; ++t)
            losses.push_back(res.rows[ni * cfg.trials + t].loss);
        NStats st;
        st.n = cfg.n_grid[ni];
        double sum = 0.0;
        for (double l : losses) sum += l;
        st.mean = sum / losses.size();
        st.median = detail::quantile(losses, 0.5);
        st.q1 = detail::quantile(losses, 0.25);
        st.q3 = detail::quantile(losses, 0.75);
        res.stats.push_back(st);
        means.emplace_back(static_cast<double>(st.n), st.mean);
    }

    bool all_positive = true;
    for (const auto& [n, m] : means)
        if (!(m > 0.0)) all_positive = false;
    if (all_positive && means.size() >= 3) res.rate = fit_rate(means);
    return res;
}

// ---------------------------------------------------------------------------
// Deterministic bound probes.

struct ProbeReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

// Tangent stability: |1/tau(X,T) - 1/tau(X,T~)| <= 2 sin(theta) / delta for a
// delta-sparse cloud and theta-close frames. FPS enforces the sparsity; delta
// is the measured minimum pairwise distance of the sparsified subset.
inline ProbeReport stability_probe(const ManifoldSpec& spec, std::size_t n, double theta,
                                   std::uint64_t seed,
                                   std::optional<double> epsilon = std::nullopt) {
    TangentCloud cloud = sample(spec, n, seed, true);

    double eps = epsilon.value_or(0.0);
    if (!epsilon) {
        Vector lo = cloud.points[0], hi = cloud.points[0];
        for (const auto& p : cloud.points)
            for (std::size_t k = 0; k < p.size(); ++k) {
                lo[k] = std::min(lo[k], p[k]);
                hi[k] = std::max(hi[k], p[k]);
            }
        eps = 0.05 * norm(sub(hi, lo));
    }
    const auto idx = farthest_point_sampling(cloud.points, eps);
    cloud = cloud.subset(idx);

    double delta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t j = i + 1; j < cloud.size(); ++j)
            delta = std::min(delta, std::sqrt(dist2(cloud.points[i], cloud.points[j])));

    const double tau_exact = estimate_reach(cloud).tau_hat;
    Rng prng(mix_seed(seed, 0x737461ULL, 0));
    TangentCloud perturbed = cloud;
    perturbed.frames = perturb_frames(*cloud.frames, theta, prng);
    const double tau_pert = estimate_reach(perturbed).tau_hat;

    ProbeReport rep;
    rep.name = "tangent_stability";
    rep.lhs = std::abs(1.0 / tau_exact - 1.0 / tau_pert);
    rep.rhs = 2.0 * std::sin(theta) / delta;
    rep.ok = rep.lhs <= rep.rhs + 1e-9;
    return rep;
}

// Global case on a torus with r > R - r: bottleneck pair q1 = (R-r, 0, 0),
// q2 = -q1 on the inner equator. x, y sit at inner-equator path length t from
// q1, q2; path length upper-bounds geodesic distance and the bound is
// monotone in it, so 1/tau - 1/tau({x,y}) <= 4 t / tau^2 is implied.
inline ProbeReport global_bound_probe(const Torus& torus, double t) {
    if (!(torus.r > torus.R - torus.r))
        throw UnsupportedSpec("global_bound_probe: needs a torus with r > R - r");
    const double tau = torus.R - torus.r;
    if (!(t >= 0.0) || !(t < tau))
        throw Error("global_bound_probe: need 0 <= t < tau");

    // Leave the inner equator along the tube circles (path length t each),
    // otherwise every placement would stay on a circle of radius tau and the
    // check would be vacuous.
    const double du = t / torus.r;
    const Vector x = detail::torus_point(torus, M_PI - du, 0.0);
    const Vector y = detail::torus_point(torus, M_PI - du, M_PI);
    std::vector<Frame> frames{detail::torus_frame(torus, M_PI - du, 0.0),
                              detail::torus_frame(torus, M_PI - du, M_PI)};
    const TangentCloud pair = TangentCloud::make({x, y}, std::move(frames), 2);
    const double tau_hat = estimate_reach(pair).tau_hat;

    ProbeReport rep;
    rep.name = "global_bound t=" + std::to_string(t);
    rep.lhs = 1.0 / tau - 1.0 / tau_hat;
    rep.rhs = 4.0 * t / (tau * tau);
    rep.ok = rep.lhs <= rep.rhs + 1e-9;
    return rep;
}

namespace detail {

// Max finite-difference third-derivative norm along a closed curve.
inline double measure_third_derivative(const std::function<Vector(double)>& at,
                                       double length, int grid = 64) {
    const double h = 1e-3 * length / (2.0 * M_PI);
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double t = length * i / grid;
        const Vector p2 = at(t + 2.0 * h), p1 = at(t + h), m1 = at(t - h), m2 = at(t - 2.0 * h);
        double s = 0.0;
        for (std::size_t k = 0; k < p2.size(); ++k) {
            const double g = (p2[k] - 2.0 * p1[k] + 2.0 * m1[k] - m2[k]) / (2.0 * h * h * h);
            s += g * g;
        }
        worst = std::max(worst, std::sqrt(s));
    }
    return worst;
}

} // namespace detail

// Local case on a torus with r < R - r. q0 = (R+r, 0, 0); the tube circle
// through q0 has ||gamma''|| = 1/r = 1/tau. x and y are placed at path
// length t along the tube circle (angles 0 and pi against gamma0') or the
// outer equator (angle pi/2). Requires |angle_x - angle_y| >= pi/2.
inline ProbeReport local_bound_probe(const Torus& torus, double t, double angle_x,
                                     double angle_y) {
    if (!(torus.r < torus.R - torus.r))
        throw UnsupportedSpec("local_bound_probe: needs a torus with r < R - r");
    if (std::abs(angle_x - angle_y) < M_PI / 2.0 - 1e-12)
        throw Error("local_bound_probe: alignment precondition |angle_x - angle_y| >= pi/2");
    const double tau = torus.r;

    const auto place = [&](double angle) -> std::pair<Vector, Frame> {
        if (std::abs(angle) < 1e-12) // along the tube circle, +t
            return {detail::torus_point(torus, t / torus.r, 0.0),
                    detail::torus_frame(torus, t / torus.r, 0.0)};
        if (std::abs(angle - M_PI) < 1e-12) // along the tube circle, -t
            return {detail::torus_point(torus, -t / torus.r, 0.0),
                    detail::torus_frame(torus, -t / torus.r, 0.0)};
        if (std::abs(angle - M_PI / 2.0) < 1e-12) { // along the outer equator
            const double dv = t / (torus.R + torus.r);
            return {detail::torus_point(torus, 0.0, dv),
                    detail::torus_frame(torus, 0.0, dv)};
        }
        throw Error("local_bound_probe: supported angles are 0, pi/2, pi");
    };

    auto [x, fx] = place(angle_x);
    auto [y, fy] = place(angle_y);
    const TangentCloud pair = TangentCloud::make({x, y}, std::vector<Frame>{fx, fy}, 2);
    const double tau_hat = estimate_reach(pair).tau_hat;

    // L measured along the probed tube circle; constant norm 1/r^2.
    ManifoldSpec sp = torus;
    const double L = detail::measure_third_derivative(
        [&](double s) { return geodesic_curve(sp, {0.0, 0.0}, {1.0, 0.0}, s); },
        2.0 * M_PI * torus.r);

    const double align = std::sin(std::abs(angle_x - angle_y));
    ProbeReport rep;
    rep.name = "local_bound t=" + std::to_string(t);
    rep.lhs = 1.0 / tau - 1.0 / tau_hat;
    rep.rhs = 8.0 * align * align / tau + L * (2.0 * t / 3.0 + 2.0 * t);
    rep.ok = rep.lhs <= rep.rhs + 1e-6;
    return rep;
}

} // namespace reachkit
