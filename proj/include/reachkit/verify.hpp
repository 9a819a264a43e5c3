#pragma once

// Inequality suites shared by the CLI `verify` command and the acceptance
// tests: curvature bounds along closed-form curves, bump-construction
// Jacobian bounds, sampler membership residuals, and the stability probe
// battery.

#include <cmath>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "manifolds.hpp"

namespace reachkit {

struct Check {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

inline Check make_check(std::string name, double lhs, double rhs) {
    Check c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.ok = lhs <= rhs;
    return c;
}

namespace detail {

inline double fd_second_derivative_max(const Curve& curve, int grid) {
    const double h = 1e-4 * curve.length / (2.0 * M_PI);
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double t = curve.length * i / grid;
        const Vector p = curve.at(t + h), c = curve.at(t), m = curve.at(t - h);
        double s = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double g = (p[k] - 2.0 * c[k] + m[k]) / (h * h);
            s += g * g;
        }
        worst = std::max(worst, std::sqrt(s));
    }
    return worst;
}

inline double membership_residual(const ManifoldSpec& spec, const Vector& p) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle>)
                return std::abs(norm(p) - s.R);
            else if constexpr (std::is_same_v<T, Sphere>) {
                Vector center = s.center.empty() ? Vector(s.D, 0.0) : s.center;
                return std::abs(norm(sub(p, center)) - s.R);
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                const double q = (p[0] / s.a) * (p[0] / s.a) + (p[1] / s.b) * (p[1] / s.b);
                return std::abs(q - 1.0);
            } else if constexpr (std::is_same_v<T, Torus>) {
                const double w = std::sqrt(p[0] * p[0] + p[1] * p[1]) - s.R;
                return std::abs(w * w + p[2] * p[2] - s.r * s.r);
            } else {
                const Vector pre = bump_diffeo_inverse(s, p);
                const Vector center = detail::bumped_sphere_center(s);
                return std::abs(norm(sub(pre, center)) - s.R);
            }
        },
        spec);
}

inline Vector analytic_normal(const ManifoldSpec& spec, const Vector& p) {
    return std::visit(
        [&](const auto& s) -> Vector {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle>)
                return scale(p, 1.0 / norm(p));
            else if constexpr (std::is_same_v<T, Sphere>) {
                Vector center = s.center.empty() ? Vector(s.D, 0.0) : s.center;
                Vector u = sub(p, center);
                return scale(u, 1.0 / norm(u));
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                Vector n{p[0] / (s.a * s.a), p[1] / (s.b * s.b)};
                return scale(n, 1.0 / norm(n));
            } else if constexpr (std::is_same_v<T, Torus>) {
                const double w = std::sqrt(p[0] * p[0] + p[1] * p[1]);
                Vector n{p[0] * (w - s.R) / w, p[1] * (w - s.R) / w, p[2]};
                return scale(n, 1.0 / norm(n));
            } else {
                throw UnsupportedSpec("analytic_normal: not defined for the bumped sphere");
            }
        },
        spec);
}

} // namespace detail

// Curvature (||gamma''|| <= 1/tau + 1e-5) on every closed-form model, plus
// the bump-construction checks with R=1, ell=0.2, eta=0.02.
inline std::vector<Check> geometry_suite(std::uint64_t seed) {
    std::vector<Check> checks;

    const std::vector<ManifoldSpec> models{
        Circle{1.0},        Circle{2.0},      Sphere{2, 3, 1.0, {}},
        Sphere{1, 4, 0.5, {}}, Torus{2.0, 0.5}, Torus{2.0, 1.3},
        Ellipse{2.0, 1.0}};
    for (const auto& spec : models) {
        const double tau = *true_reach(spec).exact;
        for (const auto& curve : curvature_probe_curves(spec)) {
            const double kappa = detail::fd_second_derivative_max(curve, 1000);
            checks.push_back(make_check("curvature " + curve.name, kappa, 1.0 / tau + 1e-5));
        }
    }

    const BumpedSphere bump{2, 3, 1.0, 0.2, 0.02};
    checks.push_back(make_check("phi(0) == 1", std::abs(bump_phi({0.0, 0.0, 0.0}) - 1.0), 1e-12));
    checks.push_back(make_check("phi(r=0.5) == exp(-1/3)",
                                std::abs(bump_phi({0.5, 0.0, 0.0}) - std::exp(-1.0 / 3.0)),
                                1e-12));
    checks.push_back(make_check("phi support boundary", bump_phi({1.0, 0.0, 0.0}), 0.0));

    Rng rng(mix64(seed));
    {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            Vector x(3);
            for (auto& c : x) c = rng.uniform(-3.0 * bump.ell, 3.0 * bump.ell);
            if (norm(x) < bump.ell) continue;
            worst = std::max(worst, norm(sub(bump_diffeo(bump, x), x)));
        }
        checks.push_back(make_check("Phi identity outside B(0,ell)", worst, 0.0));
    }
    {
        // ||dPhi - I||_op = (eta/ell) ||grad phi(x/ell)|| exactly (rank one).
        double worst = 0.0;
        for (int i = 0; i < 100000; ++i) {
            Vector x(3);
            do {
                for (auto& c : x) c = rng.uniform(-bump.ell, bump.ell);
            } while (norm(x) >= bump.ell);
            const Vector g = bump_phi_grad(scale(x, 1.0 / bump.ell));
            worst = std::max(worst, (bump.eta / bump.ell) * norm(g));
        }
        checks.push_back(
            make_check("||dPhi - I|| <= 3 eta/ell", worst, 3.0 * bump.eta / bump.ell));
    }
    {
        // d2Phi via finite differences of the analytic Jacobian; the
        // difference is rank one along v, so its norm is cheap.
        double worst = 0.0;
        const double step = 1e-6 * bump.ell;
        for (int i = 0; i < 10000; ++i) {
            Vector x(3), w(3);
            do {
                for (auto& c : x) c = rng.uniform(-bump.ell, bump.ell);
            } while (norm(x) >= bump.ell);
            for (auto& c : w) c = rng.normal();
            const double nw = norm(w);
            for (auto& c : w) c /= nw;
            Vector xp = x, xm = x;
            for (int k = 0; k < 3; ++k) {
                xp[k] += step * w[k];
                xm[k] -= step * w[k];
            }
            const Vector gp = bump_phi_grad(scale(xp, 1.0 / bump.ell));
            const Vector gm = bump_phi_grad(scale(xm, 1.0 / bump.ell));
            double s = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double h = (gp[k] - gm[k]) / (2.0 * step);
                s += h * h;
            }
            worst = std::max(worst, (bump.eta / bump.ell) * std::sqrt(s));
        }
        checks.push_back(make_check("||d2Phi|| <= 23 eta/ell^2", worst,
                                    23.0 * bump.eta / (bump.ell * bump.ell)));
    }
    {
        // analytic Jacobian vs central finite differences of Phi itself
        double worst = 0.0;
        const double step = 1e-6 * bump.ell;
        for (int i = 0; i < 1000; ++i) {
            Vector x(3);
            for (auto& c : x) c = rng.uniform(-1.5 * bump.ell, 1.5 * bump.ell);
            const Mat J = bump_diffeo_jacobian(bump, x);
            for (int col = 0; col < 3; ++col) {
                Vector xp = x, xm = x;
                xp[col] += step;
                xm[col] -= step;
                const Vector fp = bump_diffeo(bump, xp);
                const Vector fm = bump_diffeo(bump, xm);
                for (int row = 0; row < 3; ++row)
                    worst = std::max(
                        worst, std::abs((fp[row] - fm[row]) / (2.0 * step) - J(row, col)));
            }
        }
        checks.push_back(make_check("dPhi matches finite differences", worst, 1e-6));
    }
    {
        // fixed-point inversion round trip
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            Vector x(3);
            for (auto& c : x) c = rng.uniform(-1.5 * bump.ell, 1.5 * bump.ell);
            const Vector back = bump_diffeo_inverse(bump, bump_diffeo(bump, x));
            worst = std::max(worst, norm(sub(back, x)));
        }
        checks.push_back(make_check("Phi inversion round trip", worst, 1e-10));
    }

    // sampler membership residuals and frame-normal orthogonality
    const std::vector<ManifoldSpec> sampled{
        Circle{1.5}, Sphere{2, 3, 1.0, {}}, Sphere{2, 5, 2.0, {}},
        Ellipse{2.0, 1.0}, Torus{2.0, 0.5},
        ManifoldSpec{BumpedSphere{2, 3, 1.0, 0.2, 0.02}}};
    int model_index = 0;
    for (const auto& spec : sampled) {
        const TangentCloud cloud = sample(spec, 2000, mix_seed(seed, 17, model_index), true);
        double worst = 0.0;
        for (const auto& p : cloud.points)
            worst = std::max(worst, detail::membership_residual(spec, p));
        checks.push_back(
            make_check("membership residual model " + std::to_string(model_index), worst, 1e-12));

        if (!std::holds_alternative<BumpedSphere>(spec)) {
            double ortho = 0.0;
            for (std::size_t i = 0; i < cloud.size(); ++i) {
                const Vector nrm = detail::analytic_normal(spec, cloud.points[i]);
                const Frame& f = (*cloud.frames)[i];
                for (int r = 0; r < f.d; ++r) {
                    double c = 0.0;
                    for (int k = 0; k < f.D; ++k) c += f.row(r)[k] * nrm[k];
                    ortho = std::max(ortho, std::abs(c));
                }
            }
            checks.push_back(
                make_check("frame-normal orthogonality model " + std::to_string(model_index),
                           ortho, 1e-10));
        }
        ++model_index;
    }

    // chi-square uniformity on angle marginals, 100 bins, n = 1e5,
    // critical value 148.3 = chi2(0.999, 99 dof)
    {
        const int bins = 100, n = 100000;
        const double crit = 148.3;
        std::vector<int> count(bins, 0);
        const TangentCloud c1 = sample(Circle{1.0}, n, mix_seed(seed, 23, 0), false);
        for (const auto& p : c1.points) {
            double a = std::atan2(p[1], p[0]);
            if (a < 0.0) a += 2.0 * M_PI;
            ++count[std::min(bins - 1, static_cast<int>(a / (2.0 * M_PI) * bins))];
        }
        double chi2 = 0.0;
        const double expect = static_cast<double>(n) / bins;
        for (int b = 0; b < bins; ++b)
            chi2 += (count[b] - expect) * (count[b] - expect) / expect;
        checks.push_back(make_check("chi-square circle angle", chi2, crit));

        std::fill(count.begin(), count.end(), 0);
        const TangentCloud c2 = sample(Sphere{2, 3, 1.0, {}}, n, mix_seed(seed, 23, 1), false);
        for (const auto& p : c2.points) {
            double a = std::atan2(p[1], p[0]);
            if (a < 0.0) a += 2.0 * M_PI;
            ++count[std::min(bins - 1, static_cast<int>(a / (2.0 * M_PI) * bins))];
        }
        chi2 = 0.0;
        for (int b = 0; b < bins; ++b)
            chi2 += (count[b] - expect) * (count[b] - expect) / expect;
        checks.push_back(make_check("chi-square sphere azimuth", chi2, crit));
    }

    return checks;
}

// Global and local deterministic bound probes.
inline std::vector<Check> bounds_suite() {
    std::vector<Check> checks;
    const Torus global_torus{2.0, 1.3};
    const double tau_g = global_torus.R - global_torus.r;
    for (double t : {tau_g / 20.0, tau_g / 10.0, tau_g / 2.0}) {
        const ProbeReport rep = global_bound_probe(global_torus, t);
        checks.push_back(make_check(rep.name, rep.lhs, rep.rhs + 1e-9));
    }
    const Torus local_torus{2.0, 0.5};
    const double r = local_torus.r;
    for (double t : {r / 20.0, r / 10.0, r / 5.0})
        for (const auto& [ax, ay] : std::vector<std::pair<double, double>>{
                 {0.0, M_PI}, {0.0, M_PI / 2.0}, {M_PI / 2.0, M_PI}}) {
            const ProbeReport rep = local_bound_probe(local_torus, t, ax, ay);
            checks.push_back(make_check(
                rep.name + " angles " + std::to_string(ax) + "," + std::to_string(ay),
                rep.lhs, rep.rhs + 1e-6));
        }
    return checks;
}

// Randomized tangent-stability battery.
inline std::vector<Check> stability_suite(std::uint64_t seed, int cases = 1000) {
    std::vector<Check> checks;
    checks.reserve(cases);
    const std::vector<ManifoldSpec> models{Circle{1.0}, Sphere{2, 3, 1.0, {}},
                                           Torus{2.0, 0.5}, Ellipse{2.0, 1.0}};
    Rng rng(mix64(seed ^ 0xabcdULL));
    for (int i = 0; i < cases; ++i) {
        const auto& spec = models[i % models.size()];
        const double theta = rng.uniform(0.0, M_PI / 6.0); // up to 30 degrees
        const std::size_t n = 200 + rng.index(200);
        const ProbeReport rep = stability_probe(spec, n, theta, mix_seed(seed, 41, i));
        checks.push_back(make_check("stability case " + std::to_string(i), rep.lhs,
                                    rep.rhs + 1e-9));
    }
    return checks;
}

} // namespace reachkit
