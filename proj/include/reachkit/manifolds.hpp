#pragma once

// Synthetic manifolds with analytic reach: circle, sphere, ellipse, torus,
// and the bumped sphere M' = Phi(M) with Phi(x) = x + eta*phi(x/ell)*v.
// Each model carries a uniform sampler, analytic tangent frames, a
// reach-attainment classification, and closed-form curves for the
// curvature-bound probe.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "reach.hpp"
#include "rng.hpp"

namespace reachkit {

struct Circle {
    double R = 1.0; // D = 2, d = 1, centered at the origin
};

struct Sphere {
    int d = 2;
    int D = 3;
    double R = 1.0;
    Vector center; // size D; empty means origin
};

struct Ellipse {
    double a = 2.0; // semi-major
    double b = 1.0; // semi-minor, D = 2
};

struct Torus {
    double R = 2.0; // center-of-tube radius
    double r = 0.5; // tube radius, D = 3
};

struct BumpedSphere {
    int d = 2;
    int D = 3;
    double R = 1.0;
    double ell = 0.2;
    double eta = 0.02;
    // Underlying sphere: radius R, center (0, -R, 0, ..., 0), so it passes
    // through the origin. Bump ball B(0, ell), vertical v = e_1.
};

using ManifoldSpec = std::variant<Circle, Sphere, Ellipse, Torus, BumpedSphere>;

inline int intrinsic_dim(const ManifoldSpec& spec) {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle> || std::is_same_v<T, Ellipse>)
                return 1;
            else if constexpr (std::is_same_v<T, Torus>)
                return 2;
            else
                return s.d;
        },
        spec);
}

inline int ambient_dim(const ManifoldSpec& spec) {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle> || std::is_same_v<T, Ellipse>)
                return 2;
            else if constexpr (std::is_same_v<T, Torus>)
                return 3;
            else
                return s.D;
        },
        spec);
}

inline void validate(const ManifoldSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle>) {
                if (!(s.R > 0.0)) throw InvalidSpec("Circle: R must be > 0");
            } else if constexpr (std::is_same_v<T, Sphere>) {
                if (!(s.R > 0.0)) throw InvalidSpec("Sphere: R must be > 0");
                if (s.d < 1 || s.d >= s.D || s.D > 16)
                    throw InvalidSpec("Sphere: need 1 <= d < D <= 16");
                if (!s.center.empty() && static_cast<int>(s.center.size()) != s.D)
                    throw InvalidSpec("Sphere: center size must equal D");
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                if (!(s.a > s.b) || !(s.b > 0.0))
                    throw InvalidSpec("Ellipse: need a > b > 0");
            } else if constexpr (std::is_same_v<T, Torus>) {
                if (!(s.r > 0.0) || !(s.r < s.R))
                    throw InvalidSpec("Torus: need 0 < r < R");
            } else {
                if (!(s.R > 0.0)) throw InvalidSpec("BumpedSphere: R must be > 0");
                if (s.d < 1 || s.d >= s.D || s.D > 16)
                    throw InvalidSpec("BumpedSphere: need 1 <= d < D <= 16");
                const double ell_cap =
                    std::min(s.R / 2.0, (std::pow(2.0, 1.0 / s.d) - 1.0) * s.R);
                if (!(s.ell > 0.0) || s.ell > ell_cap)
                    throw InvalidSpec("BumpedSphere: ell exceeds construction gate");
                if (!(s.eta > 0.0) || s.eta > s.ell * s.ell / (2.0 * s.R))
                    throw InvalidSpec("BumpedSphere: eta exceeds construction gate");
            }
        },
        spec);
}

struct TrueReach {
    std::optional<double> exact;
    std::optional<double> upper;
    std::optional<double> lower;
};

inline TrueReach true_reach(const ManifoldSpec& spec) {
    return std::visit(
        [](const auto& s) -> TrueReach {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle>)
                return {.exact = s.R};
            else if constexpr (std::is_same_v<T, Sphere>)
                return {.exact = s.R};
            else if constexpr (std::is_same_v<T, Ellipse>)
                return {.exact = s.b * s.b / s.a};
            else if constexpr (std::is_same_v<T, Torus>)
                return {.exact = std::min(s.r, s.R - s.r)};
            else {
                // Medial-axis witness on the bump axis gives
                // 1/tau_{M'} >= 1/R + eta/ell^2; no lower bound is known.
                TrueReach tr;
                tr.upper = 1.0 / (1.0 / s.R + s.eta / (s.ell * s.ell));
                return tr;
            }
        },
        spec);
}

enum class ReachCase { Global, Local, Both };

inline ReachCase reach_case(const ManifoldSpec& spec) {
    return std::visit(
        [](const auto& s) -> ReachCase {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle> || std::is_same_v<T, Sphere>)
                return ReachCase::Both;
            else if constexpr (std::is_same_v<T, Ellipse>)
                return ReachCase::Local;
            else if constexpr (std::is_same_v<T, Torus>) {
                if (s.r < s.R - s.r) return ReachCase::Local;
                if (s.r > s.R - s.r) return ReachCase::Global;
                return ReachCase::Both;
            } else
                return ReachCase::Local;
        },
        spec);
}

// ---------------------------------------------------------------------------
// Bump construction (Appendix-style): phi, Phi, dPhi.

// phi(x) = exp(||x||^2 / (||x||^2 - 1)) for ||x|| < 1, else 0. phi(0) = 1.
inline double bump_phi(const Vector& x) {
    const double r2 = dot(x, x);
    if (r2 >= 1.0) return 0.0;
    return std::exp(r2 / (r2 - 1.0));
}

// grad phi(u) = phi(u) * (-2u / (||u||^2 - 1)^2) for ||u|| < 1, else 0.
inline Vector bump_phi_grad(const Vector& u) {
    Vector g(u.size(), 0.0);
    const double r2 = dot(u, u);
    if (r2 >= 1.0) return g;
    const double den = (r2 - 1.0) * (r2 - 1.0);
    const double f = bump_phi(u) * (-2.0 / den);
    for (std::size_t k = 0; k < u.size(); ++k) g[k] = f * u[k];
    return g;
}

// Phi(x) = x + eta * phi(x / ell) * v, v = e_1 (the vertical unit vector).
inline Vector bump_diffeo(const BumpedSphere& s, const Vector& x) {
    Vector out = x;
    out[1] += s.eta * bump_phi(scale(x, 1.0 / s.ell));
    return out;
}

// dPhi(x) = I + (eta / ell) * v (grad phi(x/ell))^T
inline Mat bump_diffeo_jacobian(const BumpedSphere& s, const Vector& x) {
    const int D = static_cast<int>(x.size());
    Mat J = Mat::identity(D);
    const Vector g = bump_phi_grad(scale(x, 1.0 / s.ell));
    const double c = s.eta / s.ell;
    for (int k = 0; k < D; ++k) J(1, k) += c * g[k];
    return J;
}

// Inverse of Phi by fixed-point iteration; dPhi is a contraction since
// ||dPhi - I|| <= 3 eta / ell < 1.
inline Vector bump_diffeo_inverse(const BumpedSphere& s, const Vector& y) {
    Vector x = y;
    for (int it = 0; it < 200; ++it) {
        Vector fx = bump_diffeo(s, x);
        double err = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double delta = fx[k] - y[k];
            err = std::max(err, std::abs(delta));
            x[k] -= delta;
        }
        if (err < 1e-15) break;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Analytic tangent frames.

namespace detail {

// Tangent frame of a d-sphere living in the first (d+1) coordinates of R^D:
// orthogonal complement of the unit radial direction inside that span.
inline Frame sphere_frame(const Vector& unit_radial, int d, int D) {
    int kmax = 0;
    for (int k = 1; k <= d; ++k)
        if (std::abs(unit_radial[k]) > std::abs(unit_radial[kmax])) kmax = k;
    std::vector<Vector> rows;
    rows.reserve(d);
    for (int k = 0; k <= d; ++k) {
        if (k == kmax) continue;
        Vector e(D, 0.0);
        e[k] = 1.0;
        const double c = unit_radial[k];
        for (int j = 0; j <= d; ++j) e[j] -= c * unit_radial[j];
        rows.push_back(std::move(e));
    }
    return orthonormalize(rows);
}

inline Vector torus_point(const Torus& s, double u, double v) {
    const double w = s.R + s.r * std::cos(u);
    return {w * std::cos(v), w * std::sin(v), s.r * std::sin(u)};
}

inline Frame torus_frame(const Torus& s, double u, double v) {
    // d/du and d/dv directions are orthogonal; normalize directly.
    Vector du{-std::sin(u) * std::cos(v), -std::sin(u) * std::sin(v), std::cos(u)};
    Vector dv{-std::sin(v), std::cos(v), 0.0};
    Frame f;
    f.d = 2;
    f.D = 3;
    f.data.resize(6);
    for (int k = 0; k < 3; ++k) f.data[k] = du[k];
    for (int k = 0; k < 3; ++k) f.data[3 + k] = dv[k];
    return f;
}

inline Vector ellipse_point(const Ellipse& s, double t) {
    return {s.a * std::cos(t), s.b * std::sin(t)};
}

inline Frame ellipse_frame(const Ellipse& s, double t) {
    Vector v{-s.a * std::sin(t), s.b * std::cos(t)};
    const double n = norm(v);
    Frame f;
    f.d = 1;
    f.D = 2;
    f.data = {v[0] / n, v[1] / n};
    return f;
}

inline Frame circle_frame(double t) {
    Frame f;
    f.d = 1;
    f.D = 2;
    f.data = {-std::sin(t), std::cos(t)};
    return f;
}

inline Vector bumped_sphere_center(const BumpedSphere& s) {
    Vector c(s.D, 0.0);
    c[1] = -s.R;
    return c;
}

// Push a sphere frame through dPhi and re-orthonormalize.
inline Frame push_frame(const BumpedSphere& s, const Vector& preimage, const Frame& base) {
    const Mat J = bump_diffeo_jacobian(s, preimage);
    std::vector<Vector> rows;
    rows.reserve(base.d);
    for (int i = 0; i < base.d; ++i) {
        Vector w(s.D, 0.0);
        for (int a = 0; a < s.D; ++a) {
            double acc = 0.0;
            for (int b = 0; b < s.D; ++b) acc += J(a, b) * base.row(i)[b];
            w[a] = acc;
        }
        rows.push_back(std::move(w));
    }
    return orthonormalize(rows);
}

// Area-distortion factor |det(dPhi restricted to the tangent space)| via the
// Gram determinant of the pushed frame rows.
inline double tangential_jacobian(const BumpedSphere& s, const Vector& preimage,
                                  const Frame& base) {
    const Mat J = bump_diffeo_jacobian(s, preimage);
    const int d = base.d;
    std::vector<Vector> w(d, Vector(s.D, 0.0));
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < s.D; ++a) {
            double acc = 0.0;
            for (int b = 0; b < s.D; ++b) acc += J(a, b) * base.row(i)[b];
            w[i][a] = acc;
        }
    Mat G(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G(i, j) = dot(w[i], w[j]);
    // Gaussian elimination with partial pivoting; d <= 15.
    double det = 1.0;
    for (int c = 0; c < d; ++c) {
        int piv = c;
        for (int rr = c + 1; rr < d; ++rr)
            if (std::abs(G(rr, c)) > std::abs(G(piv, c))) piv = rr;
        if (piv != c) {
            for (int k = 0; k < d; ++k) std::swap(G(c, k), G(piv, k));
            det = -det;
        }
        det *= G(c, c);
        if (G(c, c) == 0.0) return 0.0;
        for (int rr = c + 1; rr < d; ++rr) {
            const double m = G(rr, c) / G(c, c);
            for (int k = c; k < d; ++k) G(rr, k) -= m * G(c, k);
        }
    }
    return std::sqrt(std::abs(det));
}

inline Vector unit_gaussian_dir(Rng& rng, int dims) {
    Vector u(dims);
    for (;;) {
        for (int k = 0; k < dims; ++k) u[k] = rng.normal();
        const double n = norm(u);
        if (n > 1e-12) {
            for (int k = 0; k < dims; ++k) u[k] /= n;
            return u;
        }
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Ellipse arc length. Cumulative table + Newton refinement; the table uses
// composite Simpson on a fine grid, accurate well below 1e-10 of the total.

inline double ellipse_speed(const Ellipse& s, double t) {
    const double sa = s.a * std::sin(t);
    const double cb = s.b * std::cos(t);
    return std::sqrt(sa * sa + cb * cb);
}

class EllipseArcLength {
public:
    explicit EllipseArcLength(const Ellipse& s) : s_(s) {
        cum_.resize(kSegments + 1, 0.0);
        const double h = 2.0 * M_PI / kSegments;
        for (int i = 0; i < kSegments; ++i) {
            const double t0 = i * h, t1 = t0 + h;
            const double mid = 0.5 * (t0 + t1);
            const double seg =
                (h / 6.0) * (ellipse_speed(s_, t0) + 4.0 * ellipse_speed(s_, mid) +
                             ellipse_speed(s_, t1));
            cum_[i + 1] = cum_[i] + seg;
        }
    }

    double total() const { return cum_.back(); }

    // Parameter t with arclength(0, t) = s (s taken mod total length).
    double param_at(double arc) const {
        const double L = total();
        arc = std::fmod(arc, L);
        if (arc < 0.0) arc += L;
        const auto it = std::lower_bound(cum_.begin(), cum_.end(), arc);
        int i = static_cast<int>(it - cum_.begin());
        if (i > 0) --i;
        const double h = 2.0 * M_PI / kSegments;
        double t = i * h + (arc - cum_[i]) / std::max(ellipse_speed(s_, i * h), 1e-30);
        for (int iter = 0; iter < 50; ++iter) {
            const double f = arclength_from_grid(t) - arc;
            const double df = ellipse_speed(s_, t);
            const double step = f / df;
            t -= step;
            if (std::abs(step) < 1e-14) break;
        }
        return t;
    }

    Vector point_at(double arc) const { return detail::ellipse_point(s_, param_at(arc)); }

private:
    // arclength(0, t) using the table plus a Simpson tail on the residual.
    double arclength_from_grid(double t) const {
        const double h = 2.0 * M_PI / kSegments;
        double base = 0.0;
        double t0 = t;
        // reduce into [0, 2pi)
        double wraps = std::floor(t / (2.0 * M_PI));
        base += wraps * total();
        t0 = t - wraps * 2.0 * M_PI;
        const int i = std::min(static_cast<int>(t0 / h), kSegments - 1);
        const double lo = i * h;
        const double mid = 0.5 * (lo + t0);
        const double tail = ((t0 - lo) / 6.0) *
                            (ellipse_speed(s_, lo) + 4.0 * ellipse_speed(s_, mid) +
                             ellipse_speed(s_, t0));
        return base + cum_[i] + tail;
    }

    static constexpr int kSegments = 16384;
    Ellipse s_;
    std::vector<double> cum_;
};

// ---------------------------------------------------------------------------
// Uniform sampling with respect to surface measure.

inline TangentCloud sample(const ManifoldSpec& spec, std::size_t n, std::uint64_t seed,
                           bool with_frames) {
    validate(spec);
    if (n < 1) throw Error("sample: need n >= 1");
    Rng rng(mix64(seed));
    const int d = intrinsic_dim(spec);
    const int D = ambient_dim(spec);

    std::vector<Vector> pts;
    pts.reserve(n);
    std::vector<Frame> frs;
    if (with_frames) frs.reserve(n);

    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle>) {
                for (std::size_t i = 0; i < n; ++i) {
                    const double t = 2.0 * M_PI * rng.uniform();
                    pts.push_back({s.R * std::cos(t), s.R * std::sin(t)});
                    if (with_frames) frs.push_back(detail::circle_frame(t));
                }
            } else if constexpr (std::is_same_v<T, Sphere>) {
                Vector center = s.center.empty() ? Vector(s.D, 0.0) : s.center;
                for (std::size_t i = 0; i < n; ++i) {
                    const Vector u = detail::unit_gaussian_dir(rng, s.d + 1);
                    Vector p = center;
                    Vector ur(s.D, 0.0);
                    for (int k = 0; k <= s.d; ++k) {
                        ur[k] = u[k];
                        p[k] += s.R * u[k];
                    }
                    pts.push_back(std::move(p));
                    if (with_frames) frs.push_back(detail::sphere_frame(ur, s.d, s.D));
                }
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                // density on t proportional to local speed
                const double env = std::max(s.a, s.b);
                for (std::size_t i = 0; i < n; ++i) {
                    double t;
                    do {
                        t = 2.0 * M_PI * rng.uniform();
                    } while (rng.uniform() * env > ellipse_speed(s, t));
                    pts.push_back(detail::ellipse_point(s, t));
                    if (with_frames) frs.push_back(detail::ellipse_frame(s, t));
                }
            } else if constexpr (std::is_same_v<T, Torus>) {
                // uniform v; u by rejection with density prop. to R + r cos u
                for (std::size_t i = 0; i < n; ++i) {
                    const double v = 2.0 * M_PI * rng.uniform();
                    double u;
                    do {
                        u = 2.0 * M_PI * rng.uniform();
                    } while (rng.uniform() * (s.R + s.r) > s.R + s.r * std::cos(u));
                    pts.push_back(detail::torus_point(s, u, v));
                    if (with_frames) frs.push_back(detail::torus_frame(s, u, v));
                }
            } else {
                // Push sphere samples through Phi, rejecting against the
                // tangential area distortion; envelope (1 + 3 eta/ell)^d.
                const Vector center = detail::bumped_sphere_center(s);
                const double envelope = std::pow(1.0 + 3.0 * s.eta / s.ell, s.d);
                for (std::size_t i = 0; i < n; ++i) {
                    for (;;) {
                        const Vector u = detail::unit_gaussian_dir(rng, s.d + 1);
                        Vector p = center;
                        Vector ur(s.D, 0.0);
                        for (int k = 0; k <= s.d; ++k) {
                            ur[k] = u[k];
                            p[k] += s.R * u[k];
                        }
                        const Frame base = detail::sphere_frame(ur, s.d, s.D);
                        const double jac = detail::tangential_jacobian(s, p, base);
                        if (rng.uniform() * envelope > jac) continue;
                        pts.push_back(bump_diffeo(s, p));
                        if (with_frames) frs.push_back(detail::push_frame(s, p, base));
                        break;
                    }
                }
            }
        },
        spec);

    return TangentCloud::make(std::move(pts),
                              with_frames ? std::optional(std::move(frs)) : std::nullopt, d);
}

// Analytic tangent frame. Parameter conventions per variant:
//   Circle/Ellipse: params = {t}
//   Torus:          params = {u, v}
//   Sphere:         params = the ambient point on the sphere
//   BumpedSphere:   params = the preimage point on the underlying sphere
inline Frame tangent_at(const ManifoldSpec& spec, const Vector& params) {
    return std::visit(
        [&](const auto& s) -> Frame {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle>)
                return detail::circle_frame(params.at(0));
            else if constexpr (std::is_same_v<T, Ellipse>)
                return detail::ellipse_frame(s, params.at(0));
            else if constexpr (std::is_same_v<T, Torus>)
                return detail::torus_frame(s, params.at(0), params.at(1));
            else if constexpr (std::is_same_v<T, Sphere>) {
                Vector center = s.center.empty() ? Vector(s.D, 0.0) : s.center;
                Vector ur = sub(params, center);
                const double nr = norm(ur);
                for (auto& c : ur) c /= nr;
                return detail::sphere_frame(ur, s.d, s.D);
            } else {
                const Vector center = detail::bumped_sphere_center(s);
                Vector ur = sub(params, center);
                const double nr = norm(ur);
                for (auto& c : ur) c /= nr;
                const Frame base = detail::sphere_frame(ur, s.d, s.D);
                return detail::push_frame(s, params, base);
            }
        },
        spec);
}

// ---------------------------------------------------------------------------
// Arc-length parametrized closed curves for the curvature probe.

enum class CurveKind {
    CircleBoundary, // the circle itself
    GreatCircle,    // sphere great circle
    TubeCircle,     // torus u-circle at fixed v
    OuterEquator,   // torus u = 0 circle
    InnerEquator,   // torus u = pi circle
    EllipseBoundary // the ellipse, numerically arc-length parametrized
};

struct Curve {
    std::string name;
    double length = 0.0;
    std::function<Vector(double)> at; // arc length -> ambient point
};

// Point on a named closed curve of the model at arc length t.
//   Circle: start_params = {t0}, direction = {+-1}
//   Sphere: start_params = ambient point, direction = tangent vector
//   Torus:  start_params = {u0, v0}; direction {1,0} = tube circle,
//           {0,1} = equator (u0 must be 0 or pi)
//   Ellipse: start_params = {s0 arc length}, direction = {+-1}
inline Vector geodesic_curve(const ManifoldSpec& spec, const Vector& start_params,
                             const Vector& direction, double t) {
    return std::visit(
        [&](const auto& s) -> Vector {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle>) {
                const double sgn = direction.at(0) >= 0.0 ? 1.0 : -1.0;
                const double ang = start_params.at(0) + sgn * t / s.R;
                return {s.R * std::cos(ang), s.R * std::sin(ang)};
            } else if constexpr (std::is_same_v<T, Sphere>) {
                Vector center = s.center.empty() ? Vector(s.D, 0.0) : s.center;
                Vector u = sub(start_params, center);
                const double nu = norm(u);
                for (auto& c : u) c /= nu;
                Vector w = direction;
                const double cw = dot(w, u);
                for (std::size_t k = 0; k < w.size(); ++k) w[k] -= cw * u[k];
                const double nw = norm(w);
                if (!(nw > 1e-12))
                    throw Error("geodesic_curve: direction tangent to nothing");
                for (auto& c : w) c /= nw;
                Vector p = center;
                const double ca = std::cos(t / s.R), sa = std::sin(t / s.R);
                for (std::size_t k = 0; k < p.size(); ++k)
                    p[k] += s.R * (ca * u[k] + sa * w[k]);
                return p;
            } else if constexpr (std::is_same_v<T, Torus>) {
                const double u0 = start_params.at(0), v0 = start_params.at(1);
                if (std::abs(direction.at(0)) > std::abs(direction.at(1))) {
                    const double sgn = direction[0] >= 0.0 ? 1.0 : -1.0;
                    return detail::torus_point(s, u0 + sgn * t / s.r, v0);
                }
                const bool outer = std::abs(std::sin(u0)) < 1e-9 && std::cos(u0) > 0.0;
                const bool inner = std::abs(std::sin(u0)) < 1e-9 && std::cos(u0) < 0.0;
                if (!outer && !inner)
                    throw UnsupportedSpec("geodesic_curve: v-circles are geodesic only at the equators");
                const double rad = outer ? s.R + s.r : s.R - s.r;
                const double sgn = direction[1] >= 0.0 ? 1.0 : -1.0;
                return detail::torus_point(s, u0, v0 + sgn * t / rad);
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                const double sgn = direction.at(0) >= 0.0 ? 1.0 : -1.0;
                static thread_local std::optional<std::pair<Ellipse, EllipseArcLength>> cache;
                if (!cache || cache->first.a != s.a || cache->first.b != s.b)
                    cache.emplace(s, EllipseArcLength(s));
                return cache->second.point_at(start_params.at(0) + sgn * t);
            } else {
                throw UnsupportedSpec("geodesic_curve: no closed-form geodesics on the bumped sphere");
            }
        },
        spec);
}

// Fixed family of closed-form curves used by the curvature-bound probe.
inline std::vector<Curve> curvature_probe_curves(const ManifoldSpec& spec) {
    std::vector<Curve> out;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle>) {
                ManifoldSpec sp = s;
                out.push_back({"circle", 2.0 * M_PI * s.R, [sp](double t) {
                                   return geodesic_curve(sp, {0.0}, {1.0}, t);
                               }});
            } else if constexpr (std::is_same_v<T, Sphere>) {
                ManifoldSpec sp = s;
                Vector center = s.center.empty() ? Vector(s.D, 0.0) : s.center;
                // a few fixed great circles through coordinate and mixed directions
                Rng rng(0x5eedULL);
                for (int c = 0; c < 4; ++c) {
                    Vector u = detail::unit_gaussian_dir(rng, s.d + 1);
                    Vector w = detail::unit_gaussian_dir(rng, s.d + 1);
                    Vector p = center, dir(s.D, 0.0);
                    for (int k = 0; k <= s.d; ++k) {
                        p[k] += s.R * u[k];
                        dir[k] = w[k];
                    }
                    out.push_back({"great_circle_" + std::to_string(c), 2.0 * M_PI * s.R,
                                   [sp, p, dir](double t) {
                                       return geodesic_curve(sp, p, dir, t);
                                   }});
                }
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                ManifoldSpec sp = s;
                EllipseArcLength arc(s);
                out.push_back({"ellipse", arc.total(), [sp](double t) {
                                   return geodesic_curve(sp, {0.0}, {1.0}, t);
                               }});
            } else if constexpr (std::is_same_v<T, Torus>) {
                ManifoldSpec sp = s;
                for (double v0 : {0.0, 1.0, 2.5}) {
                    out.push_back({"tube_circle_v" + std::to_string(v0), 2.0 * M_PI * s.r,
                                   [sp, v0](double t) {
                                       return geodesic_curve(sp, {0.0, v0}, {1.0, 0.0}, t);
                                   }});
                }
                out.push_back({"outer_equator", 2.0 * M_PI * (s.R + s.r), [sp](double t) {
                                   return geodesic_curve(sp, {0.0, 0.0}, {0.0, 1.0}, t);
                               }});
                out.push_back({"inner_equator", 2.0 * M_PI * (s.R - s.r), [sp](double t) {
                                   return geodesic_curve(sp, {M_PI, 0.0}, {0.0, 1.0}, t);
                               }});
            } else {
                throw UnsupportedSpec("curvature_probe_curves: bumped sphere has no closed-form curves");
            }
        },
        spec);
    return out;
}

} // namespace reachkit
