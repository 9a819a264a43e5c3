#pragma once

// Dense small-dimension vector/subspace primitives: orthonormal frames,
// projections, principal angles, and a cyclic-Jacobi symmetric eigensolver.
// Everything here assumes ambient dimension D <= ~16 and is dependency-free.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace reachkit {

using Vector = std::vector<double>;

inline double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

inline Vector sub(const Vector& a, const Vector& b) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vector add(const Vector& a, const Vector& b) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vector scale(const Vector& a, double s) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

inline double dist2(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

// Square dense matrix, row-major.
struct Mat {
    int n = 0;
    std::vector<double> a;

    Mat() = default;
    explicit Mat(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    static Mat identity(int size) {
        Mat m(size);
        for (int i = 0; i < size; ++i) m(i, i) = 1.0;
        return m;
    }
};

// d orthonormal rows spanning a d-dim subspace of R^D.
struct Frame {
    int d = 0;
    int D = 0;
    std::vector<double> data; // row-major d x D

    double* row(int i) { return data.data() + static_cast<std::size_t>(i) * D; }
    const double* row(int i) const { return data.data() + static_cast<std::size_t>(i) * D; }

    Vector row_vec(int i) const {
        return Vector(row(i), row(i) + D);
    }
};

struct EigenSym {
    std::vector<double> values; // descending
    Mat vectors;                // column k = eigenvector for values[k]
};

// Cyclic Jacobi. Convergence: off-diagonal Frobenius norm below
// 1e-14 * ||A||_F, at most 100 sweeps. Eigenpairs sorted descending,
// stable in the original index for ties.
inline EigenSym symmetric_eigendecomposition(Mat A) {
    const int n = A.n;
    if (n <= 0) throw DimensionMismatch("symmetric_eigendecomposition: empty matrix");

    double max_abs = 0.0;
    for (double v : A.a) max_abs = std::max(max_abs, std::abs(v));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(A(i, j) - A(j, i)) > 1e-12 * std::max(1.0, max_abs))
                throw NotSymmetric("symmetric_eigendecomposition: input not symmetric");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double s = 0.5 * (A(i, j) + A(j, i));
            A(i, j) = A(j, i) = s;
        }

    double frob = 0.0;
    for (double v : A.a) frob += v * v;
    frob = std::sqrt(frob);
    const double threshold = 1e-14 * frob;

    Mat Q = Mat::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += 2.0 * A(i, j) * A(i, j);
        if (std::sqrt(off) <= threshold) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double qkp = Q(k, p), qkq = Q(k, q);
                    Q(k, p) = c * qkp - s * qkq;
                    Q(k, q) = s * qkp + c * qkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return A(i, i) > A(j, j); });

    EigenSym out;
    out.values.resize(n);
    out.vectors = Mat(n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = A(order[k], order[k]);
        for (int i = 0; i < n; ++i) out.vectors(i, k) = Q(i, order[k]);
    }
    return out;
}

// Gram-Schmidt with one re-orthogonalization pass. The input rows must be
// linearly independent: smallest singular value of the row matrix > 1e-12.
inline Frame orthonormalize(const std::vector<Vector>& rows) {
    const int d = static_cast<int>(rows.size());
    if (d < 1) throw RankDeficient("orthonormalize: no rows");
    const int D = static_cast<int>(rows[0].size());
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != D)
            throw DimensionMismatch("orthonormalize: ragged rows");
    if (d >= D) throw DimensionMismatch("orthonormalize: need d < D");

    Mat G(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G(i, j) = dot(rows[i], rows[j]);
    const EigenSym eig = symmetric_eigendecomposition(G);
    const double smin = std::sqrt(std::max(eig.values.back(), 0.0));
    if (!(smin > 1e-12)) throw RankDeficient("orthonormalize: rows not independent");

    Frame f;
    f.d = d;
    f.D = D;
    f.data.resize(static_cast<std::size_t>(d) * D);
    std::vector<Vector> basis;
    basis.reserve(d);
    for (int i = 0; i < d; ++i) {
        Vector v = rows[i];
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) {
                const double c = dot(v, b);
                for (int k = 0; k < D; ++k) v[k] -= c * b[k];
            }
        const double nv = norm(v);
        if (!(nv > 1e-300)) throw RankDeficient("orthonormalize: degenerate row");
        for (int k = 0; k < D; ++k) v[k] /= nv;
        basis.push_back(v);
        std::copy(v.begin(), v.end(), f.row(i));
    }
    return f;
}

inline Vector project_onto(const Vector& v, const Frame& T) {
    if (static_cast<int>(v.size()) != T.D)
        throw DimensionMismatch("project_onto: dimension mismatch");
    Vector p(v.size(), 0.0);
    for (int i = 0; i < T.d; ++i) {
        const double* r = T.row(i);
        double c = 0.0;
        for (int k = 0; k < T.D; ++k) c += v[k] * r[k];
        for (int k = 0; k < T.D; ++k) p[k] += c * r[k];
    }
    return p;
}

// Norm of the component of v orthogonal to span(T); always in [0, ||v||].
inline double distance_to_subspace(const Vector& v, const Frame& T) {
    if (static_cast<int>(v.size()) != T.D)
        throw DimensionMismatch("distance_to_subspace: dimension mismatch");
    Vector r = v;
    for (int i = 0; i < T.d; ++i) {
        const double* t = T.row(i);
        double c = 0.0;
        for (int k = 0; k < T.D; ++k) c += r[k] * t[k];
        for (int k = 0; k < T.D; ++k) r[k] -= c * t[k];
    }
    return norm(r);
}

// Operator norm of pi_U - pi_V: the sine of the largest principal angle.
inline double principal_angle_distance(const Frame& U, const Frame& V) {
    if (U.d != V.d || U.D != V.D)
        throw DimensionMismatch("principal_angle_distance: frame shapes differ");
    const int D = U.D;
    Mat delta(D);
    for (int i = 0; i < U.d; ++i) {
        const double* u = U.row(i);
        const double* v = V.row(i);
        for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b)
                delta(a, b) += u[a] * u[b] - v[a] * v[b];
    }
    const EigenSym eig = symmetric_eigendecomposition(delta);
    const double m = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    return std::clamp(m, 0.0, 1.0);
}

} // namespace reachkit
