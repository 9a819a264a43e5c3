#pragma once

// Local-PCA tangent estimation for point-only clouds: exact k-NN, top-d
// eigenvectors of the mean-centered second moment of the neighborhood.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace reachkit {

struct PcaConfig {
    std::optional<int> k; // neighbor count; default max(2d+2, ceil(3 log n))
    int d = 1;
};

inline int default_pca_k(int d, std::size_t n) {
    const int by_log = static_cast<int>(std::ceil(3.0 * std::log(static_cast<double>(n))));
    return std::max(2 * d + 2, by_log);
}

// Exact k nearest neighbors of points[query] (excluding itself), ties by index.
inline std::vector<int> k_nearest(const std::vector<Vector>& points, int query, int k) {
    const int n = static_cast<int>(points.size());
    if (k > n - 1) throw Error("k_nearest: k must be <= n-1");
    std::vector<std::pair<double, int>> order;
    order.reserve(n - 1);
    for (int i = 0; i < n; ++i) {
        if (i == query) continue;
        order.emplace_back(dist2(points[i], points[query]), i);
    }
    std::partial_sort(order.begin(), order.begin() + k, order.end());
    std::vector<int> out(k);
    for (int i = 0; i < k; ++i) out[i] = order[i].second;
    return out;
}

inline Frame local_pca_tangent(const std::vector<Vector>& points, int index,
                               const PcaConfig& config) {
    const std::size_t n = points.size();
    const int D = static_cast<int>(points[0].size());
    const int k = config.k ? *config.k : default_pca_k(config.d, n);
    if (k < config.d + 1) throw Error("local_pca_tangent: k must be >= d+1");
    if (n < static_cast<std::size_t>(k) + 1)
        throw Error("local_pca_tangent: need n >= k+1");

    const std::vector<int> nbrs = k_nearest(points, index, k);
    Vector mean(D, 0.0);
    for (int i : nbrs)
        for (int a = 0; a < D; ++a) mean[a] += points[i][a];
    for (int a = 0; a < D; ++a) mean[a] /= k;

    Mat M(D);
    for (int i : nbrs) {
        Vector c = sub(points[i], mean);
        for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b) M(a, b) += c[a] * c[b];
    }

    const EigenSym eig = symmetric_eigendecomposition(M);
    double trace = 0.0;
    for (double v : eig.values) trace += v;
    if (eig.values[config.d - 1] <= 1e-12 * trace)
        throw RankDeficient("local_pca_tangent: neighborhood is rank deficient");

    std::vector<Vector> rows(config.d, Vector(D, 0.0));
    for (int i = 0; i < config.d; ++i)
        for (int a = 0; a < D; ++a) rows[i][a] = eig.vectors(a, i);
    return orthonormalize(rows);
}

inline std::vector<Frame> estimate_all_tangents(const std::vector<Vector>& points,
                                                const PcaConfig& config) {
    std::vector<Frame> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        out[i] = local_pca_tangent(points, static_cast<int>(i), config);
    return out;
}

// Max principal angle distance over matching indices.
inline double tangent_error(const std::vector<Frame>& estimated,
                            const std::vector<Frame>& truth) {
    if (estimated.size() != truth.size())
        throw DimensionMismatch("tangent_error: size mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < estimated.size(); ++i)
        worst = std::max(worst, principal_angle_distance(estimated[i], truth[i]));
    return worst;
}

} // namespace reachkit
