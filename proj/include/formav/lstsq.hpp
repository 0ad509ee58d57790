#pragma once
// Dense linear least squares for pilot-scale regressions.
//
// Householder QR with column pivoting; pivots below a relative
// tolerance are truncated, so exactly collinear predictor sets still
// yield a well-defined residual (coefficients of truncated columns
// are reported as zero).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace formav::lstsq {

struct Solution {
    std::vector<double> coefficients;  // aligned to the input column order
    double sse = 0.0;                  // sum of squared residuals
    std::size_t rank = 0;
};

// Minimizes ||X b - y||_2 where X is given column-wise (each column a
// vector of length n). Small p only; cost is O(n p^2).
inline Solution solve(const std::vector<std::vector<double>>& columns,
                      std::span<const double> y,
                      double rank_tol = 1e-12) {
    const std::size_t p = columns.size();
    if (p == 0) throw std::invalid_argument("lstsq: no columns");
    const std::size_t n = columns.front().size();
    for (const auto& c : columns)
        if (c.size() != n) throw std::invalid_argument("lstsq: ragged columns");
    if (y.size() != n) throw std::invalid_argument("lstsq: y length mismatch");
    if (n < p) throw std::invalid_argument("lstsq: fewer rows than columns");

    // Working copies; A is column-major.
    std::vector<std::vector<double>> a = columns;
    std::vector<double> qty(y.begin(), y.end());
    std::vector<std::size_t> perm(p);
    for (std::size_t j = 0; j < p; ++j) perm[j] = j;

    auto tail_norm2 = [&](std::size_t col, std::size_t from) {
        double s = 0.0;
        for (std::size_t i = from; i < n; ++i) s += a[col][i] * a[col][i];
        return s;
    };

    double max_initial = 0.0;
    for (std::size_t j = 0; j < p; ++j) max_initial = std::max(max_initial, tail_norm2(j, 0));
    const double cutoff = rank_tol * rank_tol * max_initial;

    std::size_t rank = 0;
    for (std::size_t k = 0; k < p; ++k) {
        // Pivot: bring the column with the largest remaining norm forward.
        std::size_t best = k;
        double best_norm = tail_norm2(k, k);
        for (std::size_t j = k + 1; j < p; ++j) {
            const double nj = tail_norm2(j, k);
            if (nj > best_norm) {
                best = j;
                best_norm = nj;
            }
        }
        if (best_norm <= cutoff) break;
        if (best != k) {
            std::swap(a[best], a[k]);
            std::swap(perm[best], perm[k]);
        }

        // Householder reflector annihilating a[k][k+1..n).
        const double norm = std::sqrt(best_norm);
        const double alpha = (a[k][k] >= 0.0) ? -norm : norm;
        std::vector<double> v(n - k);
        v[0] = a[k][k] - alpha;
        for (std::size_t i = k + 1; i < n; ++i) v[i - k] = a[k][i];
        double vnorm2 = 0.0;
        for (double x : v) vnorm2 += x * x;
        a[k][k] = alpha;
        for (std::size_t i = k + 1; i < n; ++i) a[k][i] = 0.0;
        if (vnorm2 > 0.0) {
            for (std::size_t j = k + 1; j < p; ++j) {
                double dot = 0.0;
                for (std::size_t i = k; i < n; ++i) dot += v[i - k] * a[j][i];
                const double f = 2.0 * dot / vnorm2;
                for (std::size_t i = k; i < n; ++i) a[j][i] -= f * v[i - k];
            }
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += v[i - k] * qty[i];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < n; ++i) qty[i] -= f * v[i - k];
        }
        ++rank;
    }

    // Back-substitution on the leading rank x rank block.
    std::vector<double> b_perm(p, 0.0);
    for (std::size_t ii = rank; ii-- > 0;) {
        double s = qty[ii];
        for (std::size_t j = ii + 1; j < rank; ++j) s -= a[j][ii] * b_perm[j];
        b_perm[ii] = s / a[ii][ii];
    }

    Solution out;
    out.rank = rank;
    out.coefficients.assign(p, 0.0);
    for (std::size_t j = 0; j < rank; ++j) out.coefficients[perm[j]] = b_perm[j];
    // Residual norm is the untouched tail of Q^T y.
    double sse = 0.0;
    for (std::size_t i = rank; i < n; ++i) sse += qty[i] * qty[i];
    out.sse = sse;
    return out;
}

}  // namespace formav::lstsq
