#pragma once
// Independent oracles for the test suite. Everything here deliberately
// avoids the library's code paths: CVR as exact rationals, binomial
// tails via Pascal's triangle, OLS via normal equations and an
// explicit inverse, correlation via the raw sum formula, alpha via the
// direct formula. Slow and naive on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracle {

// CVR as the exactly-rounded double of the rational (2*ne - N) / N.
inline double cvr_exact(int n_essential, int n_raters) {
    return static_cast<double>(2 * n_essential - n_raters) / static_cast<double>(n_raters);
}

// Pascal's-triangle binomial coefficients, exact in uint64 for n <= 62.
inline std::vector<unsigned long long> binomial_row(int n) {
    std::vector<unsigned long long> row{1};
    for (int i = 0; i < n; ++i) {
        std::vector<unsigned long long> next(row.size() + 1, 0);
        for (std::size_t j = 0; j < row.size(); ++j) {
            next[j] += row[j];
            next[j + 1] += row[j];
        }
        row = std::move(next);
    }
    return row;
}

// Smallest k with P(X >= k | Binomial(n, 1/2)) <= alpha, or -1 when no
// k in [0, n] qualifies. Tail computed as an exact dyadic rational.
inline int critical_count_brute(int n, double alpha) {
    const std::vector<unsigned long long> c = binomial_row(n);
    for (int k = 0; k <= n; ++k) {
        unsigned long long sum = 0;
        for (int i = k; i <= n; ++i) sum += c[i];
        const double tail = std::ldexp(static_cast<double>(sum), -n);
        if (tail <= alpha) return k;
    }
    return -1;
}

inline double cvr_critical_brute(int n, double alpha) {
    const int k = critical_count_brute(n, alpha);
    if (k < 0) return 1.0;
    const double half = n / 2.0;
    return (k - half) / half;
}

// Dense matrix inverse by Gauss-Jordan with partial pivoting.
inline std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) throw std::runtime_error("oracle invert: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const double d = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

struct OlsFit {
    std::vector<double> beta;
    double sse = 0.0;
    double r_squared = 0.0;
};

// OLS through the normal equations: beta = (X'X)^-1 X'y, with an
// intercept prepended. Fine on the well-conditioned problems the
// acceptance suite feeds it; that is all it is for.
inline OlsFit ols_normal_equations(const std::vector<std::vector<double>>& predictor_cols,
                                   const std::vector<double>& y) {
    const std::size_t n = y.size();
    const std::size_t p = predictor_cols.size() + 1;
    std::vector<std::vector<double>> x(n, std::vector<double>(p, 1.0));
    for (std::size_t j = 0; j < predictor_cols.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) x[i][j + 1] = predictor_cols[j][i];

    std::vector<std::vector<double>> xtx(p, std::vector<double>(p, 0.0));
    std::vector<double> xty(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < p; ++a) {
            xty[a] += x[i][a] * y[i];
            for (std::size_t b = 0; b < p; ++b) xtx[a][b] += x[i][a] * x[i][b];
        }
    }
    const std::vector<std::vector<double>> inv = invert(xtx);
    OlsFit fit;
    fit.beta.assign(p, 0.0);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) fit.beta[a] += inv[a][b] * xty[b];

    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);
    double sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = 0.0;
        for (std::size_t a = 0; a < p; ++a) pred += x[i][a] * fit.beta[a];
        const double r = y[i] - pred;
        fit.sse += r * r;
        sst += (y[i] - ybar) * (y[i] - ybar);
    }
    if (sst == 0.0) throw std::runtime_error("oracle ols: constant response");
    fit.r_squared = 1.0 - fit.sse / sst;
    return fit;
}

// Pearson's r from the raw-sum textbook formula.
inline double pearson_sums(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    const double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    if (den == 0.0) throw std::runtime_error("oracle pearson: constant column");
    return (n * sxy - sx * sy) / den;
}

// Ranks by counting: rank_i = (# smaller) + (# equal + 1) / 2.
inline std::vector<double> ranks_counting(const std::vector<double>& v) {
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        int less = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++less;
            else if (v[j] == v[i]) ++equal;
        }
        out[i] = less + (equal + 1) / 2.0;
    }
    return out;
}

inline double spearman_counting(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson_sums(ranks_counting(x), ranks_counting(y));
}

// Cronbach's alpha straight from the definition, raw-sum variances.
inline double alpha_direct(const std::vector<std::vector<double>>& item_cols) {
    const std::size_t k = item_cols.size();
    const std::size_t n = item_cols.front().size();
    auto var = [&](const std::vector<double>& c) {
        double s = 0, ss = 0;
        for (double v : c) {
            s += v;
            ss += v * v;
        }
        return (ss - s * s / static_cast<double>(n)) / static_cast<double>(n - 1);
    };
    double item_var = 0.0;
    for (const auto& c : item_cols) item_var += var(c);
    std::vector<double> total(n, 0.0);
    for (const auto& c : item_cols)
        for (std::size_t i = 0; i < n; ++i) total[i] += c[i];
    const double kk = static_cast<double>(k);
    return kk / (kk - 1.0) * (1.0 - item_var / var(total));
}

// Conventional median: middle order statistic, or midpoint for even n.
inline double median_conventional(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Brute-force IQR fences per column; flags a cell when outside them.
inline std::vector<std::vector<bool>> fence_flags(const std::vector<std::vector<double>>& cols,
                                                  double fence) {
    auto q7 = [](std::vector<double> s, double p) {
        std::sort(s.begin(), s.end());
        const double h = (s.size() - 1) * p;
        const std::size_t lo = static_cast<std::size_t>(h);
        if (lo + 1 >= s.size()) return s.back();
        return s[lo] + (h - lo) * (s[lo + 1] - s[lo]);
    };
    std::vector<std::vector<bool>> flags;
    for (const auto& c : cols) {
        const double q1 = q7(c, 0.25);
        const double q3 = q7(c, 0.75);
        const double iqr = q3 - q1;
        std::vector<bool> f;
        f.reserve(c.size());
        for (double v : c) f.push_back(v < q1 - fence * iqr || v > q3 + fence * iqr);
        flags.push_back(std::move(f));
    }
    return flags;
}

// Deterministic xorshift generator for test-local randomness, kept
// apart from the library's mt19937_64 draws.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

}  // namespace oracle
