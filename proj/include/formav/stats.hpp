#pragma once
// Small-sample descriptive statistics shared by the diagnostics:
// mean, sample variance (n-1), linearly interpolated quantiles,
// tie-averaged ranks, Pearson and Spearman correlation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace formav::stats {

inline double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty input");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Sample variance with n-1 denominator.
inline double variance(std::span<const double> v) {
    if (v.size() < 2) throw std::invalid_argument("variance: need at least 2 values");
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size() - 1);
}

inline double stddev(std::span<const double> v) { return std::sqrt(variance(v)); }

// Quantile by linear interpolation between order statistics,
// h = (n-1)p (the "type 7" convention).
inline double quantile(std::span<const double> v, double p) {
    if (v.empty()) throw std::invalid_argument("quantile: empty input");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0,1]");
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    const double h = static_cast<double>(s.size() - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= s.size()) return s.back();
    const double frac = h - static_cast<double>(lo);
    return s[lo] + frac * (s[lo + 1] - s[lo]);
}

inline double median(std::span<const double> v) { return quantile(v, 0.5); }

inline double interquartile_range(std::span<const double> v) {
    return quantile(v, 0.75) - quantile(v, 0.25);
}

// 1-based ranks, ties receive the average rank of their run.
inline std::vector<double> ranks_average(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

// Pearson product-moment correlation; nullopt when either column is
// constant (zero variance makes the coefficient undefined).
inline std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("pearson: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("pearson: need at least 2 pairs");
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return std::nullopt;
    double r = sab / std::sqrt(saa * sbb);
    return std::clamp(r, -1.0, 1.0);
}

// Spearman rank correlation: Pearson on tie-averaged ranks.
inline std::optional<double> spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("spearman: length mismatch");
    const std::vector<double> ra = ranks_average(a);
    const std::vector<double> rb = ranks_average(b);
    return pearson(ra, rb);
}

}  // namespace formav::stats
