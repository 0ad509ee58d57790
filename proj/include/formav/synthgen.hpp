#pragma once
// Seeded synthetic pilot data and SME ratings with controllable
// correlation structure. Draws come from std::mt19937_64 (bit-stable
// across standard libraries) mapped through the AS 241 rational
// approximation of the normal quantile, so a (config, seed) pair pins
// the output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "formav/dataset.hpp"
#include "formav/errors.hpp"

namespace formav {

namespace synth_detail {

// Normal quantile function (inverse CDF), Wichura's algorithm AS 241
// (PPND16 constants). Relative accuracy around 1e-16 over (0, 1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p outside (0,1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                  6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
              1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
        const double den =
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                  3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
              4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return (q < 0.0) ? -val : val;
}

// Uniform in the open interval (0,1): 53-bit mantissa, offset half a
// step so 0 and 1 are unreachable.
inline double uniform_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double standard_normal(std::mt19937_64& rng) { return normal_quantile(uniform_open(rng)); }

// Lower-triangular Cholesky factor tolerating a semi-definite input:
// pivots within tol of zero collapse their column, pivots below -tol
// reject the matrix.
inline std::vector<std::vector<double>> cholesky_psd(const std::vector<std::vector<double>>& m,
                                                     double tol = 1e-10) {
    const std::size_t k = m.size();
    for (const auto& row : m)
        if (row.size() != k) throw std::invalid_argument("cholesky_psd: matrix not square");
    std::vector<std::vector<double>> l(k, std::vector<double>(k, 0.0));
    for (std::size_t j = 0; j < k; ++j) {
        double d = m[j][j];
        for (std::size_t s = 0; s < j; ++s) d -= l[j][s] * l[j][s];
        if (d < -tol) throw Error("target correlation matrix is not positive semi-definite");
        if (d <= tol) continue;  // semi-definite direction: column stays zero
        l[j][j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < k; ++i) {
            double v = m[i][j];
            for (std::size_t s = 0; s < j; ++s) v -= l[i][s] * l[j][s];
            l[i][j] = v / l[j][j];
        }
    }
    return l;
}

}  // namespace synth_detail

struct SynthItem {
    std::string item_id;
    int scale_min = 1;
    int scale_max = 5;
};

enum class Discretization {
    round_clamp,  // round the latent draw to the nearest level, clamp to bounds
    quantile,     // equal-probability bins through the normal CDF
};

struct SynthConfig {
    std::uint64_t seed = 0;
    int n_respondents = 0;
    std::vector<SynthItem> items;
    // Symmetric, unit diagonal, PSD; defaults to identity when empty.
    std::vector<std::vector<double>> target_correlation;
    Discretization discretization = Discretization::round_clamp;
};

namespace synth_detail {

inline void validate(const SynthConfig& cfg) {
    if (cfg.n_respondents < 1) throw std::invalid_argument("synthgen: need >= 1 respondent");
    if (cfg.items.empty()) throw std::invalid_argument("synthgen: no items");
    for (const auto& it : cfg.items)
        if (it.scale_min >= it.scale_max)
            throw std::invalid_argument("synthgen: item '" + it.item_id + "' has bad scale bounds");
    if (!cfg.target_correlation.empty()) {
        const std::size_t k = cfg.items.size();
        if (cfg.target_correlation.size() != k)
            throw std::invalid_argument("synthgen: correlation matrix size != item count");
        for (std::size_t i = 0; i < k; ++i) {
            if (cfg.target_correlation[i].size() != k)
                throw std::invalid_argument("synthgen: correlation matrix not square");
            if (std::abs(cfg.target_correlation[i][i] - 1.0) > 1e-12)
                throw std::invalid_argument("synthgen: correlation diagonal must be 1");
            for (std::size_t j = 0; j < k; ++j)
                if (std::abs(cfg.target_correlation[i][j] - cfg.target_correlation[j][i]) > 1e-12)
                    throw std::invalid_argument("synthgen: correlation matrix not symmetric");
        }
    }
}

}  // namespace synth_detail

// Latent multivariate-normal samples before discretization
// (respondent-major). Exposed so correlation-structure properties can
// be checked where they hold exactly, ahead of the attenuation that
// discretization introduces.
inline std::vector<std::vector<double>> generate_latent(const SynthConfig& cfg) {
    synth_detail::validate(cfg);
    const std::size_t k = cfg.items.size();
    std::vector<std::vector<double>> l;
    if (cfg.target_correlation.empty()) {
        l.assign(k, std::vector<double>(k, 0.0));
        for (std::size_t i = 0; i < k; ++i) l[i][i] = 1.0;
    } else {
        l = synth_detail::cholesky_psd(cfg.target_correlation);
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::vector<double>> out(cfg.n_respondents, std::vector<double>(k, 0.0));
    std::vector<double> z(k);
    for (auto& row : out) {
        for (std::size_t i = 0; i < k; ++i) z[i] = synth_detail::standard_normal(rng);
        for (std::size_t i = 0; i < k; ++i) {
            double v = 0.0;
            for (std::size_t s = 0; s <= i; ++s) v += l[i][s] * z[s];
            row[i] = v;
        }
    }
    return out;
}

// Discretizes latent draws onto each item's Likert range. round_clamp
// centers the latent unit normal on the scale midpoint with a spread
// of a quarter scale width; quantile assigns equal-probability bins.
inline PilotDataset generate_pilot_data(const SynthConfig& cfg) {
    const std::vector<std::vector<double>> latent = generate_latent(cfg);

    PilotDataset ds;
    ds.iteration_id = "synth-" + std::to_string(cfg.seed);
    ds.provenance = {"synthetic:seed=" + std::to_string(cfg.seed), ""};
    for (const auto& it : cfg.items) ds.items.push_back(it.item_id);
    ds.respondent_ids.reserve(cfg.n_respondents);
    for (int r = 0; r < cfg.n_respondents; ++r) {
        std::string id = std::to_string(r + 1);
        while (id.size() < 4) id.insert(id.begin(), '0');
        ds.respondent_ids.push_back("S" + id);
    }

    ds.values.assign(cfg.n_respondents, {});
    for (int r = 0; r < cfg.n_respondents; ++r) {
        ds.values[r].reserve(cfg.items.size());
        for (std::size_t j = 0; j < cfg.items.size(); ++j) {
            const SynthItem& it = cfg.items[j];
            const double v = latent[r][j];
            double likert;
            if (cfg.discretization == Discretization::round_clamp) {
                const double mid = 0.5 * (it.scale_min + it.scale_max);
                const double spread = 0.25 * (it.scale_max - it.scale_min);
                const double scaled = mid + v * spread;
                likert = std::clamp(static_cast<double>(std::llround(scaled)),
                                    static_cast<double>(it.scale_min),
                                    static_cast<double>(it.scale_max));
            } else {
                const double p = 0.5 * std::erfc(-v / std::sqrt(2.0));
                const int levels = it.scale_max - it.scale_min + 1;
                int bin = static_cast<int>(p * levels);
                if (bin >= levels) bin = levels - 1;
                likert = static_cast<double>(it.scale_min + bin);
            }
            ds.values[r].push_back(likert);
        }
    }
    return ds;
}

// Independent categorical SME draws: "essential" with the item's
// probability, remainder split evenly between the other categories.
inline SmeRatingSet generate_sme_ratings(
    std::uint64_t seed, int n_raters,
    const std::vector<std::pair<std::string, double>>& essential_prob_per_item) {
    if (n_raters < 2) throw std::invalid_argument("generate_sme_ratings: need >= 2 raters");
    if (essential_prob_per_item.empty())
        throw std::invalid_argument("generate_sme_ratings: no items");
    for (const auto& [id, p] : essential_prob_per_item)
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("generate_sme_ratings: probability outside [0,1] for '" +
                                        id + "'");

    SmeRatingSet set;
    set.mode = SmeMode::cvr3;
    set.provenance = {"synthetic:seed=" + std::to_string(seed), ""};
    for (const auto& [id, p] : essential_prob_per_item) set.items.push_back(id);
    for (int r = 0; r < n_raters; ++r) set.rater_ids.push_back("R" + std::to_string(r + 1));

    std::mt19937_64 rng(seed);
    set.judgments.assign(n_raters, {});
    for (int r = 0; r < n_raters; ++r) {
        set.judgments[r].reserve(set.items.size());
        for (const auto& [id, p] : essential_prob_per_item) {
            const double u = synth_detail::uniform_open(rng);
            SmeJudgment j;
            if (u < p) j = SmeJudgment::essential;
            else if (u < p + (1.0 - p) * 0.5) j = SmeJudgment::useful_not_essential;
            else j = SmeJudgment::not_necessary;
            set.judgments[r].push_back(static_cast<int>(j));
        }
    }
    return set;
}

}  // namespace formav
