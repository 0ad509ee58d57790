#pragma once
// Content validity: CVR per item from an expert panel, exact binomial
// critical values, researcher-rating fallback means, and the weight
// vectors the composites are built from.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "formav/dataset.hpp"
#include "formav/spec_model.hpp"

namespace formav {

struct CvrResult {
    std::string item_id;
    int n_essential = 0;
    int n_raters = 0;
    double cvr = 0.0;             // (n_essential - N/2) / (N/2), in [-1, 1]
    double critical_value = 1.0;
    bool critical_attainable = true;  // false when no count reaches significance
    bool passed = false;              // cvr > critical_value
};

// CVR = (n_e - N/2) / (N/2).
inline double cvr_value(int n_essential, int n_raters) {
    if (n_raters < 2) throw std::invalid_argument("cvr_value: need at least 2 raters");
    if (n_essential < 0 || n_essential > n_raters)
        throw std::invalid_argument("cvr_value: n_essential outside [0, N]");
    const double half = n_raters / 2.0;
    return (n_essential - half) / half;
}

namespace detail {

// P(X >= k) for X ~ Binomial(n, 1/2). Exact integer arithmetic up to
// n = 62; the sum is a dyadic rational, so the double result is exact
// whenever it fits the mantissa (all panel sizes this tool meets).
inline double binomial_upper_tail_half(int n, int k) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    if (n <= 62) {
        unsigned long long sum = 0;
        unsigned long long coeff = 1;  // C(n, 0)
        for (int i = 0; i <= n; ++i) {
            if (i >= k) sum += coeff;
            if (i < n) coeff = coeff * static_cast<unsigned long long>(n - i) /
                               static_cast<unsigned long long>(i + 1);
        }
        return std::ldexp(static_cast<double>(sum), -n);
    }
    // Large panels: pmf recurrence in long double.
    long double pmf = std::ldexp(1.0L, -n);
    long double tail = (k == 0) ? pmf : 0.0L;
    for (int i = 0; i < n; ++i) {
        pmf = pmf * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
        if (i + 1 >= k) tail += pmf;
    }
    return static_cast<double>(tail);
}

}  // namespace detail

struct CvrCritical {
    double value = 1.0;
    // False when even a unanimous panel cannot beat chance at the
    // requested alpha ("panel too small for significance").
    bool attainable = false;
};

// Smallest CVR exceeding chance agreement at one-sided significance
// alpha, under H0 that each rater marks "essential" by coin flip:
// the smallest k with P(X >= k | Binomial(N, 1/2)) <= alpha, mapped
// through the CVR formula.
inline CvrCritical cvr_critical_value(int n_raters, double alpha) {
    if (n_raters < 2) throw std::invalid_argument("cvr_critical_value: need at least 2 raters");
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("cvr_critical_value: alpha must be in (0, 0.5)");
    for (int k = 0; k <= n_raters; ++k) {
        if (detail::binomial_upper_tail_half(n_raters, k) <= alpha)
            return {cvr_value(k, n_raters), true};
    }
    return {1.0, false};
}

// One CvrResult per item of a categorical rating set. Only the
// "essential" category counts toward n_e. An override table (panel
// size -> critical value) replaces the binomial construction when
// provided.
inline std::vector<CvrResult> compute_cvr(const SmeRatingSet& ratings, double alpha = 0.05,
                                          const std::map<int, double>* critical_override = nullptr) {
    if (ratings.mode != SmeMode::cvr3)
        throw std::invalid_argument(
            "compute_cvr: rating set is numeric; use researcher_rating_weights for scale5 data");
    const int n = static_cast<int>(ratings.n_raters());
    if (n < 2) throw std::invalid_argument("compute_cvr: need at least 2 raters");

    double critical = 1.0;
    bool attainable = true;
    if (critical_override && critical_override->count(n)) {
        critical = critical_override->at(n);
    } else {
        const CvrCritical cc = cvr_critical_value(n, alpha);
        critical = cc.value;
        attainable = cc.attainable;
    }

    std::vector<CvrResult> out;
    out.reserve(ratings.items.size());
    for (std::size_t j = 0; j < ratings.items.size(); ++j) {
        CvrResult r;
        r.item_id = ratings.items[j];
        r.n_raters = n;
        for (std::size_t i = 0; i < ratings.n_raters(); ++i)
            if (ratings.judgments[i][j] == static_cast<int>(SmeJudgment::essential)) ++r.n_essential;
        r.cvr = cvr_value(r.n_essential, n);
        r.critical_value = critical;
        r.critical_attainable = attainable;
        r.passed = r.cvr > critical;
        out.push_back(std::move(r));
    }
    return out;
}

struct MeanRating {
    std::string item_id;
    double mean_rating = 0.0;  // arithmetic mean of 1..5 scores
};

// Researcher-rated fallback when no SME panel is available. The means
// double as weights; methodologically weaker than CVR and flagged as
// such in reports.
inline std::vector<MeanRating> researcher_rating_weights(const SmeRatingSet& ratings) {
    if (ratings.mode != SmeMode::scale5)
        throw std::invalid_argument("researcher_rating_weights: rating set is categorical; use compute_cvr");
    if (ratings.n_raters() == 0) throw std::invalid_argument("researcher_rating_weights: no raters");
    std::vector<MeanRating> out;
    out.reserve(ratings.items.size());
    for (std::size_t j = 0; j < ratings.items.size(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < ratings.n_raters(); ++i) sum += ratings.judgments[i][j];
        out.push_back({ratings.items[j], sum / static_cast<double>(ratings.n_raters())});
    }
    return out;
}

// Normalized theoretical weights for one construct, aligned to the
// indicators that survived the content-validity gate.
struct WeightVector {
    std::string construct_id;
    std::vector<std::string> item_ids;
    std::vector<double> weights;  // non-negative, sum to 1 within 1e-12
    WeightSource source = WeightSource::manual;
};

namespace detail {

inline std::vector<double> normalized(const std::vector<double>& raw, const std::string& what) {
    double sum = 0.0;
    for (double w : raw) {
        if (w < 0.0) throw Error(what + ": negative weight");
        sum += w;
    }
    if (sum <= 0.0) throw Error(what + ": weights sum to zero");
    std::vector<double> out;
    out.reserve(raw.size());
    for (double w : raw) out.push_back(w / sum);
    return out;
}

}  // namespace detail

// Builds the construct's weight vector from whichever source it
// declares. CVR mode drops items that failed the gate and
// renormalizes over the survivors; the renormalization choice is
// recorded in reports so revision rounds can revisit it.
inline WeightVector derive_weights(const ConstructSpec& construct,
                                   const std::vector<CvrResult>* cvr = nullptr,
                                   const std::vector<MeanRating>* means = nullptr) {
    WeightVector out;
    out.construct_id = construct.construct_id;
    out.source = construct.weight_source;
    const std::vector<std::string> indicators = construct.indicator_ids();

    switch (construct.weight_source) {
        case WeightSource::cvr: {
            if (!cvr) throw std::invalid_argument("derive_weights: construct '" + construct.construct_id +
                                                  "' needs CVR results");
            std::vector<double> raw;
            for (const auto& id : indicators) {
                const CvrResult* found = nullptr;
                for (const auto& r : *cvr)
                    if (r.item_id == id) {
                        found = &r;
                        break;
                    }
                if (!found)
                    throw ReferenceError("derive_weights: no CVR result for indicator '" + id + "'");
                if (found->passed) {
                    out.item_ids.push_back(id);
                    raw.push_back(found->cvr);
                }
            }
            if (out.item_ids.empty())
                throw Error("derive_weights: no indicator of construct '" + construct.construct_id +
                            "' passed the content-validity gate");
            out.weights = detail::normalized(raw, "derive_weights(cvr)");
            break;
        }
        case WeightSource::researcher_rating: {
            if (!means)
                throw std::invalid_argument("derive_weights: construct '" + construct.construct_id +
                                            "' needs researcher rating means");
            std::vector<double> raw;
            for (const auto& id : indicators) {
                const MeanRating* found = nullptr;
                for (const auto& m : *means)
                    if (m.item_id == id) {
                        found = &m;
                        break;
                    }
                if (!found)
                    throw ReferenceError("derive_weights: no mean rating for indicator '" + id + "'");
                out.item_ids.push_back(id);
                raw.push_back(found->mean_rating);
            }
            out.weights = detail::normalized(raw, "derive_weights(researcher_rating)");
            break;
        }
        case WeightSource::manual: {
            if (construct.manual_weights.size() != indicators.size())
                throw std::invalid_argument("derive_weights: construct '" + construct.construct_id +
                                            "' manual_weights do not match its indicators");
            out.item_ids = indicators;
            out.weights = detail::normalized(construct.manual_weights, "derive_weights(manual)");
            break;
        }
    }
    return out;
}

}  // namespace formav
