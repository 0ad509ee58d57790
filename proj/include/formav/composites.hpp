#pragma once
// Weighted composite scores: one proxy value per respondent per
// construct, built from theoretical weights. Higher-order constructs
// are validated recursively on a dataset assembled from their
// children's composites.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "formav/content_validity.hpp"
#include "formav/dataset.hpp"
#include "formav/spec_model.hpp"

namespace formav {

enum class CompositeMethod { weighted_mean, weighted_median };

struct CompositeScores {
    std::string construct_id;
    std::vector<std::string> respondent_ids;  // source dataset order
    std::vector<double> scores;
    CompositeMethod method = CompositeMethod::weighted_mean;
    WeightVector weights_used;
};

namespace detail {

inline void check_weights(const WeightVector& w, const PilotDataset& ds) {
    if (w.item_ids.empty()) throw std::invalid_argument("composite: empty weight vector");
    if (w.item_ids.size() != w.weights.size())
        throw std::invalid_argument("composite: weight vector misaligned");
    const double sum = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("composite: weights are not normalized (sum=" +
                                    std::to_string(sum) + ")");
    for (const auto& id : w.item_ids)
        if (!ds.has_item(id))
            throw ReferenceError("composite: item '" + id + "' missing from dataset");
    if (ds.has_missing())
        throw std::invalid_argument("composite: dataset still has missing cells");
}

}  // namespace detail

// score_r = sum_i w_i * x_{r,i}. The exact-arithmetic result is a
// convex combination; the final clamp removes last-ulp spill so the
// convexity bound holds exactly.
inline CompositeScores weighted_mean_scores(const PilotDataset& ds, const ConstructSpec& construct,
                                            const WeightVector& w) {
    detail::check_weights(w, ds);
    std::vector<std::size_t> idx;
    idx.reserve(w.item_ids.size());
    for (const auto& id : w.item_ids) idx.push_back(ds.item_index(id));

    CompositeScores out;
    out.construct_id = construct.construct_id;
    out.respondent_ids = ds.respondent_ids;
    out.method = CompositeMethod::weighted_mean;
    out.weights_used = w;
    out.scores.reserve(ds.n_respondents());
    for (std::size_t r = 0; r < ds.n_respondents(); ++r) {
        double score = 0.0;
        double lo = ds.values[r][idx.front()];
        double hi = lo;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const double v = ds.values[r][idx[i]];
            score += w.weights[i] * v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        out.scores.push_back(std::clamp(score, lo, hi));
    }
    return out;
}

namespace detail {

// Cumulative-weight midpoint rule: sort responses ascending carrying
// weights; the weighted median is the smallest value whose cumulative
// weight reaches 0.5. A cumulative weight landing on exactly 0.5
// (within tolerance, so equal binary weights behave like equal
// rational ones) yields the midpoint of that value and the next,
// which makes the equal-weight case match the conventional median.
inline double weighted_median(std::vector<std::pair<double, double>> value_weight) {
    constexpr double half_tol = 1e-9;
    std::sort(value_weight.begin(), value_weight.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double cum = 0.0;
    for (std::size_t i = 0; i < value_weight.size(); ++i) {
        cum += value_weight[i].second;
        if (cum >= 0.5 - half_tol) {
            if (std::abs(cum - 0.5) <= half_tol && i + 1 < value_weight.size())
                return 0.5 * (value_weight[i].first + value_weight[i + 1].first);
            return value_weight[i].first;
        }
    }
    return value_weight.back().first;  // unreachable with normalized weights
}

}  // namespace detail

inline CompositeScores weighted_median_scores(const PilotDataset& ds,
                                              const ConstructSpec& construct,
                                              const WeightVector& w) {
    detail::check_weights(w, ds);
    std::vector<std::size_t> idx;
    idx.reserve(w.item_ids.size());
    for (const auto& id : w.item_ids) idx.push_back(ds.item_index(id));

    CompositeScores out;
    out.construct_id = construct.construct_id;
    out.respondent_ids = ds.respondent_ids;
    out.method = CompositeMethod::weighted_median;
    out.weights_used = w;
    out.scores.reserve(ds.n_respondents());
    for (std::size_t r = 0; r < ds.n_respondents(); ++r) {
        std::vector<std::pair<double, double>> vw;
        vw.reserve(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            vw.emplace_back(ds.values[r][idx[i]], w.weights[i]);
        out.scores.push_back(detail::weighted_median(std::move(vw)));
    }
    return out;
}

inline CompositeScores composite_scores(const PilotDataset& ds, const ConstructSpec& construct,
                                        const WeightVector& w, CompositeMethod method) {
    return method == CompositeMethod::weighted_mean ? weighted_mean_scores(ds, construct, w)
                                                    : weighted_median_scores(ds, construct, w);
}

// Assembles the proxy dataset for a higher-order construct: child
// composites become its indicator columns. All children must cover the
// same respondents in the same order, and the parent must list exactly
// these children.
inline PilotDataset build_higher_order_dataset(const std::vector<CompositeScores>& children,
                                               const ConstructSpec& parent) {
    if (children.empty())
        throw std::invalid_argument("build_higher_order_dataset: no child composites");
    if (!parent.is_higher_order())
        throw std::invalid_argument("build_higher_order_dataset: construct '" + parent.construct_id +
                                    "' has no child constructs");

    for (const auto& c : children)
        if (c.respondent_ids != children.front().respondent_ids)
            throw Error("build_higher_order_dataset: child '" + c.construct_id +
                        "' covers a different respondent set");

    if (parent.children.size() != children.size())
        throw std::invalid_argument("build_higher_order_dataset: parent '" + parent.construct_id +
                                    "' expects " + std::to_string(parent.children.size()) +
                                    " children, got " + std::to_string(children.size()));
    std::vector<const CompositeScores*> ordered;
    for (const auto& child_id : parent.children) {
        const CompositeScores* found = nullptr;
        for (const auto& c : children)
            if (c.construct_id == child_id) {
                found = &c;
                break;
            }
        if (!found)
            throw ReferenceError("build_higher_order_dataset: no composite for child '" + child_id +
                                 "'");
        ordered.push_back(found);
    }

    PilotDataset ds;
    ds.iteration_id = "composite:" + parent.construct_id;
    ds.provenance = {"derived:composites", ""};
    ds.respondent_ids = children.front().respondent_ids;
    for (const CompositeScores* c : ordered) ds.items.push_back(c->construct_id);
    ds.values.assign(ds.respondent_ids.size(), {});
    for (std::size_t r = 0; r < ds.respondent_ids.size(); ++r) {
        ds.values[r].reserve(ordered.size());
        for (const CompositeScores* c : ordered) ds.values[r].push_back(c->scores[r]);
    }
    return ds;
}

}  // namespace formav
