#pragma once
// Pilot-data diagnostics: per-item descriptives, IQR-fence outlier
// respondents, Pearson/Spearman correlation matrices, VIF
// multicollinearity via stable least squares, sample-size adequacy,
// and Cronbach's alpha as a contrast diagnostic.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "formav/dataset.hpp"
#include "formav/lstsq.hpp"
#include "formav/spec_model.hpp"
#include "formav/stats.hpp"

namespace formav {

struct ItemDescriptives {
    std::string item_id;
    int n = 0;
    double mean = 0.0;
    double median = 0.0;
    double sd = 0.0;   // sample, n-1 denominator
    double iqr = 0.0;  // type-7 quartiles
    double min = 0.0;
    double max = 0.0;
    double floor_share = 0.0;    // fraction of responses at scale_min
    double ceiling_share = 0.0;  // fraction at scale_max
    bool zero_variance = false;
};

// Quartiles use linear interpolation between order statistics (the
// "type 7" convention); stated here because cross-tool comparisons
// depend on it.
inline std::vector<ItemDescriptives> item_descriptives(const PilotDataset& ds,
                                                       const MeasurementSpec& spec) {
    if (ds.n_respondents() < 2)
        throw std::invalid_argument("item_descriptives: need at least 2 respondents");
    if (ds.has_missing())
        throw std::invalid_argument("item_descriptives: dataset still has missing cells");
    std::vector<ItemDescriptives> out;
    out.reserve(ds.n_items());
    for (std::size_t j = 0; j < ds.n_items(); ++j) {
        const std::vector<double> col = ds.column(j);
        const auto [lo, hi] = spec.column_bounds(ds.items[j]);
        ItemDescriptives d;
        d.item_id = ds.items[j];
        d.n = static_cast<int>(col.size());
        d.mean = stats::mean(col);
        d.median = stats::median(col);
        d.sd = stats::stddev(col);
        d.iqr = stats::interquartile_range(col);
        d.min = *std::min_element(col.begin(), col.end());
        d.max = *std::max_element(col.begin(), col.end());
        int at_floor = 0, at_ceiling = 0;
        for (double v : col) {
            if (v == lo) ++at_floor;
            if (v == hi) ++at_ceiling;
        }
        d.floor_share = static_cast<double>(at_floor) / d.n;
        d.ceiling_share = static_cast<double>(at_ceiling) / d.n;
        d.zero_variance = (d.sd == 0.0);
        out.push_back(std::move(d));
    }
    return out;
}

struct OutlierFlag {
    std::string respondent_id;
    std::vector<std::string> items_flagged;
    double fraction_flagged = 0.0;
    bool is_outlier = false;  // fraction_flagged >= threshold
};

// A cell is flagged when outside [Q1 - fence*IQR, Q3 + fence*IQR] of
// its item's column; a respondent is an outlier when flagged on at
// least fraction_threshold of the items. One flag record per
// respondent, dataset order.
inline std::vector<OutlierFlag> detect_outlier_respondents(const PilotDataset& ds,
                                                           double fence = 1.5,
                                                           double fraction_threshold = 0.25) {
    if (ds.has_missing())
        throw std::invalid_argument("detect_outlier_respondents: dataset still has missing cells");
    if (ds.n_respondents() == 0 || ds.n_items() == 0)
        throw std::invalid_argument("detect_outlier_respondents: empty dataset");

    std::vector<std::pair<double, double>> fences;
    fences.reserve(ds.n_items());
    for (std::size_t j = 0; j < ds.n_items(); ++j) {
        const std::vector<double> col = ds.column(j);
        const double q1 = stats::quantile(col, 0.25);
        const double q3 = stats::quantile(col, 0.75);
        const double iqr = q3 - q1;
        fences.emplace_back(q1 - fence * iqr, q3 + fence * iqr);
    }

    std::vector<OutlierFlag> out;
    out.reserve(ds.n_respondents());
    for (std::size_t r = 0; r < ds.n_respondents(); ++r) {
        OutlierFlag f;
        f.respondent_id = ds.respondent_ids[r];
        for (std::size_t j = 0; j < ds.n_items(); ++j) {
            const double v = ds.values[r][j];
            if (v < fences[j].first || v > fences[j].second) f.items_flagged.push_back(ds.items[j]);
        }
        f.fraction_flagged = static_cast<double>(f.items_flagged.size()) /
                             static_cast<double>(ds.n_items());
        f.is_outlier = f.fraction_flagged >= fraction_threshold;
        out.push_back(std::move(f));
    }
    return out;
}

// Pairwise Pearson and Spearman coefficients. Pairs involving a
// constant column are undefined; their cells carry `undefined_value`
// (outside [-1,1] so it cannot be mistaken for a coefficient) and the
// pair is listed in `undefined_pairs`. Diagonals are 1 by definition.
struct CorrelationMatrix {
    static constexpr double undefined_value = -2.0;

    std::vector<std::string> item_ids;
    std::vector<std::vector<double>> pearson;
    std::vector<std::vector<double>> spearman;
    std::vector<std::pair<int, int>> undefined_pairs;  // i < j, index pairs

    bool is_defined(std::size_t i, std::size_t j) const {
        return pearson[i][j] != undefined_value;
    }
};

inline CorrelationMatrix correlation_matrix(const PilotDataset& ds,
                                            const std::vector<std::string>& item_subset) {
    if (ds.n_respondents() < 3)
        throw std::invalid_argument("correlation_matrix: need at least 3 respondents");
    if (ds.has_missing())
        throw std::invalid_argument("correlation_matrix: dataset still has missing cells");

    CorrelationMatrix m;
    m.item_ids = item_subset;
    const std::size_t k = item_subset.size();
    std::vector<std::vector<double>> cols;
    cols.reserve(k);
    for (const auto& id : item_subset) cols.push_back(ds.column(id));

    m.pearson.assign(k, std::vector<double>(k, 1.0));
    m.spearman.assign(k, std::vector<double>(k, 1.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const std::optional<double> p = stats::pearson(cols[i], cols[j]);
            const std::optional<double> s = stats::spearman(cols[i], cols[j]);
            if (p && s) {
                m.pearson[i][j] = m.pearson[j][i] = *p;
                m.spearman[i][j] = m.spearman[j][i] = *s;
            } else {
                m.pearson[i][j] = m.pearson[j][i] = CorrelationMatrix::undefined_value;
                m.spearman[i][j] = m.spearman[j][i] = CorrelationMatrix::undefined_value;
                m.undefined_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    return m;
}

enum class VifStatus {
    ok,                // finite VIF from a well-posed regression
    exact_dependence,  // residual vanished: the item is a linear copy of its siblings
    constant_target,   // the item column has no variance; no regression possible
};

struct CollinearityResult {
    std::string construct_id;
    std::string item_id;
    VifStatus status = VifStatus::ok;
    double r_squared = 0.0;  // meaningful only when status == ok
    double vif = 0.0;        // 1 / (1 - r_squared), only when status == ok
    int n_used = 0;
    std::vector<std::string> predictors;  // sibling indicator ids
    bool reliable = false;                // sample-size adequacy for this regression
};

struct SampleSizeCheck {
    bool reliable = false;
    std::string warning;  // set when unreliable
};

// Observations-per-predictor heuristic. Below the floor the VIF is
// still reported but marked unreliable: regression estimates get
// unstable at pilot-scale n.
inline SampleSizeCheck sample_size_adequacy(int n_respondents, int n_predictors,
                                            double ratio_floor = 5.0) {
    if (n_predictors < 1) throw std::invalid_argument("sample_size_adequacy: need >= 1 predictor");
    SampleSizeCheck out;
    out.reliable = static_cast<double>(n_respondents) >= ratio_floor * n_predictors;
    if (!out.reliable)
        out.warning = "n=" + std::to_string(n_respondents) + " is below " +
                      std::to_string(static_cast<int>(ratio_floor)) + " observations per predictor (" +
                      std::to_string(n_predictors) +
                      " predictors); VIF could produce unstable estimates due to low sample size";
    return out;
}

// VIF per indicator: regress the indicator on its siblings (with
// intercept) through Householder QR, then VIF = 1/(1-R^2). A residual
// below `dependence_tol` relative to the target's variance is reported
// as exact dependence instead of an unstable finite number.
inline std::vector<CollinearityResult> compute_vif(const PilotDataset& ds,
                                                   const ConstructSpec& construct,
                                                   double ratio_floor = 5.0,
                                                   double dependence_tol = 1e-10) {
    const std::vector<std::string> indicators = construct.indicator_ids();
    if (indicators.size() < 2)
        throw std::invalid_argument("compute_vif: construct '" + construct.construct_id +
                                    "' needs at least 2 indicators");
    if (ds.has_missing())
        throw std::invalid_argument("compute_vif: dataset still has missing cells");
    const std::size_t n = ds.n_respondents();
    const std::size_t p = indicators.size() - 1;  // siblings per regression
    if (n < p + 2)
        throw std::invalid_argument("compute_vif: " + std::to_string(n) +
                                    " respondents cannot support " + std::to_string(p) +
                                    " predictors plus intercept");

    std::vector<std::vector<double>> cols;
    cols.reserve(indicators.size());
    for (const auto& id : indicators) cols.push_back(ds.column(id));

    bool any_varies = false;
    for (const auto& c : cols) {
        for (double v : c)
            if (v != c.front()) {
                any_varies = true;
                break;
            }
        if (any_varies) break;
    }
    if (!any_varies)
        throw Error("compute_vif: every indicator of construct '" + construct.construct_id +
                    "' is constant");

    const SampleSizeCheck adequacy =
        sample_size_adequacy(static_cast<int>(n), static_cast<int>(p), ratio_floor);

    std::vector<CollinearityResult> out;
    out.reserve(indicators.size());
    for (std::size_t j = 0; j < indicators.size(); ++j) {
        CollinearityResult r;
        r.construct_id = construct.construct_id;
        r.item_id = indicators[j];
        r.n_used = static_cast<int>(n);
        r.reliable = adequacy.reliable;
        for (std::size_t s = 0; s < indicators.size(); ++s)
            if (s != j) r.predictors.push_back(indicators[s]);

        const std::vector<double>& y = cols[j];
        const double ybar = stats::mean(y);
        double sst = 0.0;
        for (double v : y) sst += (v - ybar) * (v - ybar);
        if (sst == 0.0) {
            r.status = VifStatus::constant_target;
            out.push_back(std::move(r));
            continue;
        }

        std::vector<std::vector<double>> x;
        x.reserve(indicators.size());
        x.emplace_back(n, 1.0);  // intercept
        for (std::size_t s = 0; s < indicators.size(); ++s)
            if (s != j) x.push_back(cols[s]);
        const lstsq::Solution fit = lstsq::solve(x, y);

        if (fit.sse <= dependence_tol * sst) {
            r.status = VifStatus::exact_dependence;
            r.r_squared = 1.0;
        } else {
            r.status = VifStatus::ok;
            r.r_squared = std::clamp(1.0 - fit.sse / sst, 0.0, 1.0);
            r.vif = 1.0 / (1.0 - r.r_squared);
        }
        out.push_back(std::move(r));
    }
    return out;
}

struct AlphaResult {
    std::string construct_id;
    double alpha = 0.0;
    std::string note;  // set for formative constructs, where alpha is not a validity criterion
};

// Cronbach's alpha, computed as a contrast diagnostic: for a formative
// construct a low alpha is expected and not a defect, which the note
// spells out.
inline AlphaResult cronbach_alpha(const PilotDataset& ds, const ConstructSpec& construct) {
    const std::vector<std::string> indicators = construct.indicator_ids();
    const std::size_t k = indicators.size();
    if (k < 2)
        throw std::invalid_argument("cronbach_alpha: construct '" + construct.construct_id +
                                    "' needs at least 2 indicators");
    if (ds.n_respondents() < 3)
        throw std::invalid_argument("cronbach_alpha: need at least 3 respondents");
    if (ds.has_missing())
        throw std::invalid_argument("cronbach_alpha: dataset still has missing cells");

    double item_var_sum = 0.0;
    for (const auto& id : indicators) item_var_sum += stats::variance(ds.column(id));

    std::vector<double> totals(ds.n_respondents(), 0.0);
    for (const auto& id : indicators) {
        const std::size_t j = ds.item_index(id);
        for (std::size_t r = 0; r < ds.n_respondents(); ++r) totals[r] += ds.values[r][j];
    }
    const double total_var = stats::variance(totals);
    if (total_var == 0.0)
        throw Error("cronbach_alpha: total score variance is zero for construct '" +
                    construct.construct_id + "'");

    AlphaResult out;
    out.construct_id = construct.construct_id;
    const double kk = static_cast<double>(k);
    out.alpha = (kk / (kk - 1.0)) * (1.0 - item_var_sum / total_var);
    if (construct.model == ModelKind::formative)
        out.note = "not a validity criterion for formative constructs; "
                   "low internal consistency is expected when indicators cover distinct aspects";
    return out;
}

}  // namespace formav
