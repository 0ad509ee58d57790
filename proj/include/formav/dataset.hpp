#pragma once
// In-memory pilot response data and SME rating data. Matrices keep
// file order; nothing is silently re-sorted.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "formav/errors.hpp"

namespace formav {

struct Provenance {
    std::string source_path;
    std::string loaded_at;  // wall-clock tag; excluded from structured reports
};

// Respondent x item matrix of Likert responses. Missing cells are NaN
// until a missing-data policy is applied; after listwise deletion the
// matrix is dense and every value is inside its item's scale bounds.
struct PilotDataset {
    std::string iteration_id;
    std::vector<std::string> respondent_ids;
    std::vector<std::string> items;
    std::vector<std::vector<double>> values;  // row-major: values[respondent][item]
    Provenance provenance;

    static constexpr double missing = std::numeric_limits<double>::quiet_NaN();
    static bool is_missing(double v) { return std::isnan(v); }

    std::size_t n_respondents() const { return respondent_ids.size(); }
    std::size_t n_items() const { return items.size(); }

    std::size_t item_index(const std::string& item_id) const {
        for (std::size_t j = 0; j < items.size(); ++j)
            if (items[j] == item_id) return j;
        throw ReferenceError("item '" + item_id + "' not present in dataset");
    }

    bool has_item(const std::string& item_id) const {
        for (const auto& it : items)
            if (it == item_id) return true;
        return false;
    }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> out;
        out.reserve(values.size());
        for (const auto& row : values) out.push_back(row.at(j));
        return out;
    }

    std::vector<double> column(const std::string& item_id) const {
        return column(item_index(item_id));
    }

    bool has_missing() const {
        for (const auto& row : values)
            for (double v : row)
                if (is_missing(v)) return true;
        return false;
    }
};

enum class SmeMode { cvr3, scale5 };

// Categories for the three-level essentiality judgment.
enum class SmeJudgment : int { essential = 0, useful_not_essential = 1, not_necessary = 2 };

// Rater x item judgments; a set is uniformly categorical (cvr3) or
// uniformly numeric 1..5 (scale5).
struct SmeRatingSet {
    SmeMode mode = SmeMode::cvr3;
    std::vector<std::string> rater_ids;
    std::vector<std::string> items;
    // cvr3: cells hold SmeJudgment values; scale5: cells hold 1..5.
    std::vector<std::vector<int>> judgments;  // row-major: judgments[rater][item]
    Provenance provenance;

    std::size_t n_raters() const { return rater_ids.size(); }

    std::size_t item_index(const std::string& item_id) const {
        for (std::size_t j = 0; j < items.size(); ++j)
            if (items[j] == item_id) return j;
        throw ReferenceError("item '" + item_id + "' not present in rating set");
    }

    bool has_item(const std::string& item_id) const {
        for (const auto& it : items)
            if (it == item_id) return true;
        return false;
    }
};

}  // namespace formav
