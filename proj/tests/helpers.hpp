#pragma once
// Shared builders for test fixtures.

#include <string>
#include <vector>

#include "formav/dataset.hpp"
#include "formav/spec_model.hpp"

namespace testutil {

inline formav::ItemSpec item(const std::string& id, int lo = 1, int hi = 5,
                             const std::string& citation = "Doe 2021") {
    formav::ItemSpec it;
    it.item_id = id;
    it.prompt = "Prompt for " + id;
    it.scale_min = lo;
    it.scale_max = hi;
    it.citation = citation;
    return it;
}

inline formav::ConstructSpec construct(const std::string& id, std::vector<formav::ItemSpec> items,
                                       formav::ModelKind model = formav::ModelKind::formative,
                                       formav::WeightSource ws = formav::WeightSource::manual) {
    formav::ConstructSpec c;
    c.construct_id = id;
    c.name = "Construct " + id;
    c.model = model;
    c.weight_source = ws;
    c.items = std::move(items);
    if (ws == formav::WeightSource::manual)
        c.manual_weights.assign(c.items.size(), 1.0);
    return c;
}

// n generic items q1..qn on a 1..5 scale under one construct.
inline formav::MeasurementSpec single_construct_spec(int n_items,
                                                     formav::ModelKind model = formav::ModelKind::formative) {
    std::vector<formav::ItemSpec> items;
    for (int i = 1; i <= n_items; ++i) items.push_back(item("q" + std::to_string(i)));
    formav::MeasurementSpec spec;
    spec.constructs.push_back(construct("c1", std::move(items), model));
    return spec;
}

// Dataset from a row-major value matrix; respondents r1, r2, ...
inline formav::PilotDataset dataset(std::vector<std::string> items,
                                    std::vector<std::vector<double>> rows,
                                    const std::string& iteration = "it1") {
    formav::PilotDataset ds;
    ds.iteration_id = iteration;
    ds.items = std::move(items);
    for (std::size_t r = 0; r < rows.size(); ++r)
        ds.respondent_ids.push_back("r" + std::to_string(r + 1));
    ds.values = std::move(rows);
    return ds;
}

// Categorical SME set from essential counts: item j gets counts[j]
// raters saying "essential", the rest "useful_not_essential".
inline formav::SmeRatingSet sme_from_counts(const std::vector<std::string>& items,
                                            const std::vector<int>& essential_counts, int n_raters) {
    formav::SmeRatingSet set;
    set.mode = formav::SmeMode::cvr3;
    set.items = items;
    for (int r = 0; r < n_raters; ++r) set.rater_ids.push_back("R" + std::to_string(r + 1));
    set.judgments.assign(n_raters, std::vector<int>(items.size(), 0));
    for (std::size_t j = 0; j < items.size(); ++j)
        for (int r = 0; r < n_raters; ++r)
            set.judgments[r][j] = (r < essential_counts[j])
                                      ? static_cast<int>(formav::SmeJudgment::essential)
                                      : static_cast<int>(formav::SmeJudgment::useful_not_essential);
    return set;
}

}  // namespace testutil
