#pragma once
// File ingestion: pilot CSV and SME rating CSV loaders plus the
// missing-data policy. Loaders validate against the spec, coerce
// values, and record anything they refuse to use; they never clamp or
// invent data.

#include <cerrno>
#include <cstdlib>
#include <ctime>
#include <set>
#include <string>
#include <vector>

#include "formav/csv.hpp"
#include "formav/dataset.hpp"
#include "formav/spec_model.hpp"

namespace formav {

enum class MissingReason { blank, non_numeric, out_of_range };

struct MissingCell {
    std::string respondent_id;
    std::string item_id;
    std::string raw;
    MissingReason reason = MissingReason::blank;
};

struct PilotLoadResult {
    PilotDataset dataset;
    std::vector<MissingCell> missing;
    std::vector<SpecFinding> findings;  // e.g. spec items absent from the file
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

inline bool parse_number(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) return false;
    out = v;
    return true;
}

inline std::string now_tag() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace detail

// Loads a pilot CSV (first column `respondent_id`, remaining columns
// item ids declared in the spec). Non-numeric and out-of-range cells
// become missing values and are recorded; reverse-coded items are
// remapped to scale_max + scale_min - v.
inline PilotLoadResult load_pilot_csv(const std::string& path, const MeasurementSpec& spec,
                                      const std::string& iteration_id) {
    const csv::Document doc = csv::read_file(path);
    if (doc.rows.empty()) throw ParseError("pilot file is empty: " + path);

    const auto& header = doc.rows.front();
    if (header.empty() || detail::trim(header.front()) != "respondent_id")
        throw ParseError("pilot file must start with a 'respondent_id' column: " + path);

    PilotLoadResult out;
    PilotDataset& ds = out.dataset;
    ds.iteration_id = iteration_id;
    ds.provenance = {path, detail::now_tag()};

    std::vector<const ItemSpec*> col_specs;
    for (std::size_t j = 1; j < header.size(); ++j) {
        const std::string item_id = detail::trim(header[j]);
        const ItemSpec* it = spec.find_item(item_id);
        if (!it) throw ReferenceError("pilot column '" + item_id + "' is not an item in the spec");
        if (ds.has_item(item_id))
            throw ReferenceError("pilot column '" + item_id + "' appears twice");
        ds.items.push_back(item_id);
        col_specs.push_back(it);
    }

    for (const ItemSpec* it : spec.all_items()) {
        if (!ds.has_item(it->item_id))
            out.findings.push_back({Severity::warning, finding_code::item_never_administered,
                                    "item '" + it->item_id + "' is declared in the spec but never administered",
                                    "", it->item_id});
    }

    std::set<std::string> seen;
    for (std::size_t r = 1; r < doc.rows.size(); ++r) {
        const auto& row = doc.rows[r];
        if (row.size() != header.size())
            throw ParseError("pilot row " + std::to_string(r + 1) + " has " +
                             std::to_string(row.size()) + " fields, expected " +
                             std::to_string(header.size()));
        const std::string rid = detail::trim(row.front());
        if (rid.empty()) throw ParseError("pilot row " + std::to_string(r + 1) + " has an empty respondent_id");
        if (!seen.insert(rid).second) throw ReferenceError("duplicate respondent id '" + rid + "'");
        ds.respondent_ids.push_back(rid);

        std::vector<double> vals;
        vals.reserve(col_specs.size());
        for (std::size_t j = 0; j < col_specs.size(); ++j) {
            const std::string& raw = row[j + 1];
            const ItemSpec& it = *col_specs[j];
            double v = 0.0;
            if (detail::trim(raw).empty()) {
                out.missing.push_back({rid, it.item_id, raw, MissingReason::blank});
                vals.push_back(PilotDataset::missing);
            } else if (!detail::parse_number(raw, v)) {
                out.missing.push_back({rid, it.item_id, raw, MissingReason::non_numeric});
                vals.push_back(PilotDataset::missing);
            } else if (v < it.scale_min || v > it.scale_max) {
                // Out-of-range responses are recorded, not clamped.
                out.missing.push_back({rid, it.item_id, raw, MissingReason::out_of_range});
                vals.push_back(PilotDataset::missing);
            } else {
                if (it.reverse_coded) v = static_cast<double>(it.scale_max + it.scale_min) - v;
                vals.push_back(v);
            }
        }
        ds.values.push_back(std::move(vals));
    }
    if (ds.respondent_ids.empty()) throw ParseError("pilot file has no data rows: " + path);
    return out;
}

enum class MissingPolicy { listwise, error };

struct MissingPolicyResult {
    PilotDataset dataset;
    std::vector<std::string> dropped_respondents;  // file order
};

// listwise: drop every respondent with any missing cell and report
// them. error: refuse to proceed, naming the first offending cell.
inline MissingPolicyResult apply_missing_policy(const PilotDataset& ds, MissingPolicy policy) {
    MissingPolicyResult out;
    out.dataset.iteration_id = ds.iteration_id;
    out.dataset.items = ds.items;
    out.dataset.provenance = ds.provenance;
    for (std::size_t r = 0; r < ds.n_respondents(); ++r) {
        bool complete = true;
        for (std::size_t j = 0; j < ds.n_items(); ++j) {
            if (PilotDataset::is_missing(ds.values[r][j])) {
                if (policy == MissingPolicy::error)
                    throw Error("missing cell at respondent '" + ds.respondent_ids[r] +
                                "', item '" + ds.items[j] + "'");
                complete = false;
                break;
            }
        }
        if (complete) {
            out.dataset.respondent_ids.push_back(ds.respondent_ids[r]);
            out.dataset.values.push_back(ds.values[r]);
        } else {
            out.dropped_respondents.push_back(ds.respondent_ids[r]);
        }
    }
    return out;
}

// Loads an SME rating CSV. The file must declare its mode in a leading
// comment line: `# mode=cvr3` (categorical essentiality) or
// `# mode=scale5` (numeric 1..5). First data column is `rater_id`;
// remaining columns are item ids (or, for higher-order weighting,
// construct ids).
inline SmeRatingSet load_sme_ratings(const std::string& path, const MeasurementSpec& spec) {
    const csv::Document doc = csv::read_file(path);

    SmeMode mode = SmeMode::cvr3;
    bool mode_found = false;
    for (const auto& comment : doc.comments) {
        if (comment.find("mode=cvr3") != std::string::npos) {
            mode = SmeMode::cvr3;
            mode_found = true;
        } else if (comment.find("mode=scale5") != std::string::npos) {
            mode = SmeMode::scale5;
            mode_found = true;
        }
    }
    if (!mode_found)
        throw ParseError("SME file must declare '# mode=cvr3' or '# mode=scale5': " + path);
    if (doc.rows.empty()) throw ParseError("SME file has no header row: " + path);

    const auto& header = doc.rows.front();
    if (header.empty() || detail::trim(header.front()) != "rater_id")
        throw ParseError("SME file must start with a 'rater_id' column: " + path);

    SmeRatingSet set;
    set.mode = mode;
    set.provenance = {path, detail::now_tag()};
    for (std::size_t j = 1; j < header.size(); ++j) {
        const std::string id = detail::trim(header[j]);
        if (!spec.find_item(id) && !spec.find_construct(id))
            throw ReferenceError("SME column '" + id + "' is neither an item nor a construct in the spec");
        if (set.has_item(id)) throw ReferenceError("SME column '" + id + "' appears twice");
        set.items.push_back(id);
    }
    if (set.items.empty()) throw ParseError("SME file has no item columns: " + path);

    std::set<std::string> seen;
    for (std::size_t r = 1; r < doc.rows.size(); ++r) {
        const auto& row = doc.rows[r];
        if (row.size() != header.size())
            throw ParseError("SME row " + std::to_string(r + 1) + " has " +
                             std::to_string(row.size()) + " fields, expected " +
                             std::to_string(header.size()));
        const std::string rid = detail::trim(row.front());
        if (!seen.insert(rid).second) throw ReferenceError("duplicate rater id '" + rid + "'");
        set.rater_ids.push_back(rid);

        std::vector<int> vals;
        for (std::size_t j = 1; j < row.size(); ++j) {
            const std::string cell = detail::trim(row[j]);
            if (mode == SmeMode::cvr3) {
                if (cell == "essential") vals.push_back(static_cast<int>(SmeJudgment::essential));
                else if (cell == "useful_not_essential")
                    vals.push_back(static_cast<int>(SmeJudgment::useful_not_essential));
                else if (cell == "not_necessary")
                    vals.push_back(static_cast<int>(SmeJudgment::not_necessary));
                else
                    throw ParseError("cell '" + cell + "' (rater '" + rid + "', column '" +
                                     set.items[j - 1] + "') is not a cvr3 category");
            } else {
                double v = 0.0;
                if (!detail::parse_number(cell, v) || v != static_cast<int>(v) || v < 1 || v > 5)
                    throw ParseError("cell '" + cell + "' (rater '" + rid + "', column '" +
                                     set.items[j - 1] + "') is not an integer rating 1..5");
                vals.push_back(static_cast<int>(v));
            }
        }
        set.judgments.push_back(std::move(vals));
    }

    if (set.rater_ids.empty()) throw ParseError("SME file has no rater rows: " + path);
    if (mode == SmeMode::cvr3 && set.n_raters() < 2)
        throw Error("CVR requires at least 2 raters; file has " + std::to_string(set.n_raters()));

    // Align columns to spec declaration order (items first, then
    // constructs).
    std::vector<std::string> ordered;
    for (const ItemSpec* it : spec.all_items())
        if (set.has_item(it->item_id)) ordered.push_back(it->item_id);
    for (const auto& c : spec.constructs)
        if (set.has_item(c.construct_id)) ordered.push_back(c.construct_id);
    if (ordered.size() != set.items.size()) ordered = set.items;  // duplicate spec ids; keep file order
    if (ordered != set.items) {
        std::vector<std::size_t> index;
        index.reserve(ordered.size());
        for (const auto& id : ordered) index.push_back(set.item_index(id));
        std::vector<std::vector<int>> reordered(set.n_raters());
        for (std::size_t r = 0; r < set.n_raters(); ++r) {
            reordered[r].reserve(index.size());
            for (std::size_t j : index) reordered[r].push_back(set.judgments[r][j]);
        }
        set.items = ordered;
        set.judgments = std::move(reordered);
    }
    return set;
}

}  // namespace formav
