#pragma once
// Run configuration: every threshold the diagnostics and gates use,
// loadable from a JSON file and embedded verbatim in reports so a run
// is reproducible from its own output.

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "formav/composites.hpp"
#include "formav/errors.hpp"
#include "formav/ingest.hpp"
#include "formav/workflow.hpp"

namespace formav {

enum class CorrPreference { pearson, spearman, both };

struct Config {
    // content validity
    double cvr_alpha = 0.05;
    std::map<int, double> cvr_critical_override;  // panel size -> critical value

    // spec validation
    int item_floor = 5;

    // diagnostics
    double vif_max = 5.0;
    double outlier_fence = 1.5;
    double outlier_fraction = 0.25;
    double sample_ratio_floor = 5.0;
    CorrPreference corr_preference = CorrPreference::both;
    double extreme_share_max = 0.8;

    // reflective branch
    double alpha_floor = 0.7;

    // ingestion / composites
    MissingPolicy missing_policy = MissingPolicy::listwise;
    CompositeMethod composite_method = CompositeMethod::weighted_mean;

    // free-text pass-through (e.g. face-validity observations)
    std::string notes;

    GateConfig gate_config() const { return {vif_max, extreme_share_max, alpha_floor}; }
};

namespace detail {

inline std::string to_string(CorrPreference p) {
    switch (p) {
        case CorrPreference::pearson: return "pearson";
        case CorrPreference::spearman: return "spearman";
        default: return "both";
    }
}
inline CorrPreference corr_preference_from(const std::string& s) {
    if (s == "pearson") return CorrPreference::pearson;
    if (s == "spearman") return CorrPreference::spearman;
    if (s == "both") return CorrPreference::both;
    throw ParseError("unknown corr_preference '" + s + "'");
}
inline std::string to_string(MissingPolicy p) {
    return p == MissingPolicy::listwise ? "listwise" : "error";
}
inline MissingPolicy missing_policy_from(const std::string& s) {
    if (s == "listwise") return MissingPolicy::listwise;
    if (s == "error") return MissingPolicy::error;
    throw ParseError("unknown missing_policy '" + s + "'");
}
inline std::string to_string(CompositeMethod m) {
    return m == CompositeMethod::weighted_mean ? "mean" : "median";
}
inline CompositeMethod composite_method_from(const std::string& s) {
    if (s == "mean") return CompositeMethod::weighted_mean;
    if (s == "median") return CompositeMethod::weighted_median;
    throw ParseError("unknown composite_method '" + s + "'");
}

}  // namespace detail

inline Config parse_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    Config c;
    try {
        c.cvr_alpha = doc.value("cvr_alpha", c.cvr_alpha);
        if (doc.contains("cvr_critical_override"))
            for (const auto& [key, val] : doc["cvr_critical_override"].items())
                c.cvr_critical_override[std::stoi(key)] = val.get<double>();
        c.item_floor = doc.value("item_floor", c.item_floor);
        c.vif_max = doc.value("vif_max", c.vif_max);
        c.outlier_fence = doc.value("outlier_fence", c.outlier_fence);
        c.outlier_fraction = doc.value("outlier_fraction", c.outlier_fraction);
        c.sample_ratio_floor = doc.value("sample_ratio_floor", c.sample_ratio_floor);
        if (doc.contains("corr_preference"))
            c.corr_preference = detail::corr_preference_from(doc["corr_preference"].get<std::string>());
        c.extreme_share_max = doc.value("extreme_share_max", c.extreme_share_max);
        c.alpha_floor = doc.value("alpha_floor", c.alpha_floor);
        if (doc.contains("missing_policy"))
            c.missing_policy = detail::missing_policy_from(doc["missing_policy"].get<std::string>());
        if (doc.contains("composite_method"))
            c.composite_method = detail::composite_method_from(doc["composite_method"].get<std::string>());
        c.notes = doc.value("notes", c.notes);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config has a malformed field: ") + e.what());
    }
    if (!(c.cvr_alpha > 0.0 && c.cvr_alpha < 0.5))
        throw ParseError("config: cvr_alpha must be in (0, 0.5)");
    if (c.vif_max <= 1.0) throw ParseError("config: vif_max must exceed 1");
    if (c.outlier_fence < 0.0) throw ParseError("config: outlier_fence must be >= 0");
    if (!(c.outlier_fraction >= 0.0 && c.outlier_fraction <= 1.0))
        throw ParseError("config: outlier_fraction must be in [0, 1]");
    if (!(c.extreme_share_max > 0.0 && c.extreme_share_max <= 1.0))
        throw ParseError("config: extreme_share_max must be in (0, 1]");
    return c;
}

inline Config load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

// Canonical JSON form, embedded in structured reports.
inline nlohmann::ordered_json config_to_json(const Config& c) {
    nlohmann::ordered_json j;
    j["cvr_alpha"] = c.cvr_alpha;
    if (!c.cvr_critical_override.empty()) {
        nlohmann::ordered_json o;
        for (const auto& [n, v] : c.cvr_critical_override) o[std::to_string(n)] = v;
        j["cvr_critical_override"] = std::move(o);
    }
    j["item_floor"] = c.item_floor;
    j["vif_max"] = c.vif_max;
    j["outlier_fence"] = c.outlier_fence;
    j["outlier_fraction"] = c.outlier_fraction;
    j["sample_ratio_floor"] = c.sample_ratio_floor;
    j["corr_preference"] = detail::to_string(c.corr_preference);
    j["extreme_share_max"] = c.extreme_share_max;
    j["alpha_floor"] = c.alpha_floor;
    j["missing_policy"] = detail::to_string(c.missing_policy);
    j["composite_method"] = detail::to_string(c.composite_method);
    j["notes"] = c.notes;
    return j;
}

}  // namespace formav
