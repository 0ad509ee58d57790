#pragma once
// Report rendering. The structured form is canonical JSON (fixed key
// order, arrays in spec order, no timestamps) so identical inputs and
// config produce identical bytes; the human form is a markdown
// rendering of the same content.

#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "formav/pipeline.hpp"

namespace formav {

inline constexpr int report_format_version = 1;

namespace detail {

using ojson = nlohmann::ordered_json;

inline const char* severity_name(Severity s) {
    return s == Severity::error ? "ERROR" : "WARNING";
}

inline const char* missing_reason_name(MissingReason r) {
    switch (r) {
        case MissingReason::blank: return "blank";
        case MissingReason::non_numeric: return "non_numeric";
        case MissingReason::out_of_range: return "out_of_range";
    }
    return "?";
}

inline const char* vif_status_name(VifStatus s) {
    switch (s) {
        case VifStatus::ok: return "ok";
        case VifStatus::exact_dependence: return "exact_dependence";
        case VifStatus::constant_target: return "constant_target";
    }
    return "?";
}

inline ojson matrix_to_json(const std::vector<std::vector<double>>& m) {
    ojson rows = ojson::array();
    for (const auto& row : m) {
        ojson r = ojson::array();
        for (double v : row) {
            if (v == CorrelationMatrix::undefined_value) r.push_back(nullptr);
            else r.push_back(v);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

inline ojson correlations_to_json(const CorrelationMatrix& m, CorrPreference pref) {
    ojson j;
    j["item_ids"] = m.item_ids;
    if (pref != CorrPreference::spearman) j["pearson"] = matrix_to_json(m.pearson);
    if (pref != CorrPreference::pearson) j["spearman"] = matrix_to_json(m.spearman);
    ojson pairs = ojson::array();
    for (const auto& [a, b] : m.undefined_pairs) {
        pairs.push_back(ojson::array({m.item_ids[a], m.item_ids[b]}));
    }
    j["undefined_pairs"] = std::move(pairs);
    return j;
}

inline ojson construct_to_json(const ConstructRun& cr, const Config& cfg) {
    ojson j;
    j["construct_id"] = cr.construct_id;
    j["model"] = to_string(cr.model);
    j["weight_source"] = to_string(cr.weight_source);
    j["indicators"] = cr.indicators;

    ojson cvr = ojson::array();
    for (const auto& r : cr.cvr) {
        ojson e;
        e["item_id"] = r.item_id;
        e["n_essential"] = r.n_essential;
        e["n_raters"] = r.n_raters;
        e["cvr"] = r.cvr;
        e["critical_value"] = r.critical_value;
        e["critical_attainable"] = r.critical_attainable;
        e["passed"] = r.passed;
        cvr.push_back(std::move(e));
    }
    j["cvr"] = std::move(cvr);

    ojson means = ojson::array();
    for (const auto& m : cr.mean_ratings) {
        ojson e;
        e["item_id"] = m.item_id;
        e["mean_rating"] = m.mean_rating;
        means.push_back(std::move(e));
    }
    j["mean_ratings"] = std::move(means);

    if (cr.weights) {
        ojson w;
        w["item_ids"] = cr.weights->item_ids;
        w["weights"] = cr.weights->weights;
        w["source"] = to_string(cr.weights->source);
        j["weights"] = std::move(w);
    } else {
        j["weights"] = nullptr;
    }

    ojson desc = ojson::array();
    for (const auto& d : cr.descriptives) {
        ojson e;
        e["item_id"] = d.item_id;
        e["n"] = d.n;
        e["mean"] = d.mean;
        e["median"] = d.median;
        e["sd"] = d.sd;
        e["iqr"] = d.iqr;
        e["min"] = d.min;
        e["max"] = d.max;
        e["floor_share"] = d.floor_share;
        e["ceiling_share"] = d.ceiling_share;
        e["zero_variance"] = d.zero_variance;
        desc.push_back(std::move(e));
    }
    j["descriptives"] = std::move(desc);

    if (cr.correlations) j["correlations"] = correlations_to_json(*cr.correlations, cfg.corr_preference);
    else j["correlations"] = nullptr;

    ojson coll = ojson::array();
    for (const auto& r : cr.collinearity) {
        ojson e;
        e["item_id"] = r.item_id;
        e["status"] = vif_status_name(r.status);
        if (r.status == VifStatus::ok) {
            e["r_squared"] = r.r_squared;
            e["vif"] = r.vif;
        } else {
            e["r_squared"] = (r.status == VifStatus::exact_dependence) ? ojson(1.0) : ojson(nullptr);
            e["vif"] = nullptr;
        }
        e["n_used"] = r.n_used;
        e["predictors"] = r.predictors;
        e["reliable"] = r.reliable;
        coll.push_back(std::move(e));
    }
    j["collinearity"] = std::move(coll);

    if (cr.alpha) {
        ojson a;
        a["value"] = cr.alpha->alpha;
        a["note"] = cr.alpha->note;
        j["alpha"] = std::move(a);
    } else {
        j["alpha"] = nullptr;
    }

    if (cr.composites) {
        ojson comp;
        comp["method"] = to_string(cr.composites->method);
        comp["respondent_ids"] = cr.composites->respondent_ids;
        comp["scores"] = cr.composites->scores;
        j["composites"] = std::move(comp);
    } else {
        j["composites"] = nullptr;
    }

    j["notes"] = cr.notes;
    return j;
}

inline ojson gates_to_json(const std::vector<GateDecision>& gates) {
    ojson out = ojson::array();
    for (const auto& g : gates) {
        ojson j;
        j["construct_id"] = g.construct_id;
        j["status"] = gate_status_name(g.status);
        j["stage"] = gate_stage_name(g.stage);
        ojson reasons = ojson::array();
        for (const auto& r : g.reasons) {
            ojson e;
            e["code"] = reason_code_name(r.code);
            e["stage"] = gate_stage_name(r.stage);
            e["message"] = r.message;
            e["item_ids"] = r.item_ids;
            reasons.push_back(std::move(e));
        }
        j["reasons"] = std::move(reasons);
        out.push_back(std::move(j));
    }
    return out;
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const RunResult& run) {
    using detail::ojson;
    ojson doc;
    doc["report_version"] = report_format_version;
    doc["iteration_id"] = run.iteration_id;
    doc["spec_hash"] = run.spec_hash;
    doc["config"] = config_to_json(run.config);

    ojson inputs;
    {
        ojson pilot;
        pilot["path"] = run.pilot_path;
        pilot["n_loaded_respondents"] = run.n_loaded_respondents;
        pilot["n_after_missing_policy"] = run.respondent_ids.size();
        pilot["respondent_ids"] = run.respondent_ids;
        inputs["pilot"] = std::move(pilot);
        if (!run.sme_path.empty()) {
            ojson sme;
            sme["path"] = run.sme_path;
            inputs["sme"] = std::move(sme);
        } else {
            inputs["sme"] = nullptr;
        }
    }
    doc["inputs"] = std::move(inputs);

    ojson findings = ojson::array();
    for (const auto& f : run.spec_findings) {
        ojson e;
        e["severity"] = detail::severity_name(f.severity);
        e["code"] = f.code;
        e["message"] = f.message;
        e["construct_id"] = f.construct_id;
        e["item_id"] = f.item_id;
        findings.push_back(std::move(e));
    }
    doc["spec_findings"] = std::move(findings);

    ojson missing = ojson::array();
    for (const auto& m : run.missing_cells) {
        ojson e;
        e["respondent_id"] = m.respondent_id;
        e["item_id"] = m.item_id;
        e["raw"] = m.raw;
        e["reason"] = detail::missing_reason_name(m.reason);
        missing.push_back(std::move(e));
    }
    doc["missing_cells"] = std::move(missing);
    doc["dropped_respondents"] = run.dropped_respondents;

    ojson outliers = ojson::array();
    for (const auto& o : run.outliers) {
        ojson e;
        e["respondent_id"] = o.respondent_id;
        e["items_flagged"] = o.items_flagged;
        e["fraction_flagged"] = o.fraction_flagged;
        e["is_outlier"] = o.is_outlier;
        outliers.push_back(std::move(e));
    }
    doc["outliers"] = std::move(outliers);

    ojson constructs = ojson::array();
    for (const auto& cr : run.constructs)
        constructs.push_back(detail::construct_to_json(cr, run.config));
    doc["constructs"] = std::move(constructs);

    doc["gates"] = detail::gates_to_json(run.gates);
    doc["iteration_warnings"] = run.iteration_warnings;
    return doc;
}

// Byte-deterministic structured report.
inline std::string generate_structured_report(const RunResult& run) {
    return report_to_json(run).dump(2) + "\n";
}

// Markdown rendering of the same content.
inline std::string generate_human_report(const RunResult& run) {
    std::ostringstream os;
    os << "# Pilot validation report\n\n";
    os << "- iteration: " << run.iteration_id << "\n";
    os << "- spec hash: " << run.spec_hash << "\n";
    os << "- pilot data: " << run.pilot_path << " (" << run.n_loaded_respondents << " loaded, "
       << run.respondent_ids.size() << " after missing-data policy)\n";
    if (!run.sme_path.empty()) os << "- SME ratings: " << run.sme_path << "\n";
    if (!run.config.notes.empty()) os << "- notes: " << run.config.notes << "\n";
    os << "\n## Gate decisions\n\n";
    os << "| construct | status | stage | reasons |\n";
    os << "|---|---|---|---|\n";
    for (const auto& g : run.gates) {
        os << "| " << g.construct_id << " | " << gate_status_name(g.status) << " | "
           << gate_stage_name(g.stage) << " | ";
        if (g.reasons.empty()) {
            os << "-";
        } else {
            for (std::size_t i = 0; i < g.reasons.size(); ++i) {
                if (i) os << "; ";
                os << reason_code_name(g.reasons[i].code);
            }
        }
        os << " |\n";
    }

    if (!run.spec_findings.empty()) {
        os << "\n## Spec findings\n\n";
        for (const auto& f : run.spec_findings)
            os << "- " << detail::severity_name(f.severity) << " [" << f.code << "] " << f.message
               << "\n";
    }

    if (!run.dropped_respondents.empty()) {
        os << "\n## Dropped respondents (missing data, listwise)\n\n";
        for (const auto& r : run.dropped_respondents) os << "- " << r << "\n";
    }

    bool any_outlier = false;
    for (const auto& o : run.outliers) any_outlier |= o.is_outlier;
    if (any_outlier) {
        os << "\n## Outlier respondents\n\n";
        for (const auto& o : run.outliers) {
            if (!o.is_outlier) continue;
            os << "- " << o.respondent_id << ": flagged on " << o.items_flagged.size()
               << " items (fraction " << o.fraction_flagged << ")\n";
        }
    }

    for (const auto& cr : run.constructs) {
        os << "\n## Construct " << cr.construct_id << " (" << detail::to_string(cr.model)
           << ", weights: " << detail::to_string(cr.weight_source) << ")\n";

        if (!cr.cvr.empty()) {
            os << "\n### Content validity (CVR)\n\n";
            os << "| item | n_essential / N | CVR | critical | passed |\n";
            os << "|---|---|---|---|---|\n";
            for (const auto& r : cr.cvr)
                os << "| " << r.item_id << " | " << r.n_essential << " / " << r.n_raters << " | "
                   << r.cvr << " | " << r.critical_value << " | " << (r.passed ? "yes" : "NO")
                   << " |\n";
        }
        if (!cr.mean_ratings.empty()) {
            os << "\n### Researcher ratings (mean of 1..5)\n\n";
            for (const auto& m : cr.mean_ratings)
                os << "- " << m.item_id << ": " << m.mean_rating << "\n";
        }
        if (cr.weights) {
            os << "\n### Theoretical weights\n\n";
            for (std::size_t i = 0; i < cr.weights->item_ids.size(); ++i)
                os << "- " << cr.weights->item_ids[i] << ": " << cr.weights->weights[i] << "\n";
        }
        if (!cr.descriptives.empty()) {
            os << "\n### Descriptives\n\n";
            os << "| item | mean | median | sd | IQR | min | max | floor | ceiling |\n";
            os << "|---|---|---|---|---|---|---|---|---|\n";
            for (const auto& d : cr.descriptives)
                os << "| " << d.item_id << " | " << d.mean << " | " << d.median << " | " << d.sd
                   << " | " << d.iqr << " | " << d.min << " | " << d.max << " | " << d.floor_share
                   << " | " << d.ceiling_share << " |\n";
        }
        if (!cr.collinearity.empty()) {
            os << "\n### Collinearity (VIF)\n\n";
            os << "| item | R^2 | VIF | reliable n |\n";
            os << "|---|---|---|---|\n";
            for (const auto& r : cr.collinearity) {
                os << "| " << r.item_id << " | ";
                if (r.status == VifStatus::ok) os << r.r_squared << " | " << r.vif;
                else if (r.status == VifStatus::exact_dependence) os << "1 | EXACT_DEPENDENCE";
                else os << "- | constant column";
                os << " | " << (r.reliable ? "yes" : "no") << " |\n";
            }
        }
        if (cr.alpha) {
            os << "\n### Cronbach's alpha\n\n";
            os << "- alpha = " << cr.alpha->alpha;
            if (!cr.alpha->note.empty()) os << " (" << cr.alpha->note << ")";
            os << "\n";
        }
        for (const auto& n : cr.notes) os << "\n> " << n << "\n";
    }

    if (!run.iteration_warnings.empty()) {
        os << "\n## Iteration hygiene\n\n";
        for (const auto& w : run.iteration_warnings) os << "- WARNING: " << w << "\n";
    }
    os << "\n";
    return os.str();
}

}  // namespace formav
