#pragma once
// Gate evaluation: turns upstream diagnostics into a deterministic
// PASS / REVISE / BLOCKED verdict per construct, with machine-readable
// reason codes, plus iteration hygiene checks across pilot rounds.
//
// Formative constructs route content validity -> descriptives ->
// collinearity; reflective constructs route through the internal
// consistency (alpha) check instead. The two branches never exchange
// reason codes.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "formav/content_validity.hpp"
#include "formav/diagnostics.hpp"
#include "formav/spec_model.hpp"

namespace formav {

// Ordered worst-first so "adding a failure never upgrades" is the
// natural comparison on the enum.
enum class GateStatus { blocked = 0, revise = 1, pass = 2 };

enum class GateStage { content_validity, descriptives, collinearity, reliability };

enum class ReasonCode {
    cvr_failed,          // one or more items below the CVR critical value
    content_all_failed,  // no item survived content validity; construct integrity gone
    zero_variance,       // item column is constant
    floor_extreme,       // floor share above the configured ceiling
    ceiling_extreme,     // ceiling share above the configured ceiling
    collinear_excess,    // VIF above vif_max
    collinear_exact,     // exact linear dependence between indicators
    alpha_low,           // reflective branch: alpha below the floor
    upstream_blocked,    // a child construct was blocked; proxy data unavailable
};

inline const char* reason_code_name(ReasonCode c) {
    switch (c) {
        case ReasonCode::cvr_failed: return "CVR_FAILED";
        case ReasonCode::content_all_failed: return "CONTENT_ALL_FAILED";
        case ReasonCode::zero_variance: return "ZERO_VARIANCE";
        case ReasonCode::floor_extreme: return "FLOOR_EXTREME";
        case ReasonCode::ceiling_extreme: return "CEILING_EXTREME";
        case ReasonCode::collinear_excess: return "COLLINEAR_EXCESS";
        case ReasonCode::collinear_exact: return "COLLINEAR_EXACT";
        case ReasonCode::alpha_low: return "ALPHA_LOW";
        case ReasonCode::upstream_blocked: return "UPSTREAM_BLOCKED";
    }
    return "?";
}

inline const char* gate_stage_name(GateStage s) {
    switch (s) {
        case GateStage::content_validity: return "content_validity";
        case GateStage::descriptives: return "descriptives";
        case GateStage::collinearity: return "collinearity";
        case GateStage::reliability: return "reliability";
    }
    return "?";
}

inline const char* gate_status_name(GateStatus s) {
    switch (s) {
        case GateStatus::blocked: return "BLOCKED";
        case GateStatus::revise: return "REVISE";
        case GateStatus::pass: return "PASS";
    }
    return "?";
}

struct GateReason {
    ReasonCode code;
    GateStage stage;
    std::string message;
    std::vector<std::string> item_ids;
};

struct GateDecision {
    std::string construct_id;
    GateStatus status = GateStatus::pass;
    // Stage that determined the status; the branch's final stage on PASS.
    GateStage stage = GateStage::content_validity;
    std::vector<GateReason> reasons;
};

// Everything the gate needs about one construct. CVR results are empty
// when the construct does not use the CVR weight source; the
// correlation matrix (when present) is used to name redundancy
// suspects next to collinearity findings.
struct ConstructGateInputs {
    const ConstructSpec* construct = nullptr;
    std::vector<CvrResult> cvr;
    std::vector<ItemDescriptives> descriptives;
    std::vector<CollinearityResult> collinearity;
    const CorrelationMatrix* correlations = nullptr;
    bool prefer_spearman = false;  // short Likert scales: rank correlation names suspects
    std::optional<AlphaResult> alpha;
    bool upstream_blocked = false;
};

struct GateConfig {
    double vif_max = 5.0;
    double extreme_share_max = 0.8;
    double alpha_floor = 0.7;
};

namespace detail {

inline std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += ids[i];
    }
    return out;
}

// Highest-correlated defined pair among the construct's indicators;
// the redundancy suspects named in collinearity findings.
inline std::string top_pair_note(const ConstructGateInputs& in) {
    if (!in.correlations) return "";
    const CorrelationMatrix& m = *in.correlations;
    const auto& mat = in.prefer_spearman ? m.spearman : m.pearson;
    double best = -1.0;
    int bi = -1, bj = -1;
    for (std::size_t i = 0; i < m.item_ids.size(); ++i) {
        for (std::size_t j = i + 1; j < m.item_ids.size(); ++j) {
            if (!m.is_defined(i, j)) continue;
            if (std::abs(mat[i][j]) > best) {
                best = std::abs(mat[i][j]);
                bi = static_cast<int>(i);
                bj = static_cast<int>(j);
            }
        }
    }
    if (bi < 0) return "";
    std::ostringstream os;
    os << "; redundancy suspects: (" << m.item_ids[bi] << ", " << m.item_ids[bj] << "), |"
       << (in.prefer_spearman ? "spearman" : "pearson") << "|=" << mat[bi][bj];
    return os.str();
}

}  // namespace detail

inline GateDecision evaluate_gate(const ConstructGateInputs& in, const GateConfig& cfg) {
    if (!in.construct) throw std::invalid_argument("evaluate_gate: missing construct");
    const ConstructSpec& c = *in.construct;

    GateDecision d;
    d.construct_id = c.construct_id;

    if (in.upstream_blocked) {
        d.status = GateStatus::blocked;
        d.stage = GateStage::content_validity;
        d.reasons.push_back({ReasonCode::upstream_blocked, GateStage::content_validity,
                             "a child construct was blocked upstream; no proxy data to diagnose",
                             {}});
        return d;
    }

    if (c.model == ModelKind::reflective) {
        // Reflective branch: internal consistency only. Churchill-style
        // purification is out of scope here; this tool's depth is on
        // the formative branch.
        d.stage = GateStage::reliability;
        if (!in.alpha.has_value()) {
            if (c.indicator_ids().size() < 2) return d;  // single indicator: alpha undefined
            throw std::invalid_argument("evaluate_gate: reflective construct '" + c.construct_id +
                                        "' has no alpha result");
        }
        if (in.alpha->alpha < cfg.alpha_floor) {
            std::ostringstream os;
            os << "Cronbach's alpha " << in.alpha->alpha << " is below the floor " << cfg.alpha_floor;
            d.reasons.push_back({ReasonCode::alpha_low, GateStage::reliability, os.str(), {}});
            d.status = GateStatus::revise;
        }
        return d;
    }

    // Formative branch.
    bool blocked = false;

    // Stage 1: content validity.
    if (!in.cvr.empty()) {
        std::vector<std::string> failed;
        for (const auto& r : in.cvr)
            if (!r.passed) failed.push_back(r.item_id);
        if (failed.size() == in.cvr.size()) {
            blocked = true;
            d.reasons.push_back({ReasonCode::content_all_failed, GateStage::content_validity,
                                 "every item failed the content-validity gate; the construct has "
                                 "no content-valid indicators",
                                 failed});
        } else if (!failed.empty()) {
            d.reasons.push_back({ReasonCode::cvr_failed, GateStage::content_validity,
                                 "items below the CVR critical value: " + detail::join_ids(failed),
                                 failed});
        }
    }

    // Stage 2: descriptives.
    {
        std::vector<std::string> flat, low, high;
        for (const auto& desc : in.descriptives) {
            if (desc.zero_variance) flat.push_back(desc.item_id);
            if (desc.floor_share > cfg.extreme_share_max) low.push_back(desc.item_id);
            if (desc.ceiling_share > cfg.extreme_share_max) high.push_back(desc.item_id);
        }
        if (!flat.empty())
            d.reasons.push_back({ReasonCode::zero_variance, GateStage::descriptives,
                                 "zero-variance items: " + detail::join_ids(flat), flat});
        if (!low.empty())
            d.reasons.push_back({ReasonCode::floor_extreme, GateStage::descriptives,
                                 "floor share above " + std::to_string(cfg.extreme_share_max) +
                                     " for: " + detail::join_ids(low),
                                 low});
        if (!high.empty())
            d.reasons.push_back({ReasonCode::ceiling_extreme, GateStage::descriptives,
                                 "ceiling share above " + std::to_string(cfg.extreme_share_max) +
                                     " for: " + detail::join_ids(high),
                                 high});
    }

    // Stage 3: collinearity.
    {
        std::vector<std::string> exact, excess;
        for (const auto& r : in.collinearity) {
            if (r.status == VifStatus::exact_dependence) exact.push_back(r.item_id);
            else if (r.status == VifStatus::ok && r.vif > cfg.vif_max) excess.push_back(r.item_id);
        }
        const std::string suspects = detail::top_pair_note(in);
        if (!exact.empty())
            d.reasons.push_back({ReasonCode::collinear_exact, GateStage::collinearity,
                                 "exact linear dependence for: " + detail::join_ids(exact) + suspects,
                                 exact});
        if (!excess.empty())
            d.reasons.push_back({ReasonCode::collinear_excess, GateStage::collinearity,
                                 "VIF above " + std::to_string(cfg.vif_max) + " for: " +
                                     detail::join_ids(excess) + suspects,
                                 excess});
    }

    if (blocked) d.status = GateStatus::blocked;
    else if (!d.reasons.empty()) d.status = GateStatus::revise;
    else d.status = GateStatus::pass;
    d.stage = d.reasons.empty() ? GateStage::collinearity : d.reasons.front().stage;
    return d;
}

inline std::vector<GateDecision> evaluate_gates(const std::vector<ConstructGateInputs>& inputs,
                                                const GateConfig& cfg) {
    std::vector<GateDecision> out;
    out.reserve(inputs.size());
    for (const auto& in : inputs) out.push_back(evaluate_gate(in, cfg));
    return out;
}

// --- iteration hygiene ------------------------------------------------------

struct IterationRecord {
    std::string iteration_id;
    std::set<std::string> respondent_ids;
    std::string spec_hash;
    std::string report_path;
};

// Pilot rounds need fresh respondents; every id shared with any prior
// iteration earns exactly one warning, naming where it already
// appeared. A reused iteration id is an error.
inline std::vector<std::string> check_iteration_overlap(const IterationRecord& current,
                                                        const std::vector<IterationRecord>& history) {
    std::set<std::string> seen_iterations;
    for (const auto& rec : history) {
        if (!seen_iterations.insert(rec.iteration_id).second)
            throw Error("duplicate iteration_id in history: '" + rec.iteration_id + "'");
        if (rec.iteration_id == current.iteration_id)
            throw Error("iteration_id '" + current.iteration_id + "' was already used");
    }

    std::map<std::string, std::vector<std::string>> shared;  // respondent -> prior iterations
    for (const auto& rec : history)
        for (const auto& rid : current.respondent_ids)
            if (rec.respondent_ids.count(rid)) shared[rid].push_back(rec.iteration_id);

    std::vector<std::string> warnings;
    for (const auto& rid : current.respondent_ids) {
        auto it = shared.find(rid);
        if (it == shared.end()) continue;
        warnings.push_back("respondent '" + rid + "' already participated in iteration(s): " +
                           detail::join_ids(it->second));
    }
    return warnings;
}

}  // namespace formav
