#pragma once
// End-to-end run: ingest -> content validity -> weights -> diagnostics
// -> composites -> recurse over higher-order constructs -> gates.
// Produces one RunResult that the report module renders; everything in
// it is a pure function of (spec, data files, config), so two runs on
// the same inputs are identical.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "formav/composites.hpp"
#include "formav/config.hpp"
#include "formav/content_validity.hpp"
#include "formav/diagnostics.hpp"
#include "formav/ingest.hpp"
#include "formav/spec_io.hpp"
#include "formav/spec_model.hpp"
#include "formav/synthgen.hpp"
#include "formav/workflow.hpp"

namespace formav {

struct ConstructRun {
    std::string construct_id;
    ModelKind model = ModelKind::formative;
    WeightSource weight_source = WeightSource::manual;
    std::vector<std::string> indicators;

    std::vector<CvrResult> cvr;                // indicators with CVR rows, spec order
    std::vector<MeanRating> mean_ratings;      // researcher-rating source only
    std::optional<WeightVector> weights;       // absent when nothing survived the gate
    std::vector<ItemDescriptives> descriptives;
    std::optional<CorrelationMatrix> correlations;  // >= 2 indicators
    std::vector<CollinearityResult> collinearity;   // >= 2 indicators
    std::optional<AlphaResult> alpha;
    std::optional<CompositeScores> composites;
    bool prefer_spearman = false;
    bool upstream_blocked = false;
    std::vector<std::string> notes;
};

struct RunResult {
    MeasurementSpec spec;
    Config config;
    std::string iteration_id;
    std::string spec_hash;
    std::string pilot_path;
    std::string sme_path;  // empty when no SME file was given

    std::vector<SpecFinding> spec_findings;
    std::vector<MissingCell> missing_cells;
    std::vector<std::string> dropped_respondents;
    std::size_t n_loaded_respondents = 0;
    std::vector<std::string> respondent_ids;  // after the missing-data policy

    std::vector<OutlierFlag> outliers;  // over the full post-policy dataset
    std::vector<ConstructRun> constructs;  // spec declaration order
    std::vector<GateDecision> gates;       // spec declaration order
    std::vector<std::string> iteration_warnings;

    const ConstructRun* find(const std::string& id) const {
        for (const auto& c : constructs)
            if (c.construct_id == id) return &c;
        return nullptr;
    }
};

namespace detail {

inline PilotDataset subset_items(const PilotDataset& ds, const std::vector<std::string>& ids) {
    PilotDataset out;
    out.iteration_id = ds.iteration_id;
    out.provenance = ds.provenance;
    out.respondent_ids = ds.respondent_ids;
    std::vector<std::size_t> idx;
    idx.reserve(ids.size());
    for (const auto& id : ids) idx.push_back(ds.item_index(id));
    out.items = ids;
    out.values.assign(ds.n_respondents(), {});
    for (std::size_t r = 0; r < ds.n_respondents(); ++r) {
        out.values[r].reserve(idx.size());
        for (std::size_t j : idx) out.values[r].push_back(ds.values[r][j]);
    }
    return out;
}

// Restrict a weight vector to surviving indicators and renormalize.
inline std::optional<WeightVector> filter_to_survivors(const WeightVector& w,
                                                       const std::set<std::string>& survivors) {
    WeightVector out;
    out.construct_id = w.construct_id;
    out.source = w.source;
    std::vector<double> raw;
    for (std::size_t i = 0; i < w.item_ids.size(); ++i) {
        if (survivors.count(w.item_ids[i])) {
            out.item_ids.push_back(w.item_ids[i]);
            raw.push_back(w.weights[i]);
        }
    }
    if (out.item_ids.empty()) return std::nullopt;
    double sum = 0.0;
    for (double v : raw) sum += v;
    if (sum <= 0.0) return std::nullopt;
    out.weights.reserve(raw.size());
    for (double v : raw) out.weights.push_back(v / sum);
    return out;
}

// Construct processing order: children strictly before parents.
inline std::vector<const ConstructSpec*> topological_order(const MeasurementSpec& spec) {
    std::map<std::string, int> depth;
    bool changed = true;
    int guard = 0;
    while (changed && guard++ <= static_cast<int>(spec.constructs.size()) + 1) {
        changed = false;
        for (const auto& c : spec.constructs) {
            int d = 0;
            for (const auto& child : c.children) {
                auto it = depth.find(child);
                d = std::max(d, (it == depth.end() ? 0 : it->second) + 1);
            }
            if (!depth.count(c.construct_id) || depth[c.construct_id] != d) {
                depth[c.construct_id] = d;
                changed = true;
            }
        }
    }
    std::vector<const ConstructSpec*> order;
    for (const auto& c : spec.constructs) order.push_back(&c);
    std::stable_sort(order.begin(), order.end(),
                     [&](const ConstructSpec* a, const ConstructSpec* b) {
                         return depth[a->construct_id] < depth[b->construct_id];
                     });
    return order;
}

inline bool prefers_spearman(const MeasurementSpec& spec, const ConstructSpec& c) {
    // Rank correlation names redundancy suspects when every leaf scale
    // has at most 7 points; Pearson leans on continuity the short
    // scales do not have.
    for (const ItemSpec* it : spec.leaf_items_of(c))
        if (it->scale_max - it->scale_min + 1 > 7) return false;
    return true;
}

}  // namespace detail

// Runs everything downstream of ingestion. `pilot` is the raw loaded
// dataset (missing cells still present); `sme` may be absent when all
// constructs use manual weights.
inline RunResult run_pipeline(const MeasurementSpec& spec, const PilotLoadResult& pilot,
                              const std::optional<SmeRatingSet>& sme, const Config& config,
                              const std::vector<IterationRecord>& history = {}) {
    RunResult run;
    run.spec = spec;
    run.config = config;
    run.iteration_id = pilot.dataset.iteration_id;
    run.spec_hash = spec_content_hash(spec);
    run.pilot_path = pilot.dataset.provenance.source_path;
    if (sme) run.sme_path = sme->provenance.source_path;

    run.spec_findings = validate_spec(spec, config.item_floor);
    if (has_errors(run.spec_findings))
        throw Error("spec has validation errors; run `spec validate` for the list");
    for (const auto& f : pilot.findings) run.spec_findings.push_back(f);
    run.missing_cells = pilot.missing;
    run.n_loaded_respondents = pilot.dataset.n_respondents();

    const MissingPolicyResult policy = apply_missing_policy(pilot.dataset, config.missing_policy);
    run.dropped_respondents = policy.dropped_respondents;
    run.respondent_ids = policy.dataset.respondent_ids;
    const PilotDataset& data = policy.dataset;
    if (data.n_respondents() < 3)
        throw Error("fewer than 3 complete respondents after the missing-data policy; "
                    "diagnostics need more data");

    run.outliers =
        detect_outlier_respondents(data, config.outlier_fence, config.outlier_fraction);

    // Content validity over everything the SME file covers.
    std::vector<CvrResult> all_cvr;
    std::vector<MeanRating> all_means;
    bool panel_too_small = false;
    if (sme) {
        if (sme->mode == SmeMode::cvr3) {
            const std::map<int, double>* override_table =
                config.cvr_critical_override.empty() ? nullptr : &config.cvr_critical_override;
            all_cvr = compute_cvr(*sme, config.cvr_alpha, override_table);
            panel_too_small = !all_cvr.empty() && !all_cvr.front().critical_attainable;
        } else {
            all_means = researcher_rating_weights(*sme);
        }
    }

    std::map<std::string, ConstructRun> runs;
    std::map<std::string, std::optional<CompositeScores>> composites_by_id;

    for (const ConstructSpec* cp : detail::topological_order(spec)) {
        const ConstructSpec& c = *cp;
        ConstructRun cr;
        cr.construct_id = c.construct_id;
        cr.model = c.model;
        cr.weight_source = c.weight_source;
        cr.indicators = c.indicator_ids();
        cr.prefer_spearman = detail::prefers_spearman(spec, c);

        if (panel_too_small)
            cr.notes.push_back("SME panel too small for CVR significance at alpha=" +
                               std::to_string(config.cvr_alpha) +
                               "; no item can clear the critical value");

        // Data for this construct: pilot columns for first-order
        // constructs, child composites for higher-order ones.
        PilotDataset cds;
        bool have_data = true;
        if (c.is_higher_order()) {
            std::vector<CompositeScores> child_scores;
            for (const auto& child_id : c.children) {
                const auto it = composites_by_id.find(child_id);
                if (it == composites_by_id.end() || !it->second.has_value()) {
                    cr.upstream_blocked = true;
                    break;
                }
                child_scores.push_back(*it->second);
            }
            if (cr.upstream_blocked) {
                have_data = false;
                cr.notes.push_back("child composites unavailable; construct cannot be diagnosed");
            } else {
                cds = build_higher_order_dataset(child_scores, c);
            }
        } else {
            for (const auto& id : cr.indicators)
                if (!data.has_item(id))
                    throw Error("item '" + id + "' of construct '" + c.construct_id +
                                "' was never administered; cannot diagnose the construct");
            cds = detail::subset_items(data, cr.indicators);
        }

        // CVR rows / mean ratings covering this construct's indicators.
        for (const auto& id : cr.indicators) {
            for (const auto& r : all_cvr)
                if (r.item_id == id) cr.cvr.push_back(r);
            for (const auto& m : all_means)
                if (m.item_id == id) cr.mean_ratings.push_back(m);
        }
        if (c.weight_source == WeightSource::cvr && cr.cvr.size() != cr.indicators.size() &&
            !cr.cvr.empty())
            throw Error("construct '" + c.construct_id +
                        "' uses CVR weights but the SME file does not cover all its indicators");

        // Theoretical weights.
        if (c.weight_source == WeightSource::cvr) {
            if (cr.cvr.empty())
                throw Error("construct '" + c.construct_id +
                            "' uses CVR weights but no categorical SME ratings were provided");
            try {
                cr.weights = derive_weights(c, &cr.cvr, nullptr);
                if (cr.weights->item_ids.size() < cr.indicators.size())
                    cr.notes.push_back(
                        "items failing the content-validity gate were excluded and the "
                        "remaining CVR weights renormalized");
            } catch (const Error&) {
                cr.notes.push_back("no indicator passed the content-validity gate");
            }
        } else if (c.weight_source == WeightSource::researcher_rating) {
            if (cr.mean_ratings.empty())
                throw Error("construct '" + c.construct_id +
                            "' uses researcher-rating weights but no scale5 SME file was provided");
            cr.weights = derive_weights(c, nullptr, &cr.mean_ratings);
            cr.notes.push_back("weights from researcher ratings; weaker than an SME CVR panel");
        } else {
            cr.weights = derive_weights(c, nullptr, nullptr);
            // Content-validity failures still bite: composites use
            // surviving items only.
            if (!cr.cvr.empty()) {
                std::set<std::string> survivors;
                for (const auto& r : cr.cvr)
                    if (r.passed) survivors.insert(r.item_id);
                if (survivors.size() < cr.indicators.size()) {
                    cr.weights = detail::filter_to_survivors(*cr.weights, survivors);
                    if (cr.weights)
                        cr.notes.push_back(
                            "items failing the content-validity gate were excluded and the "
                            "remaining manual weights renormalized");
                    else
                        cr.notes.push_back("no indicator passed the content-validity gate");
                }
            }
        }

        // Diagnostics.
        if (have_data) {
            cr.descriptives = item_descriptives(cds, spec);
            if (cr.indicators.size() >= 2) {
                cr.correlations = correlation_matrix(cds, cr.indicators);
                cr.collinearity =
                    compute_vif(cds, c, config.sample_ratio_floor);
                if (!cr.collinearity.empty() && !cr.collinearity.front().reliable) {
                    const SampleSizeCheck ssc = sample_size_adequacy(
                        static_cast<int>(cds.n_respondents()),
                        static_cast<int>(cr.indicators.size()) - 1, config.sample_ratio_floor);
                    if (!ssc.warning.empty()) cr.notes.push_back(ssc.warning);
                }
                try {
                    cr.alpha = cronbach_alpha(cds, c);
                } catch (const Error& e) {
                    if (c.model == ModelKind::reflective)
                        throw Error("reflective construct '" + c.construct_id +
                                    "' cannot be gated: " + e.what());
                    cr.notes.push_back(std::string("alpha unavailable: ") + e.what());
                }
            } else {
                cr.notes.push_back("single-indicator construct: correlation, VIF and alpha do not apply");
            }
        }

        // Composite proxy scores for this construct.
        if (have_data && cr.weights) {
            cr.composites = composite_scores(cds, c, *cr.weights, config.composite_method);
            composites_by_id[c.construct_id] = cr.composites;
        } else {
            composites_by_id[c.construct_id] = std::nullopt;
        }

        runs.emplace(c.construct_id, std::move(cr));
    }

    // Report in declaration order.
    for (const auto& c : spec.constructs) run.constructs.push_back(std::move(runs.at(c.construct_id)));

    // Gates.
    std::vector<ConstructGateInputs> gate_inputs;
    for (const auto& cr : run.constructs) {
        ConstructGateInputs gi;
        gi.construct = spec.find_construct(cr.construct_id);
        gi.cvr = cr.cvr;
        gi.descriptives = cr.descriptives;
        gi.collinearity = cr.collinearity;
        gi.correlations = cr.correlations ? &*cr.correlations : nullptr;
        gi.prefer_spearman = cr.prefer_spearman;
        gi.alpha = cr.alpha;
        gi.upstream_blocked = cr.upstream_blocked;
        gate_inputs.push_back(gi);
    }
    run.gates = evaluate_gates(gate_inputs, config.gate_config());

    // Iteration hygiene.
    IterationRecord current;
    current.iteration_id = run.iteration_id;
    current.spec_hash = run.spec_hash;
    for (const auto& rid : pilot.dataset.respondent_ids) current.respondent_ids.insert(rid);
    run.iteration_warnings = check_iteration_overlap(current, history);

    return run;
}

}  // namespace formav
