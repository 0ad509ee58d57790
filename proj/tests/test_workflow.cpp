#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "formav/pipeline.hpp"
#include "formav/report.hpp"
#include "formav/workflow.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace formav;

namespace {

CvrResult cvr_row(const std::string& id, bool passed) {
    CvrResult r;
    r.item_id = id;
    r.n_raters = 8;
    r.n_essential = passed ? 8 : 4;
    r.cvr = passed ? 1.0 : 0.0;
    r.critical_value = 0.75;
    r.passed = passed;
    return r;
}

ItemDescriptives desc_row(const std::string& id, bool flat = false, double ceiling = 0.0) {
    ItemDescriptives d;
    d.item_id = id;
    d.n = 20;
    d.mean = 3.0;
    d.median = 3.0;
    d.sd = flat ? 0.0 : 1.0;
    d.iqr = flat ? 0.0 : 2.0;
    d.min = flat ? 3.0 : 1.0;
    d.max = flat ? 3.0 : 5.0;
    d.ceiling_share = ceiling;
    d.zero_variance = flat;
    return d;
}

CollinearityResult vif_row(const std::string& id, double vif, bool exact = false) {
    CollinearityResult r;
    r.construct_id = "c1";
    r.item_id = id;
    r.status = exact ? VifStatus::exact_dependence : VifStatus::ok;
    r.vif = vif;
    r.r_squared = exact ? 1.0 : 1.0 - 1.0 / vif;
    r.n_used = 20;
    r.reliable = true;
    return r;
}

struct GateFixture {
    ConstructSpec construct;
    ConstructGateInputs inputs;
    GateConfig config;

    explicit GateFixture(ModelKind model = ModelKind::formative) {
        construct = testutil::construct(
            "c1", {testutil::item("q1"), testutil::item("q2"), testutil::item("q3")}, model);
        inputs.construct = &construct;
        for (const char* id : {"q1", "q2", "q3"}) {
            inputs.cvr.push_back(cvr_row(id, true));
            inputs.descriptives.push_back(desc_row(id));
            inputs.collinearity.push_back(vif_row(id, 1.5));
        }
        if (model == ModelKind::reflective) {
            inputs.cvr.clear();
            inputs.collinearity.clear();
            AlphaResult a;
            a.construct_id = "c1";
            a.alpha = 0.85;
            inputs.alpha = a;
        }
    }
};

}  // namespace

TEST_CASE("all checks clean: PASS", "[gates]") {
    GateFixture f;
    const GateDecision d = evaluate_gate(f.inputs, f.config);
    CHECK(d.status == GateStatus::pass);
    CHECK(d.reasons.empty());
    CHECK(d.stage == GateStage::collinearity);
}

TEST_CASE("exact dependence: REVISE with COLLINEAR_EXACT", "[gates]") {
    GateFixture f;
    f.inputs.collinearity[1] = vif_row("q2", 0.0, true);
    const GateDecision d = evaluate_gate(f.inputs, f.config);
    CHECK(d.status == GateStatus::revise);
    REQUIRE(d.reasons.size() == 1);
    CHECK(d.reasons[0].code == ReasonCode::collinear_exact);
    CHECK(std::string(reason_code_name(d.reasons[0].code)) == "COLLINEAR_EXACT");
    CHECK(d.reasons[0].item_ids == std::vector<std::string>{"q2"});
    CHECK(d.stage == GateStage::collinearity);
}

TEST_CASE("every item failing CVR: BLOCKED", "[gates]") {
    GateFixture f;
    for (auto& r : f.inputs.cvr) r = cvr_row(r.item_id, false);
    const GateDecision d = evaluate_gate(f.inputs, f.config);
    CHECK(d.status == GateStatus::blocked);
    REQUIRE_FALSE(d.reasons.empty());
    CHECK(d.reasons[0].code == ReasonCode::content_all_failed);
    CHECK(d.stage == GateStage::content_validity);
}

TEST_CASE("partial CVR failure: REVISE naming the items", "[gates]") {
    GateFixture f;
    f.inputs.cvr[2] = cvr_row("q3", false);
    const GateDecision d = evaluate_gate(f.inputs, f.config);
    CHECK(d.status == GateStatus::revise);
    REQUIRE(d.reasons.size() == 1);
    CHECK(d.reasons[0].code == ReasonCode::cvr_failed);
    CHECK(d.reasons[0].item_ids == std::vector<std::string>{"q3"});
}

TEST_CASE("descriptive failures: zero variance and extreme ceiling", "[gates]") {
    GateFixture f;
    f.inputs.descriptives[0] = desc_row("q1", true);
    f.inputs.descriptives[1] = desc_row("q2", false, 0.9);
    const GateDecision d = evaluate_gate(f.inputs, f.config);
    CHECK(d.status == GateStatus::revise);
    REQUIRE(d.reasons.size() == 2);
    CHECK(d.reasons[0].code == ReasonCode::zero_variance);
    CHECK(d.reasons[1].code == ReasonCode::ceiling_extreme);
    CHECK(d.stage == GateStage::descriptives);
}

TEST_CASE("VIF above the ceiling names redundancy suspects when correlations are present",
          "[gates]") {
    GateFixture f;
    f.inputs.collinearity[0] = vif_row("q1", 8.0);
    CorrelationMatrix m;
    m.item_ids = {"q1", "q2", "q3"};
    m.pearson = {{1.0, 0.95, 0.2}, {0.95, 1.0, 0.3}, {0.2, 0.3, 1.0}};
    m.spearman = m.pearson;
    f.inputs.correlations = &m;
    const GateDecision d = evaluate_gate(f.inputs, f.config);
    CHECK(d.status == GateStatus::revise);
    REQUIRE(d.reasons.size() == 1);
    CHECK(d.reasons[0].code == ReasonCode::collinear_excess);
    CHECK_THAT(d.reasons[0].message, Catch::Matchers::ContainsSubstring("(q1, q2)"));
}

TEST_CASE("reflective branch: alpha gates, VIF never appears", "[gates]") {
    GateFixture f(ModelKind::reflective);
    SECTION("healthy alpha passes") {
        const GateDecision d = evaluate_gate(f.inputs, f.config);
        CHECK(d.status == GateStatus::pass);
        CHECK(d.stage == GateStage::reliability);
    }
    SECTION("low alpha revises") {
        f.inputs.alpha->alpha = 0.42;
        const GateDecision d = evaluate_gate(f.inputs, f.config);
        CHECK(d.status == GateStatus::revise);
        REQUIRE(d.reasons.size() == 1);
        CHECK(d.reasons[0].code == ReasonCode::alpha_low);
        CHECK(d.reasons[0].stage == GateStage::reliability);
    }
    SECTION("even with failing formative-style inputs attached, codes stay on the alpha path") {
        f.inputs.cvr.push_back(cvr_row("q1", false));
        f.inputs.collinearity.push_back(vif_row("q1", 50.0));
        f.inputs.descriptives.push_back(desc_row("q1", true));
        f.inputs.alpha->alpha = 0.2;
        const GateDecision d = evaluate_gate(f.inputs, f.config);
        for (const auto& r : d.reasons) CHECK(r.code == ReasonCode::alpha_low);
    }
}

TEST_CASE("formative branch never uses alpha", "[gates]") {
    GateFixture f;
    AlphaResult a;
    a.construct_id = "c1";
    a.alpha = 0.05;  // terrible alpha on a formative construct is fine
    f.inputs.alpha = a;
    const GateDecision d = evaluate_gate(f.inputs, f.config);
    CHECK(d.status == GateStatus::pass);
}

TEST_CASE("adding a failure never upgrades the status", "[gates][property]") {
    oracle::Rng rng(55);
    for (int rep = 0; rep < 200; ++rep) {
        GateFixture f;
        // Random baseline.
        for (auto& r : f.inputs.cvr)
            if (rng.uniform() < 0.3) r = cvr_row(r.item_id, false);
        for (auto& dsc : f.inputs.descriptives)
            if (rng.uniform() < 0.2) dsc = desc_row(dsc.item_id, true);
        for (auto& v : f.inputs.collinearity)
            if (rng.uniform() < 0.2) v = vif_row(v.item_id, 9.0);
        const GateDecision before = evaluate_gate(f.inputs, f.config);

        // One extra failure somewhere.
        const int what = rng.uniform_int(0, 2);
        if (what == 0) {
            for (auto& r : f.inputs.cvr)
                if (r.passed) {
                    r = cvr_row(r.item_id, false);
                    break;
                }
        } else if (what == 1) {
            f.inputs.descriptives[static_cast<std::size_t>(rng.uniform_int(0, 2))] =
                desc_row("qx", true);
        } else {
            f.inputs.collinearity[static_cast<std::size_t>(rng.uniform_int(0, 2))] =
                vif_row("qx", 25.0, rng.uniform() < 0.5);
        }
        const GateDecision after = evaluate_gate(f.inputs, f.config);
        CHECK(static_cast<int>(after.status) <= static_cast<int>(before.status));
    }
}

TEST_CASE("iteration overlap warnings", "[iteration]") {
    IterationRecord it1{"round1", {"a", "b", "c"}, "h1", ""};
    IterationRecord it2{"round2", {"c", "d", "b"}, "h1", ""};
    SECTION("disjoint sets are silent") {
        IterationRecord fresh{"round3", {"x", "y"}, "h1", ""};
        CHECK(check_iteration_overlap(fresh, {it1, it2}).empty());
    }
    SECTION("one warning per shared id") {
        IterationRecord overlapping{"round3", {"b", "c", "z"}, "h1", ""};
        const auto warnings = check_iteration_overlap(overlapping, {it1, it2});
        REQUIRE(warnings.size() == 2);
        CHECK_THAT(warnings[0], Catch::Matchers::ContainsSubstring("'b'"));
        CHECK_THAT(warnings[1], Catch::Matchers::ContainsSubstring("'c'"));
    }
    SECTION("reused iteration id is an error") {
        IterationRecord reused{"round1", {"z"}, "h1", ""};
        CHECK_THROWS_AS(check_iteration_overlap(reused, {it1, it2}), Error);
    }
}

namespace {

// A small but complete project exercised fully in memory.
PilotLoadResult fixture_pilot(const MeasurementSpec& spec) {
    PilotLoadResult res;
    res.dataset.iteration_id = "round1";
    res.dataset.provenance = {"fixture.csv", "not-a-real-time"};
    res.dataset.items = {"q1", "q2", "q3", "q4", "q5", "r1", "r2", "r3"};
    oracle::Rng rng(314);
    for (int r = 0; r < 20; ++r) {
        res.dataset.respondent_ids.push_back("p" + std::to_string(r + 1));
        std::vector<double> row;
        for (int j = 0; j < 5; ++j) row.push_back(rng.uniform_int(1, 5));
        const int base = rng.uniform_int(1, 4);
        for (int j = 0; j < 3; ++j)
            row.push_back(std::clamp(base + rng.uniform_int(0, 1), 1, 5));
        res.dataset.values.push_back(std::move(row));
    }
    (void)spec;
    return res;
}

MeasurementSpec fixture_spec() {
    MeasurementSpec spec;
    std::vector<ItemSpec> f_items;
    for (int i = 1; i <= 5; ++i)
        f_items.push_back(testutil::item("q" + std::to_string(i), 1, 5,
                                         "Source " + std::to_string(i)));
    spec.constructs.push_back(testutil::construct("readiness", f_items, ModelKind::formative,
                                                  WeightSource::cvr));
    std::vector<ItemSpec> r_items;
    for (int i = 1; i <= 3; ++i)
        r_items.push_back(testutil::item("r" + std::to_string(i), 1, 5,
                                         "Scale " + std::to_string(i)));
    spec.constructs.push_back(testutil::construct("satisfaction", r_items, ModelKind::reflective,
                                                  WeightSource::manual));
    return spec;
}

}  // namespace

TEST_CASE("pipeline produces byte-identical structured reports on identical inputs",
          "[report][pipeline]") {
    const MeasurementSpec spec = fixture_spec();
    const PilotLoadResult pilot = fixture_pilot(spec);
    const SmeRatingSet sme =
        testutil::sme_from_counts({"q1", "q2", "q3", "q4", "q5"}, {8, 8, 7, 8, 7}, 8);
    Config cfg;

    const RunResult run1 = run_pipeline(spec, pilot, sme, cfg);
    const RunResult run2 = run_pipeline(spec, pilot, sme, cfg);
    const std::string a = generate_structured_report(run1);
    const std::string b = generate_structured_report(run2);
    CHECK(a == b);
    CHECK(generate_human_report(run1) == generate_human_report(run2));
    CHECK_THAT(a, Catch::Matchers::ContainsSubstring("\"report_version\""));
}

TEST_CASE("a clean run's report carries no REVISE codes", "[report][pipeline]") {
    const MeasurementSpec spec = fixture_spec();
    const PilotLoadResult pilot = fixture_pilot(spec);
    const SmeRatingSet sme =
        testutil::sme_from_counts({"q1", "q2", "q3", "q4", "q5"}, {8, 8, 8, 8, 8}, 8);
    Config cfg;
    const RunResult run = run_pipeline(spec, pilot, sme, cfg);
    bool all_pass = true;
    for (const auto& g : run.gates) all_pass &= (g.status == GateStatus::pass);
    if (all_pass) {
        const std::string text = generate_structured_report(run);
        CHECK_THAT(text, !Catch::Matchers::ContainsSubstring("REVISE"));
        CHECK_THAT(text, !Catch::Matchers::ContainsSubstring("BLOCKED"));
    } else {
        // Fixture data may legitimately trip a gate; the consistency
        // claim is conditional and the pass case is checked above.
        SUCCEED("fixture tripped a gate; consistency check not applicable");
    }
}

TEST_CASE("pipeline surfaces iteration overlap through the report", "[report][pipeline]") {
    const MeasurementSpec spec = fixture_spec();
    const PilotLoadResult pilot = fixture_pilot(spec);
    const SmeRatingSet sme =
        testutil::sme_from_counts({"q1", "q2", "q3", "q4", "q5"}, {8, 8, 7, 8, 7}, 8);
    Config cfg;
    IterationRecord prior{"round0", {"p3", "p7"}, "h", ""};
    const RunResult run = run_pipeline(spec, pilot, sme, cfg, {prior});
    REQUIRE(run.iteration_warnings.size() == 2);
    CHECK_THAT(generate_structured_report(run),
               Catch::Matchers::ContainsSubstring("already participated"));
}

TEST_CASE("higher-order pipeline: proxy dataset feeds the parent construct",
          "[pipeline][composites]") {
    MeasurementSpec spec = fixture_spec();
    spec.constructs[1].model = ModelKind::formative;  // keep both children formative
    ConstructSpec top;
    top.construct_id = "capability";
    top.name = "Overall capability";
    top.model = ModelKind::formative;
    top.weight_source = WeightSource::manual;
    top.children = {"readiness", "satisfaction"};
    top.manual_weights = {2.0, 1.0};
    spec.constructs.push_back(top);
    spec.constructs[0].parent = "capability";
    spec.constructs[1].parent = "capability";

    const PilotLoadResult pilot = fixture_pilot(spec);
    const SmeRatingSet sme =
        testutil::sme_from_counts({"q1", "q2", "q3", "q4", "q5"}, {8, 8, 7, 8, 7}, 8);
    Config cfg;
    const RunResult run = run_pipeline(spec, pilot, sme, cfg);

    const ConstructRun* parent = run.find("capability");
    REQUIRE(parent != nullptr);
    REQUIRE(parent->composites.has_value());
    CHECK(parent->composites->respondent_ids.size() == 20);
    CHECK(parent->descriptives.size() == 2);  // children as indicator columns
    REQUIRE(parent->weights.has_value());
    CHECK(parent->weights->weights == std::vector<double>{2.0 / 3.0, 1.0 / 3.0});

    // Parent scores are the weighted mean of child composites.
    const ConstructRun* a = run.find("readiness");
    const ConstructRun* b = run.find("satisfaction");
    REQUIRE((a && a->composites && b && b->composites));
    for (std::size_t r = 0; r < 20; ++r) {
        const double expect =
            (2.0 / 3.0) * a->composites->scores[r] + (1.0 / 3.0) * b->composites->scores[r];
        CHECK(parent->composites->scores[r] == Catch::Approx(expect).margin(1e-12));
    }
}
