// formav: formative-construct pilot validation from the command line.
//
// Subcommands mirror the pipeline stages: `spec validate` and
// `classify` before any data exists, `cvr` once SME ratings are in,
// `diagnose` / `composite` / `gate` on pilot data, `report` for the
// full run with persisted iteration history, `simulate` for seeded
// synthetic pilot data.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "formav/formav.hpp"

namespace fs = std::filesystem;
using namespace formav;

namespace {

Config load_config_or_default(const std::string& path) {
    if (path.empty()) return Config{};
    return load_config_file(path);
}

std::optional<SmeRatingSet> maybe_load_sme(const std::string& path, const MeasurementSpec& spec) {
    if (path.empty()) return std::nullopt;
    return load_sme_ratings(path, spec);
}

// History directory: one JSON record per prior iteration.
std::vector<IterationRecord> load_history(const fs::path& dir) {
    std::vector<IterationRecord> out;
    if (!fs::exists(dir)) return out;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        std::ifstream in(p, std::ios::binary);
        nlohmann::json j = nlohmann::json::parse(in);
        IterationRecord rec;
        rec.iteration_id = j.at("iteration_id").get<std::string>();
        for (const auto& rid : j.at("respondent_ids")) rec.respondent_ids.insert(rid.get<std::string>());
        rec.spec_hash = j.value("spec_hash", "");
        rec.report_path = j.value("report_path", "");
        out.push_back(std::move(rec));
    }
    return out;
}

void save_iteration_record(const fs::path& dir, const IterationRecord& rec) {
    fs::create_directories(dir);
    nlohmann::ordered_json j;
    j["iteration_id"] = rec.iteration_id;
    j["respondent_ids"] = std::vector<std::string>(rec.respondent_ids.begin(),
                                                   rec.respondent_ids.end());
    j["spec_hash"] = rec.spec_hash;
    j["report_path"] = rec.report_path;
    std::ofstream out(dir / (rec.iteration_id + ".json"), std::ios::binary);
    out << j.dump(2) << "\n";
}

void print_findings(const std::vector<SpecFinding>& findings) {
    for (const auto& f : findings) {
        std::cout << (f.severity == Severity::error ? "ERROR" : "WARNING") << " [" << f.code
                  << "] " << f.message << "\n";
    }
}

void print_gates(const std::vector<GateDecision>& gates) {
    for (const auto& g : gates) {
        std::cout << g.construct_id << ": " << gate_status_name(g.status) << " (stage "
                  << gate_stage_name(g.stage) << ")\n";
        for (const auto& r : g.reasons)
            std::cout << "  - [" << reason_code_name(r.code) << "] " << r.message << "\n";
    }
}

RunResult run_from_files(const std::string& spec_path, const std::string& data_path,
                         const std::string& sme_path, const Config& config,
                         const std::string& iteration_id,
                         const std::vector<IterationRecord>& history) {
    const MeasurementSpec spec = load_spec_file(spec_path);
    const auto findings = validate_spec(spec, config.item_floor);
    if (has_errors(findings)) {
        print_findings(findings);
        throw Error("spec has validation errors");
    }
    const PilotLoadResult pilot = load_pilot_csv(data_path, spec, iteration_id);
    const std::optional<SmeRatingSet> sme = maybe_load_sme(sme_path, spec);
    return run_pipeline(spec, pilot, sme, config, history);
}

Answer answer_from(const std::string& s, const std::string& what) {
    if (s == "yes") return Answer::yes;
    if (s == "no") return Answer::no;
    if (s == "unsure") return Answer::unsure;
    throw Error(what + " must be yes|no|unsure, got '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Formative measurement validation for survey pilots"};
    app.require_subcommand(1);

    // --- spec validate ---
    auto* spec_cmd = app.add_subcommand("spec", "Spec file operations");
    spec_cmd->require_subcommand(1);
    auto* validate_cmd = spec_cmd->add_subcommand("validate", "Check a spec file's invariants");
    std::string v_spec, v_config;
    validate_cmd->add_option("--spec", v_spec, "Spec JSON file")->required();
    validate_cmd->add_option("--config", v_config, "Config JSON file");

    // --- classify ---
    auto* classify_cmd =
        app.add_subcommand("classify", "Recommend formative vs reflective for a construct");
    std::string c_causality = "ambiguous", c_inter = "unsure", c_cov = "unsure";
    classify_cmd->add_option("--causality", c_causality,
                             "construct_causes_items|items_cause_construct|ambiguous");
    classify_cmd->add_option("--interchangeable", c_inter, "Items interchangeable? yes|no|unsure");
    classify_cmd->add_option("--covariation", c_cov, "Covariation necessary? yes|no|unsure");

    // --- cvr ---
    auto* cvr_cmd = app.add_subcommand("cvr", "Content validity ratios from SME ratings");
    std::string cv_spec, cv_sme, cv_config;
    cvr_cmd->add_option("--spec", cv_spec, "Spec JSON file")->required();
    cvr_cmd->add_option("--sme", cv_sme, "SME ratings CSV")->required();
    cvr_cmd->add_option("--config", cv_config, "Config JSON file");

    // --- diagnose ---
    auto* diag_cmd = app.add_subcommand("diagnose", "Descriptives, outliers, correlations, VIF");
    std::string d_spec, d_data, d_sme, d_config, d_iter = "pilot";
    diag_cmd->add_option("--spec", d_spec, "Spec JSON file")->required();
    diag_cmd->add_option("--data", d_data, "Pilot CSV")->required();
    diag_cmd->add_option("--sme", d_sme, "SME ratings CSV");
    diag_cmd->add_option("--config", d_config, "Config JSON file");
    diag_cmd->add_option("--iteration", d_iter, "Iteration id");

    // --- composite ---
    auto* comp_cmd = app.add_subcommand("composite", "Weighted composite scores per construct");
    std::string k_spec, k_data, k_sme, k_config, k_iter = "pilot", k_method, k_out;
    comp_cmd->add_option("--spec", k_spec, "Spec JSON file")->required();
    comp_cmd->add_option("--data", k_data, "Pilot CSV")->required();
    comp_cmd->add_option("--sme", k_sme, "SME ratings CSV");
    comp_cmd->add_option("--config", k_config, "Config JSON file");
    comp_cmd->add_option("--iteration", k_iter, "Iteration id");
    comp_cmd->add_option("--composite-method", k_method, "mean|median (overrides config)");
    comp_cmd->add_option("--out", k_out, "Directory for composite CSV files");

    // --- gate ---
    auto* gate_cmd = app.add_subcommand("gate", "PASS/REVISE/BLOCKED decision per construct");
    std::string g_spec, g_data, g_sme, g_config, g_iter = "pilot";
    gate_cmd->add_option("--spec", g_spec, "Spec JSON file")->required();
    gate_cmd->add_option("--data", g_data, "Pilot CSV")->required();
    gate_cmd->add_option("--sme", g_sme, "SME ratings CSV");
    gate_cmd->add_option("--config", g_config, "Config JSON file");
    gate_cmd->add_option("--iteration", g_iter, "Iteration id");

    // --- report ---
    auto* report_cmd = app.add_subcommand("report", "Full run: structured + human reports");
    std::string r_spec, r_data, r_sme, r_config, r_iter = "round1", r_out = "out";
    report_cmd->add_option("--spec", r_spec, "Spec JSON file")->required();
    report_cmd->add_option("--data", r_data, "Pilot CSV")->required();
    report_cmd->add_option("--sme", r_sme, "SME ratings CSV");
    report_cmd->add_option("--config", r_config, "Config JSON file");
    report_cmd->add_option("--iteration", r_iter, "Iteration id")->required();
    report_cmd->add_option("--out", r_out, "Output directory (reports + iteration history)");

    // --- simulate ---
    auto* sim_cmd = app.add_subcommand("simulate", "Seeded synthetic pilot data for a spec");
    std::string s_spec, s_rho = "0", s_out, s_disc = "round_clamp";
    std::uint64_t s_seed = 1;
    int s_n = 30;
    sim_cmd->add_option("--spec", s_spec, "Spec JSON file")->required();
    sim_cmd->add_option("--seed", s_seed, "RNG seed");
    sim_cmd->add_option("--respondents", s_n, "Number of respondents");
    sim_cmd->add_option("--rho", s_rho, "Scalar exchangeable correlation, or a k x k CSV matrix file");
    sim_cmd->add_option("--discretization", s_disc, "round_clamp|quantile");
    sim_cmd->add_option("--out", s_out, "Output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate_cmd) {
            const Config cfg = load_config_or_default(v_config);
            const MeasurementSpec spec = load_spec_file(v_spec);
            const auto findings = validate_spec(spec, cfg.item_floor);
            print_findings(findings);
            if (findings.empty()) std::cout << "spec is clean\n";
            return has_errors(findings) ? 1 : 0;
        }

        if (*classify_cmd) {
            ClassificationAnswers answers;
            if (c_causality == "construct_causes_items")
                answers.causality = Causality::construct_causes_items;
            else if (c_causality == "items_cause_construct")
                answers.causality = Causality::items_cause_construct;
            else if (c_causality == "ambiguous")
                answers.causality = Causality::ambiguous;
            else
                throw Error("--causality must be construct_causes_items|items_cause_construct|ambiguous");
            answers.items_interchangeable = answer_from(c_inter, "--interchangeable");
            answers.covariation_necessary = answer_from(c_cov, "--covariation");
            switch (classify_construct(answers)) {
                case Recommendation::formative: std::cout << "formative\n"; break;
                case Recommendation::reflective: std::cout << "reflective\n"; break;
                case Recommendation::follow_definition:
                    std::cout << "follow_definition (answers inconclusive; defer to the "
                                 "construct's literature definition)\n";
                    break;
            }
            return 0;
        }

        if (*cvr_cmd) {
            const Config cfg = load_config_or_default(cv_config);
            const MeasurementSpec spec = load_spec_file(cv_spec);
            const SmeRatingSet sme = load_sme_ratings(cv_sme, spec);
            if (sme.mode == SmeMode::cvr3) {
                const std::map<int, double>* override_table =
                    cfg.cvr_critical_override.empty() ? nullptr : &cfg.cvr_critical_override;
                const auto res = compute_cvr(sme, cfg.cvr_alpha, override_table);
                std::cout << "item,n_essential,n_raters,cvr,critical,passed\n";
                for (const auto& r : res)
                    std::cout << r.item_id << "," << r.n_essential << "," << r.n_raters << ","
                              << r.cvr << "," << r.critical_value << ","
                              << (r.passed ? "yes" : "no") << "\n";
                if (!res.empty() && !res.front().critical_attainable)
                    std::cerr << "warning: panel too small for significance at alpha="
                              << cfg.cvr_alpha << "\n";
            } else {
                const auto means = researcher_rating_weights(sme);
                std::cout << "item,mean_rating\n";
                for (const auto& m : means)
                    std::cout << m.item_id << "," << m.mean_rating << "\n";
                std::cerr << "note: researcher ratings are a last resort; prefer an SME CVR panel\n";
            }
            return 0;
        }

        if (*diag_cmd) {
            const Config cfg = load_config_or_default(d_config);
            const RunResult run = run_from_files(d_spec, d_data, d_sme, cfg, d_iter, {});
            std::cout << generate_human_report(run);
            return 0;
        }

        if (*comp_cmd) {
            Config cfg = load_config_or_default(k_config);
            if (!k_method.empty()) cfg.composite_method = detail::composite_method_from(k_method);
            const RunResult run = run_from_files(k_spec, k_data, k_sme, cfg, k_iter, {});
            for (const auto& cr : run.constructs) {
                if (!cr.composites) {
                    std::cerr << "no composites for " << cr.construct_id << "\n";
                    continue;
                }
                if (k_out.empty()) {
                    std::cout << "# " << cr.construct_id << " ("
                              << detail::to_string(cr.composites->method) << ")\n";
                    for (std::size_t r = 0; r < cr.composites->respondent_ids.size(); ++r)
                        std::cout << cr.composites->respondent_ids[r] << ","
                                  << cr.composites->scores[r] << "\n";
                } else {
                    fs::create_directories(k_out);
                    const fs::path p = fs::path(k_out) / (cr.construct_id + "_composites.csv");
                    std::ofstream out(p, std::ios::binary);
                    out << "respondent_id," << cr.construct_id << "\n";
                    for (std::size_t r = 0; r < cr.composites->respondent_ids.size(); ++r)
                        out << cr.composites->respondent_ids[r] << "," << cr.composites->scores[r]
                            << "\n";
                    std::cout << "wrote " << p.string() << "\n";
                }
            }
            return 0;
        }

        if (*gate_cmd) {
            const Config cfg = load_config_or_default(g_config);
            const RunResult run = run_from_files(g_spec, g_data, g_sme, cfg, g_iter, {});
            print_gates(run.gates);
            bool all_pass = true;
            for (const auto& g : run.gates) all_pass &= (g.status == GateStatus::pass);
            return all_pass ? 0 : 2;
        }

        if (*report_cmd) {
            const Config cfg = load_config_or_default(r_config);
            const fs::path out_dir(r_out);
            const fs::path history_dir = out_dir / "history";
            const std::vector<IterationRecord> history = load_history(history_dir);
            const RunResult run = run_from_files(r_spec, r_data, r_sme, cfg, r_iter, history);

            fs::create_directories(out_dir);
            const fs::path structured = out_dir / ("report_" + r_iter + ".json");
            const fs::path human = out_dir / ("report_" + r_iter + ".md");
            {
                std::ofstream out(structured, std::ios::binary);
                out << generate_structured_report(run);
            }
            {
                std::ofstream out(human, std::ios::binary);
                out << generate_human_report(run);
            }

            IterationRecord rec;
            rec.iteration_id = r_iter;
            rec.spec_hash = run.spec_hash;
            rec.report_path = structured.string();
            // Everyone who saw the instrument counts for practice bias,
            // including respondents later dropped for missing data.
            for (const auto& rid : run.respondent_ids) rec.respondent_ids.insert(rid);
            for (const auto& rid : run.dropped_respondents) rec.respondent_ids.insert(rid);
            save_iteration_record(history_dir, rec);

            print_gates(run.gates);
            for (const auto& w : run.iteration_warnings) std::cout << "WARNING: " << w << "\n";
            std::cout << "wrote " << structured.string() << " and " << human.string() << "\n";
            return 0;
        }

        if (*sim_cmd) {
            const MeasurementSpec spec = load_spec_file(s_spec);
            SynthConfig cfg;
            cfg.seed = s_seed;
            cfg.n_respondents = s_n;
            for (const ItemSpec* it : spec.all_items())
                cfg.items.push_back({it->item_id, it->scale_min, it->scale_max});
            if (s_disc == "round_clamp") cfg.discretization = Discretization::round_clamp;
            else if (s_disc == "quantile") cfg.discretization = Discretization::quantile;
            else throw Error("--discretization must be round_clamp|quantile");

            const std::size_t k = cfg.items.size();
            if (fs::exists(s_rho)) {
                const csv::Document doc = csv::read_file(s_rho);
                if (doc.rows.size() != k)
                    throw Error("--rho matrix must be " + std::to_string(k) + " x " +
                                std::to_string(k));
                cfg.target_correlation.assign(k, std::vector<double>(k, 0.0));
                for (std::size_t i = 0; i < k; ++i) {
                    if (doc.rows[i].size() != k)
                        throw Error("--rho matrix row " + std::to_string(i + 1) + " has " +
                                    std::to_string(doc.rows[i].size()) + " columns");
                    for (std::size_t j = 0; j < k; ++j)
                        cfg.target_correlation[i][j] = std::stod(doc.rows[i][j]);
                }
            } else {
                const double rho = std::stod(s_rho);
                cfg.target_correlation.assign(k, std::vector<double>(k, rho));
                for (std::size_t i = 0; i < k; ++i) cfg.target_correlation[i][i] = 1.0;
            }

            const PilotDataset ds = generate_pilot_data(cfg);
            std::ofstream out(s_out, std::ios::binary);
            if (!out) throw Error("cannot write " + s_out);
            std::vector<std::string> header{"respondent_id"};
            for (const auto& id : ds.items) header.push_back(id);
            out << csv::format_row(header);
            for (std::size_t r = 0; r < ds.n_respondents(); ++r) {
                std::vector<std::string> row{ds.respondent_ids[r]};
                for (double v : ds.values[r])
                    row.push_back(std::to_string(static_cast<long long>(v)));
                out << csv::format_row(row);
            }
            std::cout << "wrote " << s_out << " (" << ds.n_respondents() << " x " << k << ")\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
