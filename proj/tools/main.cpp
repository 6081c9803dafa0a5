// Command-line workflow for the sentence-level section labeler: weak
// labeling, training, evaluation, labeling, cross-validation, stacker
// fine-tuning, synthetic corpus generation and gradient verification.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sectlabel/bundle.hpp"
#include "sectlabel/config.hpp"
#include "sectlabel/corpus_io.hpp"
#include "sectlabel/errors.hpp"
#include "sectlabel/grad_check_suite.hpp"
#include "sectlabel/pipeline.hpp"
#include "sectlabel/weak_labeler.hpp"

namespace fs = std::filesystem;
using namespace sectlabel;

namespace {

// Exit codes: 2 config, 3 io, 4 data, 5 format.
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;
constexpr int kExitFormat = 5;

Config build_config(const std::string& config_path, const std::vector<std::string>& overrides,
                    int seed, bool seed_given) {
    Config cfg = config_path.empty() ? Config() : Config::load(config_path);
    for (const std::string& kv : overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed_given) cfg.set("train.seed", std::to_string(seed));
    return cfg;
}

// Labeled corpora come either as the internal .jsonl format or as a BRAT
// standoff directory.
std::vector<LabeledReport> load_labeled_corpus(const std::string& path,
                                               const std::string& label_map_path) {
    BratOptions opts;
    if (!label_map_path.empty()) opts.extra_label_map = load_label_map(label_map_path);
    if (fs::is_directory(path)) return load_brat(path, opts);
    return load_labeled_jsonl(path);
}

std::vector<Report> load_any_reports(const std::string& path) {
    if (fs::is_directory(path)) return load_text_reports(path);
    if (fs::path(path).extension() == ".jsonl") {
        std::vector<Report> reports;
        for (const LabeledReport& lr : load_labeled_jsonl(path)) reports.push_back(lr.report);
        return reports;
    }
    std::vector<Report> reports;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    reports.push_back(report_from_text(fs::path(path).stem().string(), ss.str()));
    return reports;
}

SyntheticConfig synthetic_config_for(const std::string& preset, const std::string& template_path) {
    SyntheticConfig cfg;
    if (!template_path.empty()) cfg = load_synthetic_config(template_path);
    else if (preset == "default") cfg = default_synthetic_config();
    else if (preset == "shifted") cfg = shifted_synthetic_config();
    else throw ConfigError("unknown synthetic preset: " + preset);
    return cfg;
}

void print_metrics_table(std::ostream& out,
                         const std::vector<std::pair<System, MetricsReport>>& metrics) {
    out << "\nsystem        accuracy   macro-F1\n";
    for (const auto& [system, report] : metrics) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-12s  %7.4f    %7.4f\n", to_string(system),
                      report.accuracy, report.macro_f1);
        out << line;
    }
}

int run(CLI::App& app, int argc, char** argv) {
    app.require_subcommand(1);

    std::string config_path, in_path, out_path, model_path, rules_name = "mgb";
    std::string system_name = "stacking", label_map_path;
    std::vector<std::string> overrides;
    int seed = 0;
    int folds = 5;

    // ---- weak-label ----
    auto* weak = app.add_subcommand("weak-label",
                                    "Rule-based section labels for raw reports");
    std::string weak_rules = "mgb", weak_in, weak_out;
    weak->add_option("--rules", weak_rules, "built-in set (mgb, mimic) or rules file");
    weak->add_option("--in", weak_in, "directory of .txt reports, a .txt file, or .jsonl")
        ->required();
    weak->add_option("--out", weak_out, "output .jsonl path")->required();

    // ---- gen-synthetic ----
    auto* gen = app.add_subcommand("gen-synthetic", "Generate a labeled synthetic corpus");
    std::string gen_out, gen_preset = "default", gen_template, gen_txt_dir, gen_style;
    int gen_n = 100;
    double gen_dropout = -1.0, gen_jitter = -1.0, gen_synonyms = -1.0;
    bool gen_permute = false;
    gen->add_option("--out", gen_out, "output .jsonl path")->required();
    gen->add_option("--n", gen_n, "number of reports");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--preset", gen_preset, "default or shifted");
    gen->add_option("--template", gen_template, "JSON template file");
    gen->add_option("--dropout", gen_dropout, "header dropout probability");
    gen->add_option("--jitter", gen_jitter, "header casing jitter probability");
    gen->add_option("--synonyms", gen_synonyms, "non-primary keyword probability");
    gen->add_option("--style", gen_style, "upper-colon, title-colon, bare, phrase");
    gen->add_flag("--permute", gen_permute, "permute section order per report");
    gen->add_option("--txt-dir", gen_txt_dir, "also write one .txt per report here");

    // ---- train ----
    auto* train_cmd = app.add_subcommand("train", "Train base models, baselines and stacker");
    bool train_seed_given = false;
    train_cmd->add_option("--in", in_path, "labeled corpus (.jsonl or BRAT directory)")
        ->required();
    train_cmd->add_option("--out", out_path, "output model bundle")->required();
    train_cmd->add_option("--config", config_path, "TOML-style config file");
    train_cmd->add_option("--set", overrides, "config override key=value")->take_all();
    train_cmd->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
        train_seed_given = true;
    });
    train_cmd->add_option("--rules", rules_name, "header rules for layout features");
    train_cmd->add_option("--label-map", label_map_path, "extra BRAT label map file");

    // ---- evaluate ----
    auto* eval_cmd = app.add_subcommand("evaluate", "Score a system on a labeled corpus");
    std::string eval_out;
    eval_cmd->add_option("--model", model_path, "model bundle (not needed for rules systems)");
    eval_cmd->add_option("--in", in_path, "labeled corpus (.jsonl or BRAT directory)")
        ->required();
    eval_cmd->add_option("--system", system_name,
                         "stacking, merged, focus, surrounding, layout, svm, rules-mgb, rules-mimic");
    eval_cmd->add_option("--out", eval_out, "write the metrics report as JSON");
    eval_cmd->add_option("--label-map", label_map_path, "extra BRAT label map file");

    // ---- label ----
    auto* label_cmd = app.add_subcommand("label", "Print predicted labels per sentence");
    std::string label_out;
    label_cmd->add_option("--model", model_path, "model bundle")->required();
    label_cmd->add_option("--in", in_path, "report .txt, directory, or .jsonl")->required();
    label_cmd->add_option("--system", system_name, "prediction system (default stacking)");
    label_cmd->add_option("--out", label_out, "write annotated sentences here");

    // ---- cross-validate ----
    auto* cv_cmd = app.add_subcommand("cross-validate", "Report-level k-fold CV of stacking");
    bool cv_seed_given = false;
    std::string cv_out;
    cv_cmd->add_option("--in", in_path, "labeled corpus (.jsonl or BRAT directory)")->required();
    cv_cmd->add_option("--folds", folds, "number of folds");
    cv_cmd->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
        cv_seed_given = true;
    });
    cv_cmd->add_option("--config", config_path, "TOML-style config file");
    cv_cmd->add_option("--set", overrides, "config override key=value")->take_all();
    cv_cmd->add_option("--out", cv_out, "write fold metrics as JSON");

    // ---- finetune ----
    auto* tune_cmd = app.add_subcommand("finetune",
                                        "Refit only the stacker on a new labeled corpus");
    std::string tune_out;
    tune_cmd->add_option("--model", model_path, "input model bundle")->required();
    tune_cmd->add_option("--in", in_path, "labeled corpus (.jsonl or BRAT directory)")
        ->required();
    tune_cmd->add_option("--out", tune_out, "output model bundle")->required();
    tune_cmd->add_option("--config", config_path, "TOML-style config file");
    tune_cmd->add_option("--set", overrides, "config override key=value")->take_all();
    tune_cmd->add_option("--label-map", label_map_path, "extra BRAT label map file");

    // ---- grad-check ----
    auto* grad_cmd = app.add_subcommand("grad-check", "Finite-difference gradient verification");
    int grad_dense = 10, grad_recurrent = 10;
    grad_cmd->add_option("--seed", seed, "random configuration seed");
    grad_cmd->add_option("--dense", grad_dense, "number of dense-stack configurations");
    grad_cmd->add_option("--recurrent", grad_recurrent, "number of Bi-LSTM configurations");

    CLI11_PARSE(app, argc, argv);

    if (*weak) {
        const RuleSet rules = resolve_rules(weak_rules);
        std::vector<LabeledReport> out;
        for (const Report& report : load_any_reports(weak_in))
            out.push_back(to_labeled_report(report, weak_label(report, rules)));
        save_labeled_jsonl(weak_out, out);
        std::cout << "weak-labeled " << out.size() << " reports -> " << weak_out << "\n";
        return 0;
    }

    if (*gen) {
        SyntheticConfig cfg = synthetic_config_for(gen_preset, gen_template);
        if (gen_dropout >= 0.0) cfg.header_dropout = gen_dropout;
        if (gen_jitter >= 0.0) cfg.casing_jitter = gen_jitter;
        if (gen_synonyms >= 0.0) cfg.synonym_prob = gen_synonyms;
        if (!gen_style.empty()) cfg.header_style = parse_header_style(gen_style);
        if (gen_permute) cfg.permute_sections = true;
        const auto corpus =
            generate_synthetic_corpus(cfg, gen_n, static_cast<std::uint32_t>(seed));
        save_labeled_jsonl(gen_out, corpus);
        if (!gen_txt_dir.empty()) {
            fs::create_directories(gen_txt_dir);
            for (const LabeledReport& lr : corpus) {
                std::ofstream txt(fs::path(gen_txt_dir) / (lr.report.id + ".txt"),
                                  std::ios::binary);
                txt << lr.report.raw_text;
            }
        }
        std::cout << "generated " << corpus.size() << " reports -> " << gen_out << "\n";
        return 0;
    }

    if (*train_cmd) {
        Config config = build_config(config_path, overrides, seed, train_seed_given);
        if (!train_cmd->get_option("--rules")->empty()) config.set("rules.name", rules_name);
        const PipelineConfig cfg = pipeline_config_from(config);
        const auto corpus = load_labeled_corpus(in_path, label_map_path);
        TrainOutcome outcome = train_pipeline(corpus, cfg, &std::cout);
        outcome.bundle.meta["corpus"] = fs::path(in_path).filename().string();
        outcome.bundle.save(out_path);
        std::cout << "saved model bundle -> " << out_path << "\n";
        if (!outcome.test_metrics.empty()) print_metrics_table(std::cout, outcome.test_metrics);
        std::cout << "\nstacker mean |weight| per block:\n"
                  << format_weight_report(ensemble_weight_report(outcome.bundle.stacker));
        return 0;
    }

    if (*eval_cmd) {
        const auto system = parse_system(system_name);
        if (!system) throw ConfigError("unknown system: " + system_name);
        const auto corpus = load_labeled_corpus(in_path, label_map_path);
        ModelBundle bundle;
        const bool needs_bundle =
            *system != System::RulesMgb && *system != System::RulesMimic;
        if (needs_bundle) {
            if (model_path.empty())
                throw ConfigError("--model is required for system '" + system_name + "'");
            bundle = ModelBundle::load(model_path);
        }
        const MetricsReport report =
            evaluate_system(needs_bundle ? &bundle : nullptr, *system, corpus);
        std::cout << "system: " << to_string(*system) << "\n";
        print_report(std::cout, report);
        if (!eval_out.empty()) {
            std::ofstream out(eval_out);
            if (!out) throw IoError("cannot write report: " + eval_out);
            out << report_to_json(report) << "\n";
        }
        return 0;
    }

    if (*label_cmd) {
        const auto system = parse_system(system_name);
        if (!system) throw ConfigError("unknown system: " + system_name);
        ModelBundle bundle = ModelBundle::load(model_path);
        std::ofstream file_out;
        if (!label_out.empty()) {
            file_out.open(label_out, std::ios::binary);
            if (!file_out) throw IoError("cannot write output: " + label_out);
        }
        std::ostream& out = label_out.empty() ? std::cout : file_out;
        const auto reports = load_any_reports(in_path);
        for (std::size_t r = 0; r < reports.size(); ++r) {
            if (reports.size() > 1) out << (r > 0 ? "\n" : "") << "== " << reports[r].id << "\n";
            const auto codes = predict_labels(&bundle, *system, reports[r]);
            for (std::size_t i = 0; i < codes.size(); ++i)
                out << "[" << to_string(label_from_code(codes[i])) << "] "
                    << reports[r].sentences[i].text << "\n";
        }
        return 0;
    }

    if (*cv_cmd) {
        Config config = build_config(config_path, overrides, seed, cv_seed_given);
        const PipelineConfig cfg = pipeline_config_from(config);
        const auto corpus = load_labeled_corpus(in_path, label_map_path);
        const CrossValResult result =
            cross_validate(corpus, cfg, folds, cfg.seed, &std::cout);
        std::cout << format_cross_val(result) << "\n";
        if (!cv_out.empty()) {
            std::ofstream out(cv_out);
            if (!out) throw IoError("cannot write report: " + cv_out);
            out << cross_val_to_json(result) << "\n";
        }
        return 0;
    }

    if (*tune_cmd) {
        Config config = build_config(config_path, overrides, seed, false);
        const PipelineConfig cfg = pipeline_config_from(config);
        ModelBundle bundle = ModelBundle::load(model_path);
        const auto corpus = load_labeled_corpus(in_path, label_map_path);
        if (corpus.empty()) throw DataError("empty corpus");
        const std::uint64_t before = bundle.base_params_hash();
        std::vector<int> labels;
        const auto rows = stacking_inputs(bundle, corpus, &labels);
        bundle.stacker = finetune_stacker(bundle.stacker, rows, labels, cfg.stacker,
                                          fs::path(in_path).filename().string());
        if (bundle.base_params_hash() != before)
            throw DataError("base models changed during fine-tuning");
        bundle.save(tune_out);
        std::cout << "fine-tuned stacker on " << rows.size() << " sentences -> " << tune_out
                  << "\nstacker mean |weight| per block:\n"
                  << format_weight_report(ensemble_weight_report(bundle.stacker));
        return 0;
    }

    if (*grad_cmd) {
        const auto cases =
            run_grad_check_suite(grad_dense, grad_recurrent, static_cast<std::uint32_t>(seed));
        bool all_passed = true;
        for (const GradCheckCase& c : cases) {
            char line[160];
            std::snprintf(line, sizeof(line), "%-34s max rel error %.3e (threshold %.0e) %s\n",
                          c.name.c_str(), c.max_rel_error, c.threshold,
                          c.passed ? "ok" : "FAIL");
            std::cout << line;
            all_passed = all_passed && c.passed;
        }
        if (!all_passed) {
            std::cerr << "gradient check failed\n";
            return 1;
        }
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sentence-level section labeling for radiology-style reports"};
    try {
        return run(app, argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
