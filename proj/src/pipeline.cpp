#include "sectlabel/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "sectlabel/errors.hpp"
#include "sectlabel/weak_labeler.hpp"

namespace sectlabel {

std::uint32_t derive_seed(std::uint32_t master, std::string_view tag) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 1099511628211ULL;
    };
    for (int i = 0; i < 4; ++i) mix(static_cast<unsigned char>(master >> (8 * i)));
    for (char c : tag) mix(static_cast<unsigned char>(c));
    return static_cast<std::uint32_t>(h ^ (h >> 32));
}

PipelineConfig pipeline_config_from(const Config& config) {
    PipelineConfig cfg;
    cfg.ratios = config.get_ratios("split.ratios", cfg.ratios);
    cfg.val_fraction = config.get_double("split.val_fraction", cfg.val_fraction);
    cfg.min_count = config.get_int("vocab.min_count", cfg.min_count);
    cfg.embedding_dim = config.get_int("embeddings.dim", cfg.embedding_dim);
    cfg.embedding_path = config.get_string("embeddings.path", cfg.embedding_path);
    if (config.has("embeddings.trainable"))
        cfg.embedding_trainable = config.get_bool("embeddings.trainable", true) ? 1 : 0;
    cfg.rules = config.get_string("rules.name", cfg.rules);
    cfg.layout_options.normalize_counts =
        config.get_bool("layout.normalize_counts", cfg.layout_options.normalize_counts);
    cfg.threads = config.get_int("train.threads", cfg.threads);

    auto fill_train = [&config](TrainConfig& t, const std::string& prefix) {
        t.learning_rate = config.get_double(prefix + ".lr", t.learning_rate);
        t.max_epochs = config.get_int(prefix + ".epochs", t.max_epochs);
        t.patience = config.get_int(prefix + ".patience", t.patience);
        t.batch_size = config.get_int(prefix + ".batch", t.batch_size);
    };
    fill_train(cfg.context_train, "train.context");
    fill_train(cfg.merged_train, "train.merged");
    fill_train(cfg.layout_train, "train.layout");

    cfg.svm.learning_rate = config.get_double("svm.lr", cfg.svm.learning_rate);
    cfg.svm.epochs = config.get_int("svm.epochs", cfg.svm.epochs);
    cfg.svm.lambda = config.get_double("svm.lambda", cfg.svm.lambda);
    if (config.has("svm.lambda_grid")) {
        cfg.svm_lambda_grid.clear();
        std::istringstream ss(config.get_string("svm.lambda_grid", ""));
        std::string part;
        while (std::getline(ss, part, ','))
            if (!part.empty()) cfg.svm_lambda_grid.push_back(std::strtod(part.c_str(), nullptr));
    }

    cfg.stacker.lambda = config.get_double("stacker.lambda", cfg.stacker.lambda);
    cfg.stacker.learning_rate = config.get_double("stacker.lr", cfg.stacker.learning_rate);
    cfg.stacker.max_iters = config.get_int("stacker.max_iters", cfg.stacker.max_iters);
    cfg.stacker.grad_tol = config.get_double("stacker.tol", cfg.stacker.grad_tol);

    cfg.seed = static_cast<std::uint32_t>(config.get_int("train.seed", static_cast<int>(cfg.seed)));
    return cfg;
}

std::optional<System> parse_system(const std::string& name) {
    if (name == "stacking") return System::Stacking;
    if (name == "merged") return System::Merged;
    if (name == "focus") return System::Focus;
    if (name == "surrounding") return System::Surrounding;
    if (name == "layout") return System::Layout;
    if (name == "svm") return System::Svm;
    if (name == "rules-mgb") return System::RulesMgb;
    if (name == "rules-mimic") return System::RulesMimic;
    return std::nullopt;
}

const char* to_string(System system) {
    switch (system) {
        case System::Stacking: return "stacking";
        case System::Merged: return "merged";
        case System::Focus: return "focus";
        case System::Surrounding: return "surrounding";
        case System::Layout: return "layout";
        case System::Svm: return "svm";
        case System::RulesMgb: return "rules-mgb";
        case System::RulesMimic: return "rules-mimic";
    }
    return "stacking";
}

const std::vector<System>& all_systems() {
    static const std::vector<System> systems = {
        System::Stacking, System::Merged,   System::Focus,    System::Surrounding,
        System::Layout,   System::Svm,      System::RulesMgb, System::RulesMimic,
    };
    return systems;
}

namespace {

std::vector<LabeledReport> take(const std::vector<LabeledReport>& corpus,
                                const std::vector<std::size_t>& indices) {
    std::vector<LabeledReport> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(corpus[i]);
    return out;
}

std::vector<SentenceExample> examples_for(const std::vector<LabeledReport>& reports,
                                          const Vocabulary& vocab, const RuleSet& rules,
                                          const LayoutOptions& opts) {
    std::vector<SentenceExample> out;
    for (const LabeledReport& lr : reports) {
        auto ex = make_examples(lr.report, vocab, rules, opts, &lr.labels);
        out.insert(out.end(), std::make_move_iterator(ex.begin()),
                   std::make_move_iterator(ex.end()));
    }
    return out;
}

std::vector<int> weak_rule_predictions(const Report& report, const RuleSet& rules) {
    std::vector<int> out;
    for (const LabeledSentence& ls : weak_label(report, rules))
        out.push_back(label_code(ls.label));
    return out;
}

} // namespace

std::vector<int> predict_labels(const ModelBundle* bundle, System system, const Report& report) {
    if (system == System::RulesMgb) return weak_rule_predictions(report, mgb_rules());
    if (system == System::RulesMimic) return weak_rule_predictions(report, mimic_rules());
    if (!bundle) throw DataError("system requires a model bundle");

    const auto examples =
        make_examples(report, bundle->vocab, bundle->rules, bundle->layout_options);
    std::vector<int> out;
    out.reserve(examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const SentenceExample& ex = examples[i];
        switch (system) {
            case System::Focus: out.push_back(bundle->focus->predict(ex).argmax()); break;
            case System::Surrounding:
                out.push_back(bundle->surrounding->predict(ex).argmax());
                break;
            case System::Layout: out.push_back(bundle->layout->predict(ex).argmax()); break;
            case System::Merged: out.push_back(bundle->merged->predict(ex).argmax()); break;
            case System::Svm:
                out.push_back(bundle->svm.predict(
                    bundle->tfidf.transform(report.sentences[i].text)));
                break;
            case System::Stacking: {
                const auto input = make_stacking_input(bundle->focus->predict(ex),
                                                       bundle->surrounding->predict(ex),
                                                       bundle->layout->predict(ex));
                out.push_back(label_code(predict_stacker(bundle->stacker, input).first));
                break;
            }
            case System::RulesMgb:
            case System::RulesMimic: break;  // handled above
        }
    }
    return out;
}

MetricsReport evaluate_system(const ModelBundle* bundle, System system,
                              const std::vector<LabeledReport>& data) {
    std::vector<int> predictions, gold;
    for (const LabeledReport& lr : data) {
        const auto p = predict_labels(bundle, system, lr.report);
        predictions.insert(predictions.end(), p.begin(), p.end());
        for (SectionLabel l : lr.labels) gold.push_back(label_code(l));
    }
    return score(predictions, gold);
}

std::vector<StackingInput> stacking_inputs(const ModelBundle& bundle,
                                           const std::vector<LabeledReport>& data,
                                           std::vector<int>* labels_out) {
    std::vector<StackingInput> rows;
    for (const LabeledReport& lr : data) {
        const auto examples =
            make_examples(lr.report, bundle.vocab, bundle.rules, bundle.layout_options, &lr.labels);
        for (const SentenceExample& ex : examples) {
            rows.push_back(make_stacking_input(bundle.focus->predict(ex),
                                               bundle.surrounding->predict(ex),
                                               bundle.layout->predict(ex)));
            if (labels_out) labels_out->push_back(ex.label);
        }
    }
    return rows;
}

TrainOutcome train_pipeline(const std::vector<LabeledReport>& corpus,
                            const PipelineConfig& cfg, std::ostream* log) {
    if (corpus.empty()) throw DataError("empty corpus");

    const auto parts = split_indices(corpus.size(), cfg.ratios, derive_seed(cfg.seed, "split"));
    const auto train_reports = take(corpus, parts[0]);
    const auto holdout_reports = take(corpus, parts[1]);
    const auto test_reports = take(corpus, parts[2]);
    if (train_reports.empty()) throw DataError("train split is empty");

    // report-level early-stopping split inside the train part
    std::vector<LabeledReport> fit_reports, val_reports;
    if (cfg.val_fraction > 0.0 && train_reports.size() >= 2) {
        const auto inner =
            split_indices(train_reports.size(),
                          {1.0 - cfg.val_fraction, cfg.val_fraction, 0.0},
                          derive_seed(cfg.seed, "val"));
        fit_reports = take(train_reports, inner[0]);
        val_reports = take(train_reports, inner[1]);
    } else {
        fit_reports = train_reports;
    }

    TrainOutcome outcome;
    ModelBundle& bundle = outcome.bundle;

    std::vector<Report> vocab_reports;
    for (const LabeledReport& lr : train_reports) vocab_reports.push_back(lr.report);
    bundle.vocab = build_vocab(vocab_reports, cfg.min_count);
    bundle.rules = resolve_rules(cfg.rules);
    bundle.layout_options = cfg.layout_options;

    EmbeddingTable<float> base_table;
    if (!cfg.embedding_path.empty()) {
        base_table = load_embeddings<float>(cfg.embedding_path, bundle.vocab,
                                            derive_seed(cfg.seed, "embeddings"));
        base_table.trainable = cfg.embedding_trainable == 1;
    } else {
        base_table = EmbeddingTable<float>::random_init(bundle.vocab, cfg.embedding_dim,
                                                        derive_seed(cfg.seed, "embeddings"),
                                                        cfg.embedding_trainable != 0);
    }
    if (base_table.trainable && base_table.grad.size() == 0)
        base_table.grad = Mat<float>::Zero(base_table.vectors.rows(), base_table.dim);
    bundle.embedding_dim = base_table.dim;
    bundle.embedding_trainable = base_table.trainable;

    // separate tables when trainable, one shared frozen table otherwise
    std::shared_ptr<EmbeddingTable<float>> shared_table;
    auto next_table = [&]() -> std::shared_ptr<EmbeddingTable<float>> {
        if (base_table.trainable) return std::make_shared<EmbeddingTable<float>>(base_table);
        if (!shared_table) shared_table = std::make_shared<EmbeddingTable<float>>(base_table);
        return shared_table;
    };

    bundle.focus = std::make_unique<FocusModel<float>>(next_table(), bundle.focus_config,
                                                       derive_seed(cfg.seed, "init/focus"));
    bundle.surrounding = std::make_unique<SurroundingModel<float>>(
        next_table(), bundle.surrounding_config, derive_seed(cfg.seed, "init/surrounding"));
    bundle.layout = std::make_unique<LayoutModel<float>>(bundle.layout_config,
                                                         derive_seed(cfg.seed, "init/layout"));
    bundle.merged = std::make_unique<MergedModel<float>>(
        next_table(), bundle.focus_config, bundle.surrounding_config, bundle.layout_config,
        derive_seed(cfg.seed, "init/merged"));

    const auto fit_examples =
        examples_for(fit_reports, bundle.vocab, bundle.rules, cfg.layout_options);
    const auto val_examples =
        examples_for(val_reports, bundle.vocab, bundle.rules, cfg.layout_options);
    if (fit_examples.empty()) throw DataError("no training sentences after splitting");

    auto train_cfg_for = [&](const TrainConfig& base, const char* tag) {
        TrainConfig t = base;
        t.seed = derive_seed(cfg.seed, std::string("shuffle/") + tag);
        t.dropout_seed = derive_seed(cfg.seed, std::string("dropout/") + tag);
        return t;
    };

    struct Task {
        const char* name;
        std::function<void()> run;
    };
    std::vector<Task> tasks;
    tasks.push_back({"focus", [&] {
        outcome.focus_history = train(*bundle.focus, fit_examples, val_examples,
                                      train_cfg_for(cfg.context_train, "focus"));
    }});
    tasks.push_back({"surrounding", [&] {
        outcome.surrounding_history = train(*bundle.surrounding, fit_examples, val_examples,
                                            train_cfg_for(cfg.context_train, "surrounding"));
    }});
    tasks.push_back({"layout", [&] {
        outcome.layout_history = train(*bundle.layout, fit_examples, val_examples,
                                       train_cfg_for(cfg.layout_train, "layout"));
    }});
    tasks.push_back({"merged", [&] {
        outcome.merged_history = train(*bundle.merged, fit_examples, val_examples,
                                       train_cfg_for(cfg.merged_train, "merged"));
    }});

    const int workers = std::max(1, std::min(cfg.threads, 3));
    std::vector<std::exception_ptr> errors(tasks.size());
    std::size_t next_task = 0;
    std::mutex task_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t mine;
            {
                std::lock_guard<std::mutex> lock(task_mutex);
                if (next_task >= tasks.size()) return;
                mine = next_task++;
            }
            try {
                tasks[mine].run();
            } catch (...) {
                errors[mine] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    if (log) {
        *log << "trained focus (best epoch " << outcome.focus_history.best_epoch
             << ", val acc " << outcome.focus_history.best_val_accuracy << ")\n"
             << "trained surrounding (best epoch " << outcome.surrounding_history.best_epoch
             << ", val acc " << outcome.surrounding_history.best_val_accuracy << ")\n"
             << "trained layout (best epoch " << outcome.layout_history.best_epoch
             << ", val acc " << outcome.layout_history.best_val_accuracy << ")\n"
             << "trained merged (best epoch " << outcome.merged_history.best_epoch
             << ", val acc " << outcome.merged_history.best_val_accuracy << ")\n";
    }

    // TF-IDF + SVM baseline on the same fit/val sentences
    {
        std::vector<std::string> fit_sentences;
        std::vector<SparseVector> fit_rows, val_rows;
        std::vector<int> fit_labels, val_labels;
        for (const LabeledReport& lr : fit_reports)
            for (std::size_t i = 0; i < lr.report.sentences.size(); ++i) {
                fit_sentences.push_back(lr.report.sentences[i].text);
                fit_labels.push_back(label_code(lr.labels[i]));
            }
        bundle.tfidf = TfidfVectorizer::fit(fit_sentences);
        for (const std::string& s : fit_sentences) fit_rows.push_back(bundle.tfidf.transform(s));
        for (const LabeledReport& lr : val_reports)
            for (std::size_t i = 0; i < lr.report.sentences.size(); ++i) {
                val_rows.push_back(bundle.tfidf.transform(lr.report.sentences[i].text));
                val_labels.push_back(label_code(lr.labels[i]));
            }
        SvmConfig svm_cfg = cfg.svm;
        svm_cfg.seed = derive_seed(cfg.seed, "svm");
        bundle.svm = val_rows.empty()
                         ? LinearSvm::fit(fit_rows, fit_labels, bundle.tfidf.dim(), svm_cfg)
                         : LinearSvm::fit_with_selection(fit_rows, fit_labels, val_rows,
                                                         val_labels, bundle.tfidf.dim(), svm_cfg,
                                                         cfg.svm_lambda_grid);
        if (log) *log << "trained svm (lambda " << bundle.svm.selected_lambda() << ")\n";
    }

    // stacker on the holdout split
    if (!holdout_reports.empty()) {
        std::vector<int> holdout_labels;
        const auto rows = stacking_inputs(bundle, holdout_reports, &holdout_labels);
        bundle.stacker = fit_stacker(rows, holdout_labels, cfg.stacker);
        if (log) *log << "trained stacker on " << rows.size() << " holdout sentences\n";
    } else if (log) {
        *log << "no stacking holdout; stacker left at zero weights\n";
    }

    bundle.meta["seed"] = cfg.seed;
    bundle.meta["corpus_reports"] = corpus.size();
    bundle.meta["split"] = {train_reports.size(), holdout_reports.size(), test_reports.size()};
    bundle.meta["rules"] = cfg.rules;

    if (!test_reports.empty()) {
        for (System system : all_systems())
            outcome.test_metrics.emplace_back(system,
                                              evaluate_system(&bundle, system, test_reports));
    }
    return outcome;
}

CrossValResult cross_validate(const std::vector<LabeledReport>& corpus,
                              const PipelineConfig& cfg, int k, std::uint32_t seed,
                              std::ostream* log) {
    if (k < 2) throw DataError("cross-validation needs k >= 2");
    if (static_cast<std::size_t>(k) > corpus.size())
        throw DataError("cross-validation k exceeds the number of reports");

    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937 rng(derive_seed(seed, "cv"));
    std::shuffle(order.begin(), order.end(), rng);

    const double r12 = cfg.ratios[0] + cfg.ratios[1];
    if (r12 <= 0.0) throw ConfigError("cross-validation needs nonzero train+holdout ratios");
    PipelineConfig fold_cfg = cfg;
    fold_cfg.ratios = {cfg.ratios[0] / r12, 1.0 - cfg.ratios[0] / r12, 0.0};

    std::vector<double> accuracy, macro_f1;
    std::size_t at = 0;
    for (int fold = 0; fold < k; ++fold) {
        const std::size_t size =
            corpus.size() / static_cast<std::size_t>(k) +
            (static_cast<std::size_t>(fold) < corpus.size() % static_cast<std::size_t>(k) ? 1 : 0);
        std::vector<LabeledReport> fold_test, fold_train;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const bool in_fold = i >= at && i < at + size;
            (in_fold ? fold_test : fold_train).push_back(corpus[order[i]]);
        }
        at += size;

        fold_cfg.seed = derive_seed(seed, "fold/" + std::to_string(fold));
        TrainOutcome outcome = train_pipeline(fold_train, fold_cfg, nullptr);
        const MetricsReport report =
            evaluate_system(&outcome.bundle, System::Stacking, fold_test);
        accuracy.push_back(report.accuracy);
        macro_f1.push_back(report.macro_f1);
        if (log)
            *log << "fold " << (fold + 1) << "/" << k << ": accuracy " << report.accuracy
                 << ", macro-F1 " << report.macro_f1 << "\n";
    }
    return summarize_folds(accuracy, macro_f1);
}

} // namespace sectlabel
