#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sectlabel/pipeline.hpp"

using namespace sectlabel;

namespace {

// Small budgets so the full pipeline runs in seconds inside unit tests.
PipelineConfig tiny_config(std::uint32_t seed) {
    PipelineConfig cfg;
    cfg.seed = seed;
    cfg.embedding_dim = 16;
    cfg.context_train.max_epochs = 4;
    cfg.context_train.patience = 4;
    cfg.context_train.batch_size = 8;
    cfg.merged_train = cfg.context_train;
    cfg.layout_train.max_epochs = 40;
    cfg.layout_train.patience = 40;
    cfg.layout_train.batch_size = 16;
    cfg.svm.epochs = 30;
    cfg.stacker.max_iters = 400;
    return cfg;
}

std::vector<LabeledReport> tiny_corpus(int n, std::uint32_t seed) {
    SyntheticConfig cfg = default_synthetic_config();
    cfg.header_dropout = 0.2;
    cfg.casing_jitter = 0.3;
    return generate_synthetic_corpus(cfg, n, seed);
}

std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("derive_seed separates streams by tag") {
    CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
    CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
    CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
}

TEST_CASE("pipeline config reads TOML-style keys with overrides") {
    Config raw = Config::from_string(
        "[split]\n"
        "ratios = \"0.6,0.2,0.2\"\n"
        "[train.context]\n"
        "epochs = 3\n"
        "patience = 2\n"
        "[embeddings]\n"
        "dim = 24\n"
        "trainable = true\n"
        "[stacker]\n"
        "lambda = 0.01\n");
    raw.set("train.context.epochs", "5");  // CLI override wins
    const PipelineConfig cfg = pipeline_config_from(raw);
    CHECK(cfg.ratios[0] == doctest::Approx(0.6));
    CHECK(cfg.context_train.max_epochs == 5);
    CHECK(cfg.context_train.patience == 2);
    CHECK(cfg.embedding_dim == 24);
    CHECK(cfg.embedding_trainable == 1);
    CHECK(cfg.stacker.lambda == doctest::Approx(0.01));
}

TEST_CASE("system names round-trip") {
    for (System s : all_systems()) {
        const auto parsed = parse_system(to_string(s));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == s);
    }
    CHECK_FALSE(parse_system("bogus").has_value());
}

TEST_CASE("train_pipeline produces a working bundle end to end") {
    const auto corpus = tiny_corpus(30, 7);
    TrainOutcome outcome = train_pipeline(corpus, tiny_config(3), nullptr);

    CHECK_FALSE(outcome.test_metrics.empty());
    for (const auto& [system, report] : outcome.test_metrics) {
        CHECK(report.accuracy >= 0.0);
        CHECK(report.accuracy <= 1.0);
        CHECK(report.confusion.total() > 0);
    }

    // bundle survives disk round-trip and still predicts
    outcome.bundle.save("pipeline_test_bundle.bin");
    ModelBundle loaded = ModelBundle::load("pipeline_test_bundle.bin");
    std::remove("pipeline_test_bundle.bin");
    const auto predictions =
        predict_labels(&loaded, System::Stacking, corpus.front().report);
    CHECK(predictions.size() == corpus.front().report.sentences.size());

    // rules systems work without any bundle
    const MetricsReport rules_report = evaluate_system(nullptr, System::RulesMgb, corpus);
    CHECK(rules_report.confusion.total() > 0);
}

TEST_CASE("train_pipeline is bitwise deterministic under one seed") {
    const auto corpus = tiny_corpus(24, 11);
    TrainOutcome a = train_pipeline(corpus, tiny_config(5), nullptr);
    TrainOutcome b = train_pipeline(corpus, tiny_config(5), nullptr);
    a.bundle.save("pipeline_det_a.bin");
    b.bundle.save("pipeline_det_b.bin");
    CHECK(file_bytes("pipeline_det_a.bin") == file_bytes("pipeline_det_b.bin"));
    std::remove("pipeline_det_a.bin");
    std::remove("pipeline_det_b.bin");
}

TEST_CASE("train_pipeline rejects an empty corpus") {
    CHECK_THROWS_WITH_AS(train_pipeline({}, tiny_config(1), nullptr), "empty corpus",
                         DataError);
}

TEST_CASE("cross_validate: identical reports give identical folds and zero std") {
    const auto one = tiny_corpus(1, 13);
    std::vector<LabeledReport> corpus;
    for (int i = 0; i < 8; ++i) {
        LabeledReport copy = one.front();
        copy.report.id += "-" + std::to_string(i);
        corpus.push_back(std::move(copy));
    }
    const CrossValResult result = cross_validate(corpus, tiny_config(2), 2, 9, nullptr);
    CHECK(result.folds == 2);
    CHECK(result.accuracy_std == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(result.fold_accuracy[0] == doctest::Approx(result.fold_accuracy[1]));
}

TEST_CASE("cross_validate is deterministic under seed") {
    const auto corpus = tiny_corpus(12, 21);
    const CrossValResult a = cross_validate(corpus, tiny_config(4), 3, 17, nullptr);
    const CrossValResult b = cross_validate(corpus, tiny_config(4), 3, 17, nullptr);
    CHECK(cross_val_to_json(a) == cross_val_to_json(b));
    CHECK_THROWS_AS(cross_validate(corpus, tiny_config(4), 1, 0, nullptr), DataError);
    CHECK_THROWS_AS(cross_validate(corpus, tiny_config(4), 100, 0, nullptr), DataError);
}

TEST_CASE("finetune leaves base model parameters untouched") {
    const auto corpus = tiny_corpus(20, 31);
    TrainOutcome outcome = train_pipeline(corpus, tiny_config(6), nullptr);
    const std::uint64_t before = outcome.bundle.base_params_hash();

    std::vector<int> labels;
    const auto rows = stacking_inputs(outcome.bundle, corpus, &labels);
    outcome.bundle.stacker =
        finetune_stacker(outcome.bundle.stacker, rows, labels, {}, "shifted-set");
    CHECK(outcome.bundle.base_params_hash() == before);
    CHECK(outcome.bundle.stacker.finetuned);
    CHECK(outcome.bundle.stacker.finetuned_dataset == "shifted-set");
}
