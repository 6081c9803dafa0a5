#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "sectlabel/bundle.hpp"
#include "sectlabel/errors.hpp"

namespace fs = std::filesystem;
using namespace sectlabel;

namespace {

ModelBundle tiny_bundle(bool trainable_embeddings) {
    ModelBundle bundle;
    bundle.vocab = Vocabulary({"lungs", "clear", "history", "findings", "pain"});
    bundle.embedding_dim = 8;
    bundle.embedding_trainable = trainable_embeddings;
    bundle.focus_config = FocusConfig{6, 10, 8, 5, 0.5, 0.5, 0.3};
    bundle.surrounding_config = SurroundingConfig{6, 3, 9, 4, 0.5, 0.3};
    bundle.layout_config = LayoutConfig{12, 6, 0.5, 0.5};
    bundle.rules = mgb_rules();

    auto make_table = [&](std::uint32_t seed) {
        return std::make_shared<EmbeddingTable<float>>(
            EmbeddingTable<float>::random_init(bundle.vocab, bundle.embedding_dim, seed,
                                               trainable_embeddings));
    };
    auto shared = make_table(1);
    bundle.focus = std::make_unique<FocusModel<float>>(
        trainable_embeddings ? make_table(2) : shared, bundle.focus_config, 11);
    bundle.surrounding = std::make_unique<SurroundingModel<float>>(
        trainable_embeddings ? make_table(3) : shared, bundle.surrounding_config, 12);
    bundle.layout = std::make_unique<LayoutModel<float>>(bundle.layout_config, 13);
    bundle.merged = std::make_unique<MergedModel<float>>(
        trainable_embeddings ? make_table(4) : shared, bundle.focus_config,
        bundle.surrounding_config, bundle.layout_config, 14);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < kNumLabels; ++k) {
        for (int j = 0; j < kStackingDim; ++j) bundle.stacker.w(k, j) = u(rng);
        bundle.stacker.b[k] = u(rng);
    }
    bundle.stacker.finetuned = true;
    bundle.stacker.finetuned_dataset = "unit-test";

    bundle.tfidf = TfidfVectorizer::fit({"lungs clear", "chest pain", "no findings"});
    std::vector<SparseVector> rows{{{0, 1.0}}, {{1, 1.0}}};
    SvmConfig svm_cfg;
    svm_cfg.epochs = 5;
    bundle.svm = LinearSvm::fit(rows, {0, 1}, bundle.tfidf.dim(), svm_cfg);
    bundle.meta["note"] = "fixture";
    return bundle;
}

SentenceExample sample_example() {
    SentenceExample ex;
    ex.focus_ids = {2, 3, 4};
    ex.prev_ids = {0};
    ex.next_ids = {5, 6};
    for (int i = 0; i < kLayoutFeatureCount; ++i)
        ex.layout[static_cast<std::size_t>(i)] = 0.1f * static_cast<float>(i % 7);
    return ex;
}

} // namespace

TEST_CASE("tensor container round-trips bytes and values") {
    std::vector<NamedTensor> tensors;
    std::mt19937 rng(3);
    std::uniform_real_distribution<float> u(-2.0f, 2.0f);
    for (int t = 0; t < 4; ++t) {
        NamedTensor nt;
        nt.name = "tensor/" + std::to_string(t);
        nt.rows = static_cast<std::uint32_t>(1 + t);
        nt.cols = 3;
        nt.data.resize(nt.rows * nt.cols);
        for (float& v : nt.data) v = u(rng);
        tensors.push_back(std::move(nt));
    }
    std::ostringstream out(std::ios::binary);
    write_tensor_container(out, tensors);
    std::istringstream in(out.str(), std::ios::binary);
    const auto loaded = read_tensor_container(in, "<mem>");
    REQUIRE(loaded.size() == tensors.size());
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        CHECK(loaded[i].name == tensors[i].name);
        CHECK(loaded[i].rows == tensors[i].rows);
        CHECK(loaded[i].cols == tensors[i].cols);
        CHECK(loaded[i].data == tensors[i].data);
    }

    std::ostringstream out2(std::ios::binary);
    write_tensor_container(out2, loaded);
    CHECK(out.str() == out2.str());

    std::istringstream bad("XXXXXXXXrest", std::ios::binary);
    CHECK_THROWS_AS(read_tensor_container(bad, "<mem>"), FormatError);
}

TEST_CASE("model bundle save/load preserves predictions exactly") {
    for (const bool trainable : {false, true}) {
        CAPTURE(trainable);
        ModelBundle bundle = tiny_bundle(trainable);
        const SentenceExample ex = sample_example();
        const ProbVector focus_before = bundle.focus->predict(ex);
        const ProbVector surrounding_before = bundle.surrounding->predict(ex);
        const ProbVector layout_before = bundle.layout->predict(ex);
        const ProbVector merged_before = bundle.merged->predict(ex);

        const std::string path = "bundle_test.bin";
        bundle.save(path);
        ModelBundle loaded = ModelBundle::load(path);
        std::remove(path.c_str());

        CHECK(loaded.vocab.tokens() == bundle.vocab.tokens());
        CHECK(loaded.embedding_dim == bundle.embedding_dim);
        CHECK(loaded.embedding_trainable == trainable);
        CHECK(loaded.rules.header_patterns == bundle.rules.header_patterns);
        CHECK(loaded.stacker.finetuned);
        CHECK(loaded.stacker.finetuned_dataset == "unit-test");
        CHECK(loaded.meta["note"] == "fixture");
        CHECK(loaded.tfidf.tokens() == bundle.tfidf.tokens());

        const ProbVector focus_after = loaded.focus->predict(ex);
        const ProbVector surrounding_after = loaded.surrounding->predict(ex);
        const ProbVector layout_after = loaded.layout->predict(ex);
        const ProbVector merged_after = loaded.merged->predict(ex);
        for (int i = 0; i < kNumLabels; ++i) {
            CHECK(focus_after[i] == focus_before[i]);  // f32 params round-trip exactly
            CHECK(surrounding_after[i] == surrounding_before[i]);
            CHECK(layout_after[i] == layout_before[i]);
            CHECK(merged_after[i] == merged_before[i]);
        }
        CHECK(loaded.base_params_hash() == bundle.base_params_hash());

        // stacker round-trips through f32, prediction-compatible
        const auto x = make_stacking_input(focus_before, surrounding_before, layout_before);
        CHECK(predict_stacker(loaded.stacker, x).first ==
              predict_stacker(bundle.stacker, x).first);
    }
}

TEST_CASE("repeated saves of the same bundle are byte-identical") {
    ModelBundle bundle = tiny_bundle(false);
    bundle.save("bundle_a.bin");
    bundle.save("bundle_b.bin");
    std::ifstream a("bundle_a.bin", std::ios::binary), b("bundle_b.bin", std::ios::binary);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    std::remove("bundle_a.bin");
    std::remove("bundle_b.bin");
}

TEST_CASE("bundle loader refuses a mismatched feature version") {
    // handcraft a bundle file with feature_version 999
    const std::string header = R"({"feature_version":999})";
    std::ofstream out("bundle_badver.bin", std::ios::binary);
    out.write("SLBNDL01", 8);
    const std::uint64_t len = header.size();
    for (int i = 0; i < 8; ++i) out.put(static_cast<char>((len >> (8 * i)) & 0xff));
    out << header;
    out.close();
    CHECK_THROWS_WITH_AS(ModelBundle::load("bundle_badver.bin"),
                         doctest::Contains("feature version"), FormatError);
    std::remove("bundle_badver.bin");

    CHECK_THROWS_AS(ModelBundle::load("missing_bundle.bin"), IoError);

    std::ofstream garbage("bundle_garbage.bin", std::ios::binary);
    garbage << "not a bundle at all";
    garbage.close();
    CHECK_THROWS_AS(ModelBundle::load("bundle_garbage.bin"), FormatError);
    std::remove("bundle_garbage.bin");
}
