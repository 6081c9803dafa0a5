#include <doctest.h>

#include <cmath>

#include "sectlabel/baselines.hpp"
#include "sectlabel/errors.hpp"

using namespace sectlabel;

TEST_CASE("idf of a token present in every document is exactly 1") {
    const auto v = TfidfVectorizer::fit({"chest clear", "chest pain", "chest nodule"});
    const auto row = v.transform("chest");
    REQUIRE(row.size() == 1);
    // idf = ln((1+3)/(1+3)) + 1 = 1, single token -> normalized weight 1
    CHECK(row[0].second == doctest::Approx(1.0));
    const int idx = row[0].first;
    CHECK(v.idf()[static_cast<std::size_t>(idx)] == doctest::Approx(1.0));
}

TEST_CASE("tf-idf matches a hand-computed 3-document table") {
    // docs: "a b", "a c", "a b b"
    const auto v = TfidfVectorizer::fit({"a b", "a c", "a b b"});
    const double idf_a = std::log(4.0 / 4.0) + 1.0;  // df 3
    const double idf_b = std::log(4.0 / 3.0) + 1.0;  // df 2
    const double idf_c = std::log(4.0 / 2.0) + 1.0;  // df 1

    auto weight_of = [&](const SparseVector& row, const std::string& tok) {
        for (const auto& [idx, w] : row)
            if (v.tokens()[static_cast<std::size_t>(idx)] == tok) return w;
        return 0.0;
    };

    const auto row = v.transform("a b b");
    const double wa = 1.0 * idf_a, wb = 2.0 * idf_b;
    const double norm = std::sqrt(wa * wa + wb * wb);
    CHECK(weight_of(row, "a") == doctest::Approx(wa / norm));
    CHECK(weight_of(row, "b") == doctest::Approx(wb / norm));
    CHECK(weight_of(row, "c") == 0.0);
    CHECK(v.idf()[static_cast<std::size_t>(v.transform("c")[0].first)] ==
          doctest::Approx(idf_c));

    double sq = 0.0;
    for (const auto& [idx, w] : row) sq += w * w;
    CHECK(sq == doctest::Approx(1.0));
}

TEST_CASE("tf-idf edge cases") {
    CHECK_THROWS_AS(TfidfVectorizer::fit({}), DataError);
    const auto v = TfidfVectorizer::fit({"lungs clear", "heart normal"});
    CHECK(v.transform("").empty());                 // empty sentence -> zero vector
    CHECK(v.transform("unseen tokens only").empty());  // unknown tokens ignored
    // punctuation and case fold away
    const auto row = v.transform("LUNGS, clear.");
    CHECK(row.size() == 2);
}

TEST_CASE("balanced class weights follow the present-class formula") {
    // 1 sample of class 0 vs 99 of class 1: weight = n / (present * count)
    std::vector<int> labels(100, 1);
    labels[0] = 0;
    const auto w = LinearSvm::balanced_class_weights(labels);
    CHECK(w[0] == doctest::Approx(50.0));        // 100 / (2 * 1)
    CHECK(w[1] == doctest::Approx(100.0 / 198.0));
    double total = 0.0;
    for (int k = 0; k < kNumLabels; ++k) {
        long count = k == 0 ? 1 : (k == 1 ? 99 : 0);
        total += static_cast<double>(count) * w[static_cast<std::size_t>(k)];
    }
    CHECK(total == doctest::Approx(100.0));

    // with all 7 classes present the 7-class formula holds
    std::vector<int> full;
    for (int k = 0; k < kNumLabels; ++k)
        for (int i = 0; i <= k; ++i) full.push_back(k);
    const auto wf = LinearSvm::balanced_class_weights(full);
    for (int k = 0; k < kNumLabels; ++k)
        CHECK(wf[static_cast<std::size_t>(k)] ==
              doctest::Approx(static_cast<double>(full.size()) / (7.0 * (k + 1))));
}

TEST_CASE("svm separates a linearly separable toy set") {
    // class 0 lives on dimension 0, class 1 on dimension 1
    std::vector<SparseVector> rows;
    std::vector<int> labels;
    for (int i = 0; i < 20; ++i) {
        rows.push_back({{0, 1.0}});
        labels.push_back(0);
        rows.push_back({{1, 1.0}});
        labels.push_back(1);
    }
    SvmConfig cfg;
    cfg.seed = 3;
    const LinearSvm svm = LinearSvm::fit(rows, labels, 2, cfg);
    long correct = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (svm.predict(rows[i]) == labels[i]) ++correct;
    CHECK(correct == static_cast<long>(rows.size()));
}

TEST_CASE("svm determinism and degenerate input") {
    std::vector<SparseVector> rows{{{0, 1.0}}, {{1, 1.0}}, {{0, 0.5}, {1, 0.5}}};
    std::vector<int> labels{0, 1, 0};
    SvmConfig cfg;
    cfg.seed = 9;
    const LinearSvm a = LinearSvm::fit(rows, labels, 2, cfg);
    const LinearSvm b = LinearSvm::fit(rows, labels, 2, cfg);
    CHECK(a.weights() == b.weights());
    CHECK(a.biases() == b.biases());

    CHECK_THROWS_AS(LinearSvm::fit({{{0, 1.0}}}, {2}, 1, cfg), DataError);
    CHECK_THROWS_AS(LinearSvm::fit({}, {}, 1, cfg), DataError);
}

TEST_CASE("empty vector prediction falls back to the bias argmax") {
    std::vector<SparseVector> rows{{{0, 1.0}}, {{1, 1.0}}};
    std::vector<int> labels{0, 1};
    SvmConfig cfg;
    const LinearSvm svm = LinearSvm::fit(rows, labels, 2, cfg);
    const int label = svm.predict({});
    CHECK(label >= 0);
    CHECK(label < kNumLabels);
    const ScoreVector margins = svm.margins({});
    for (int k = 0; k < kNumLabels; ++k)
        CHECK(margins[static_cast<std::size_t>(k)] ==
              doctest::Approx(svm.biases()[static_cast<std::size_t>(k)]));
}

TEST_CASE("lambda grid selection picks a validated model deterministically") {
    std::vector<SparseVector> rows;
    std::vector<int> labels;
    for (int i = 0; i < 30; ++i) {
        rows.push_back({{0, 1.0}, {2, 0.3}});
        labels.push_back(3);
        rows.push_back({{1, 1.0}});
        labels.push_back(5);
    }
    SvmConfig cfg;
    cfg.seed = 4;
    const LinearSvm svm = LinearSvm::fit_with_selection(rows, labels, rows, labels, 3, cfg,
                                                        {1e-5, 1e-4, 1e-3, 1e-2});
    long correct = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (svm.predict(rows[i]) == labels[i]) ++correct;
    CHECK(correct == static_cast<long>(rows.size()));
    CHECK(svm.selected_lambda() > 0.0);
}
