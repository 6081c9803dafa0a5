#include <doctest.h>

#include <random>
#include <set>

#include "sectlabel/core.hpp"
#include "sectlabel/errors.hpp"

using namespace sectlabel;

namespace {

std::vector<Report> dummy_reports(std::size_t n) {
    std::vector<Report> reports(n);
    for (std::size_t i = 0; i < n; ++i) reports[i].id = "r" + std::to_string(i);
    return reports;
}

} // namespace

TEST_CASE("label codes are a bijection onto 0..6 and round-trip through strings") {
    std::set<int> codes;
    for (int k = 0; k < kNumLabels; ++k) {
        const SectionLabel label = label_from_code(k);
        CHECK(label_code(label) == k);
        codes.insert(label_code(label));
        const auto parsed = parse_label(to_string(label));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == label);
    }
    CHECK(codes.size() == 7);
    CHECK(label_code(SectionLabel::Reason) == 0);
    CHECK(label_code(SectionLabel::History) == 1);
    CHECK(label_code(SectionLabel::Comparison) == 2);
    CHECK(label_code(SectionLabel::Technique) == 3);
    CHECK(label_code(SectionLabel::Findings) == 4);
    CHECK(label_code(SectionLabel::Impression) == 5);
    CHECK(label_code(SectionLabel::Others) == 6);
}

TEST_CASE("label parsing accepts merge-map aliases case-insensitively") {
    CHECK(parse_label("reason for visit") == SectionLabel::Reason);
    CHECK(parse_label("INDICATION") == SectionLabel::History);
    CHECK(parse_label("Procedure") == SectionLabel::Technique);
    CHECK(parse_label("Type") == SectionLabel::Technique);
    CHECK_FALSE(parse_label("narrative").has_value());
    CHECK_THROWS_AS(label_from_code(7), DataError);
    CHECK_THROWS_AS(label_from_code(-1), DataError);
}

TEST_CASE("split_dataset reproduces the 856 -> 686/85/85 arithmetic") {
    const auto split = split_dataset(dummy_reports(856), {0.8, 0.1, 0.1}, 7);
    CHECK(split.train.size() == 686);
    CHECK(split.stacking_holdout.size() == 85);
    CHECK(split.test.size() == 85);
}

TEST_CASE("split_dataset degenerate ratios put everything in train") {
    const auto split = split_dataset(dummy_reports(10), {1.0, 0.0, 0.0}, 3);
    CHECK(split.train.size() == 10);
    CHECK(split.stacking_holdout.empty());
    CHECK(split.test.empty());
}

TEST_CASE("split_dataset is deterministic under a seed") {
    const auto a = split_dataset(dummy_reports(7), {0.8, 0.1, 0.1}, 1);
    const auto b = split_dataset(dummy_reports(7), {0.8, 0.1, 0.1}, 1);
    REQUIRE(a.train.size() == b.train.size());
    for (std::size_t i = 0; i < a.train.size(); ++i) CHECK(a.train[i].id == b.train[i].id);
    REQUIRE(a.test.size() == b.test.size());
    for (std::size_t i = 0; i < a.test.size(); ++i) CHECK(a.test[i].id == b.test[i].id);
}

TEST_CASE("split_dataset errors") {
    CHECK_THROWS_WITH_AS(split_dataset({}, {0.8, 0.1, 0.1}, 0), "empty corpus", DataError);
    CHECK_THROWS_AS(split_dataset(dummy_reports(5), {0.5, 0.1, 0.1}, 0), DataError);
    CHECK_THROWS_AS(split_dataset(dummy_reports(5), {1.2, -0.1, -0.1}, 0), DataError);
}

TEST_CASE("split partition is total and disjoint for random sizes, ratios and seeds") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<std::size_t> size_dist(1, 300);
    std::uniform_real_distribution<double> r(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = size_dist(rng);
        double a = r(rng), b = r(rng), c = r(rng);
        const double sum = a + b + c;
        if (sum == 0.0) continue;
        a /= sum; b /= sum; c = 1.0 - a - b;
        const auto parts = split_indices(n, {a, b, c}, rng());
        std::set<std::size_t> seen;
        std::size_t total = 0;
        for (const auto& part : parts) {
            total += part.size();
            for (std::size_t idx : part) {
                CHECK(idx < n);
                CHECK(seen.insert(idx).second);  // disjoint
            }
        }
        CHECK(total == n);
    }
}

TEST_CASE("prob vector validity and argmax tie-breaking") {
    const ProbVector u = ProbVector::uniform();
    CHECK(u.valid());
    CHECK(u.argmax() == 0);  // ties break to the lowest code

    ProbVector p;
    p.p = {0.1, 0.2, 0.3, 0.1, 0.1, 0.1, 0.1};
    CHECK(p.valid());
    CHECK(p.argmax() == 2);

    ProbVector bad;
    bad.p = {0.5, 0.5, 0.5, 0, 0, 0, 0};
    CHECK_FALSE(bad.valid());
}

TEST_CASE("validate_report catches broken spans") {
    Report report;
    report.id = "x";
    report.raw_text = "Hello world.";
    report.sentences.push_back({"Hello world.", 0, 12, 0});
    CHECK_NOTHROW(validate_report(report));

    report.sentences[0].text = "Hello earth.";
    CHECK_THROWS_AS(validate_report(report), DataError);
}
