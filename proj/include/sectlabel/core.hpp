#ifndef SECTLABEL_CORE_HPP
#define SECTLABEL_CORE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sectlabel {

// The seven section categories. Codes 0..6 are stable and used everywhere:
// in probability vectors, confusion matrices and serialized labels.
enum class SectionLabel : int {
    Reason = 0,
    History = 1,
    Comparison = 2,
    Technique = 3,
    Findings = 4,
    Impression = 5,
    Others = 6,
};

constexpr int kNumLabels = 7;

const char* to_string(SectionLabel label);

// Case-insensitive; accepts a few common aliases ("reason for visit",
// "indication(s)"). Returns nullopt for unknown strings.
std::optional<SectionLabel> parse_label(std::string_view text);

// Throws DataError when code is outside 0..6.
SectionLabel label_from_code(int code);

inline int label_code(SectionLabel label) { return static_cast<int>(label); }

// One segmented sentence. Offsets are 0-based character offsets into the
// owning report's raw text; `end` is exclusive. raw_text[begin..end) == text.
struct Sentence {
    std::string text;
    std::size_t begin = 0;
    std::size_t end = 0;
    int index = 0;
};

struct Report {
    std::string id;
    std::string raw_text;
    std::vector<Sentence> sentences;
};

// Checks the Sentence/Report invariants (in-bounds spans, exact slice match,
// sorted, non-overlapping, gap-free indices). Throws DataError on violation.
void validate_report(const Report& report);

enum class LabelSource : int {
    Weak = 0,
    Gold = 1,
    Predicted = 2,
};

const char* to_string(LabelSource source);
std::optional<LabelSource> parse_source(std::string_view text);

struct LabeledSentence {
    Sentence sentence;
    SectionLabel label = SectionLabel::Others;
    LabelSource source = LabelSource::Weak;
};

// Length-7 probability distribution over the labels, indexed by label code.
struct ProbVector {
    std::array<double, kNumLabels> p{};

    double operator[](int i) const { return p[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return p[static_cast<std::size_t>(i)]; }

    // Entries in [0,1] and summing to 1 within tol.
    bool valid(double tol = 1e-6) const;
    int argmax() const;  // ties break toward the lowest code

    static ProbVector uniform();
};

// Per-class decision scores (e.g. one-vs-rest sigmoids); no sum constraint.
using ScoreVector = std::array<double, kNumLabels>;

int argmax_score(const ScoreVector& scores);

struct DatasetSplit {
    std::vector<Report> train;
    std::vector<Report> stacking_holdout;
    std::vector<Report> test;
    std::array<double, 3> proportions{};
};

// Deterministic index partition shared by every split in the project so that
// report- and labeled-report corpora shuffle identically under one seed.
// Sizes: k2 = round(n*r2), k3 = round(n*r3), k1 = n - k2 - k3 (rounding
// remainder goes to the first part). Ratios must be non-negative and sum to 1
// within 1e-9.
std::array<std::vector<std::size_t>, 3>
split_indices(std::size_t n, const std::array<double, 3>& ratios, std::uint32_t seed);

DatasetSplit split_dataset(const std::vector<Report>& reports,
                           const std::array<double, 3>& ratios,
                           std::uint32_t seed);

} // namespace sectlabel

#endif
