#include "sectlabel/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>

#include "sectlabel/errors.hpp"

namespace sectlabel {

namespace {

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

const char* to_string(SectionLabel label) {
    switch (label) {
        case SectionLabel::Reason: return "Reason";
        case SectionLabel::History: return "History";
        case SectionLabel::Comparison: return "Comparison";
        case SectionLabel::Technique: return "Technique";
        case SectionLabel::Findings: return "Findings";
        case SectionLabel::Impression: return "Impression";
        case SectionLabel::Others: return "Others";
    }
    return "Others";
}

std::optional<SectionLabel> parse_label(std::string_view text) {
    const std::string t = lowercase(text);
    if (t == "reason" || t == "reason for visit") return SectionLabel::Reason;
    if (t == "history" || t == "indication" || t == "indications") return SectionLabel::History;
    if (t == "comparison") return SectionLabel::Comparison;
    if (t == "technique" || t == "procedure" || t == "type") return SectionLabel::Technique;
    if (t == "findings") return SectionLabel::Findings;
    if (t == "impression") return SectionLabel::Impression;
    if (t == "others" || t == "other") return SectionLabel::Others;
    return std::nullopt;
}

SectionLabel label_from_code(int code) {
    if (code < 0 || code >= kNumLabels)
        throw DataError("label code out of range: " + std::to_string(code));
    return static_cast<SectionLabel>(code);
}

const char* to_string(LabelSource source) {
    switch (source) {
        case LabelSource::Weak: return "weak";
        case LabelSource::Gold: return "gold";
        case LabelSource::Predicted: return "predicted";
    }
    return "weak";
}

std::optional<LabelSource> parse_source(std::string_view text) {
    const std::string t = lowercase(text);
    if (t == "weak") return LabelSource::Weak;
    if (t == "gold") return LabelSource::Gold;
    if (t == "predicted") return LabelSource::Predicted;
    return std::nullopt;
}

void validate_report(const Report& report) {
    std::size_t prev_end = 0;
    int expected_index = 0;
    for (const Sentence& s : report.sentences) {
        if (s.begin >= s.end || s.end > report.raw_text.size())
            throw DataError("report " + report.id + ": sentence span out of bounds");
        if (report.raw_text.compare(s.begin, s.end - s.begin, s.text) != 0)
            throw DataError("report " + report.id + ": sentence text does not match its span");
        if (s.index != expected_index)
            throw DataError("report " + report.id + ": sentence indices have gaps");
        if (expected_index > 0 && s.begin < prev_end)
            throw DataError("report " + report.id + ": overlapping sentences");
        prev_end = s.end;
        ++expected_index;
    }
}

bool ProbVector::valid(double tol) const {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) return false;
        sum += v;
    }
    return std::abs(sum - 1.0) <= tol;
}

int ProbVector::argmax() const {
    int best = 0;
    for (int i = 1; i < kNumLabels; ++i)
        if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(best)]) best = i;
    return best;
}

ProbVector ProbVector::uniform() {
    ProbVector v;
    v.p.fill(1.0 / kNumLabels);
    return v;
}

int argmax_score(const ScoreVector& scores) {
    int best = 0;
    for (int i = 1; i < kNumLabels; ++i)
        if (scores[static_cast<std::size_t>(i)] > scores[static_cast<std::size_t>(best)]) best = i;
    return best;
}

std::array<std::vector<std::size_t>, 3>
split_indices(std::size_t n, const std::array<double, 3>& ratios, std::uint32_t seed) {
    if (n == 0) throw DataError("empty corpus");
    double sum = 0.0;
    for (double r : ratios) {
        if (!(r >= 0.0)) throw DataError("split ratios must be non-negative");
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw DataError("split ratios must sum to 1");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto k2 = static_cast<std::size_t>(std::lround(static_cast<double>(n) * ratios[1]));
    const auto k3 = static_cast<std::size_t>(std::lround(static_cast<double>(n) * ratios[2]));
    if (k2 + k3 > n) throw DataError("split ratios leave no room for the train part");
    const std::size_t k1 = n - k2 - k3;

    std::array<std::vector<std::size_t>, 3> parts;
    parts[0].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k1));
    parts[1].assign(order.begin() + static_cast<std::ptrdiff_t>(k1),
                    order.begin() + static_cast<std::ptrdiff_t>(k1 + k2));
    parts[2].assign(order.begin() + static_cast<std::ptrdiff_t>(k1 + k2), order.end());
    return parts;
}

DatasetSplit split_dataset(const std::vector<Report>& reports,
                           const std::array<double, 3>& ratios,
                           std::uint32_t seed) {
    const auto parts = split_indices(reports.size(), ratios, seed);
    DatasetSplit split;
    split.proportions = ratios;
    for (std::size_t i : parts[0]) split.train.push_back(reports[i]);
    for (std::size_t i : parts[1]) split.stacking_holdout.push_back(reports[i]);
    for (std::size_t i : parts[2]) split.test.push_back(reports[i]);
    return split;
}

} // namespace sectlabel
