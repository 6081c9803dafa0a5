#include "sectlabel/models.hpp"

#include <algorithm>

#include "sectlabel/errors.hpp"

namespace sectlabel {

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Relative-position feature slots, in this fixed order.
constexpr std::array<SectionLabel, 6> kRelPosLabels = {
    SectionLabel::Reason,  SectionLabel::History,  SectionLabel::Technique,
    SectionLabel::Comparison, SectionLabel::Findings, SectionLabel::Impression,
};

float ends_with(const std::string& text, char c) {
    return (!text.empty() && text.back() == c) ? 1.0f : 0.0f;
}

float first_token_upper(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    bool any_alpha = false;
    for (std::size_t k = i; k < j; ++k) {
        if (is_lower(text[k])) return 0.0f;
        if (is_upper(text[k])) any_alpha = true;
    }
    return any_alpha ? 1.0f : 0.0f;
}

} // namespace

LayoutFeatures extract_layout_features(const Report& report, int focus_index,
                                       const std::vector<HeaderHit>& headers,
                                       const LayoutOptions& opts) {
    const int n = static_cast<int>(report.sentences.size());
    if (focus_index < 0 || focus_index >= n)
        throw DataError("focus index out of range: " + std::to_string(focus_index));

    LayoutFeatures f;
    const std::string& text = report.sentences[static_cast<std::size_t>(focus_index)].text;

    long upper = 0, lower = 0, digit = 0;
    for (char c : text) {
        if (is_upper(c)) ++upper;
        else if (is_lower(c)) ++lower;
        else if (is_digit(c)) ++digit;
    }
    if (opts.normalize_counts) {
        const auto len = static_cast<double>(std::max<std::size_t>(text.size(), 1));
        f.values[0] = static_cast<float>(static_cast<double>(upper) / len);
        f.values[1] = static_cast<float>(static_cast<double>(lower) / len);
        f.values[2] = static_cast<float>(static_cast<double>(digit) / len);
    } else {
        f.values[0] = static_cast<float>(upper);
        f.values[1] = static_cast<float>(lower);
        f.values[2] = static_cast<float>(digit);
    }

    // First occurrence per canonical label.
    std::array<int, kNumLabels> first_header;
    first_header.fill(-1);
    for (const HeaderHit& hit : headers) {
        const auto code = static_cast<std::size_t>(label_code(hit.label));
        if (first_header[code] < 0) first_header[code] = hit.sentence_index;
    }
    for (std::size_t slot = 0; slot < kRelPosLabels.size(); ++slot) {
        const int idx = first_header[static_cast<std::size_t>(label_code(kRelPosLabels[slot]))];
        f.values[3 + slot] =
            idx < 0 ? 2.0f
                    : static_cast<float>(static_cast<double>(focus_index - idx) /
                                         static_cast<double>(n));
    }

    if (focus_index > 0) {
        const std::string& prev = report.sentences[static_cast<std::size_t>(focus_index - 1)].text;
        f.values[9] = ends_with(prev, '.');
        f.values[10] = ends_with(prev, ':');
    }
    f.values[11] = ends_with(text, '.');
    f.values[12] = ends_with(text, ':');
    if (focus_index + 1 < n) {
        const std::string& next = report.sentences[static_cast<std::size_t>(focus_index + 1)].text;
        f.values[13] = ends_with(next, '.');
        f.values[14] = ends_with(next, ':');
    }

    f.values[15] = static_cast<float>(static_cast<double>(focus_index) /
                                      static_cast<double>(std::max(n - 1, 1)));
    f.values[16] = first_token_upper(text);
    return f;
}

std::vector<SentenceExample> make_examples(const Report& report, const Vocabulary& vocab,
                                           const RuleSet& rules, const LayoutOptions& opts,
                                           const std::vector<SectionLabel>* labels) {
    const std::size_t n = report.sentences.size();
    if (labels && labels->size() != n)
        throw DataError("report " + report.id + ": label count does not match sentence count");

    const std::vector<HeaderHit> headers = detect_headers(report, rules);

    std::vector<std::vector<int>> ids(n);
    for (std::size_t i = 0; i < n; ++i)
        ids[i] = tokenize(report.sentences[i], vocab).token_ids;
    const std::vector<int> empty_ids = tokenize_empty().token_ids;

    std::vector<SentenceExample> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        SentenceExample& ex = out[i];
        ex.focus_ids = ids[i];
        ex.prev_ids = i > 0 ? ids[i - 1] : empty_ids;
        ex.next_ids = i + 1 < n ? ids[i + 1] : empty_ids;
        ex.layout = extract_layout_features(report, static_cast<int>(i), headers, opts).values;
        if (labels) ex.label = label_code((*labels)[i]);
    }
    return out;
}

} // namespace sectlabel
