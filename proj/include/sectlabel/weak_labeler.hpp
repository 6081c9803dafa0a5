#ifndef SECTLABEL_WEAK_LABELER_HPP
#define SECTLABEL_WEAK_LABELER_HPP

#include <string>
#include <utility>
#include <vector>

#include "sectlabel/core.hpp"

namespace sectlabel {

// Ordered header keyword -> canonical label rules. Matching is start-anchored
// and case-insensitive: a sentence is a header iff, after trimming, it begins
// with a keyword followed by ':', end-of-sentence, or whitespace-then-':'.
// First matching rule wins, so longer keywords should precede their prefixes.
struct RuleSet {
    std::string name;
    std::vector<std::pair<std::string, SectionLabel>> header_patterns;
};

// Keyword spellings assembled for MGB-style report templates
// (findings/impression/technique/procedure/type/comparison/reason for
// visit/history/indication(s), merged onto the 7 canonical labels).
RuleSet mgb_rules();

// Variant spellings seen in MIMIC-III radiology notes (reason for this
// examination, final report headers, singular "finding", etc.).
RuleSet mimic_rules();

// Plain-text rules file, one "keyword -> Label" per line, '#' comments.
RuleSet load_rules(const std::string& path);
void save_rules(const RuleSet& rules, const std::string& path);

// Resolves "mgb" / "mimic" to the built-in sets, anything else as a path.
RuleSet resolve_rules(const std::string& name_or_path);

struct HeaderHit {
    int sentence_index = 0;
    SectionLabel label = SectionLabel::Others;
};

// All header sentences of a segmented report, sorted by index, at most one
// label per sentence.
std::vector<HeaderHit> detect_headers(const Report& report, const RuleSet& rules);

// Span rule: every sentence from a header up to (but excluding) the next
// header gets the header's label; sentences before the first header get
// Others; a report without headers is entirely Others. Output source = weak.
std::vector<LabeledSentence> weak_label(const Report& report, const RuleSet& rules);

} // namespace sectlabel

#endif
