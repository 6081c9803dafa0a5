#ifndef SECTLABEL_CORPUS_IO_HPP
#define SECTLABEL_CORPUS_IO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sectlabel/core.hpp"

namespace sectlabel {

// A report with one label (and provenance) per sentence, aligned by index.
struct LabeledReport {
    Report report;
    std::vector<SectionLabel> labels;
    std::vector<LabelSource> sources;

    std::vector<LabeledSentence> labeled_sentences() const;
};

LabeledReport to_labeled_report(const Report& report,
                                const std::vector<LabeledSentence>& sentences);

// ---- internal line-delimited format ----
// One JSON object per sentence: report_id, index, begin, end, text, label,
// source. Rows of one report are contiguous and index-ordered.
void save_labeled_jsonl(const std::string& path, const std::vector<LabeledReport>& reports);
std::vector<LabeledReport> load_labeled_jsonl(const std::string& path);

// ---- plain-text report directories ----
// Reads every *.txt in dir (sorted by filename), id = filename stem.
// Line endings are normalized to \n before segmentation.
std::vector<Report> load_text_reports(const std::string& dir);
Report report_from_text(const std::string& id, const std::string& raw_text);

// ---- BRAT standoff ----
struct StandoffAnnotation {
    std::string id;            // T-number
    std::string label_string;  // as written in the .ann file
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::string covered_text;
};

std::vector<StandoffAnnotation> parse_ann(const std::string& path,
                                          const std::string& document_text);

struct BratOptions {
    // Extra label-string -> canonical label entries, checked before the
    // built-in merge map. Lets variant spellings in released archives load
    // without code changes.
    std::vector<std::pair<std::string, SectionLabel>> extra_label_map;
};

// Loads paired .txt/.ann files; every .txt needs its .ann and vice versa.
// Sentence gold labels are assigned by maximal character overlap (ties to
// the earlier annotation); uncovered sentences become Others.
std::vector<LabeledReport> load_brat(const std::string& dir, const BratOptions& opts = {});

// Parses a "string -> Label" map file for BratOptions.
std::vector<std::pair<std::string, SectionLabel>> load_label_map(const std::string& path);

// ---- synthetic corpus generator ----
enum class HeaderStyle {
    UpperColon,  // "FINDINGS:"
    TitleColon,  // "Findings:"
    Bare,        // "FINDINGS"
    Phrase,      // "FINDINGS SECTION" -- not recognized by the header rules
};

HeaderStyle parse_header_style(const std::string& name);
const char* to_string(HeaderStyle style);

struct SectionSpec {
    SectionLabel label = SectionLabel::Others;
    std::vector<std::string> keywords;  // [0] is the primary spelling
    std::vector<std::string> bank;      // each entry segments to one sentence
    int min_sentences = 1;
    int max_sentences = 3;
};

struct SyntheticConfig {
    std::vector<SectionSpec> sections;  // in template order
    std::vector<std::string> preamble_bank;
    int min_preamble = 0;
    int max_preamble = 2;
    double header_dropout = 0.0;  // probability a section renders without its header
    double casing_jitter = 0.0;   // probability a header renders Title-case
    double synonym_prob = 0.3;    // probability of a non-primary keyword spelling
    HeaderStyle header_style = HeaderStyle::UpperColon;
    bool permute_sections = false;
    std::string id_prefix = "synth";
};

// Radiology-flavored default template covering all six headed sections plus
// an unheaded preamble; a few bank sentences are deliberately shared across
// sections so the focus model alone cannot be perfect.
SyntheticConfig default_synthetic_config();

// Domain-shift preset: permuted section order and phrase-style headers that
// the header rules do not detect, which starves the layout features.
SyntheticConfig shifted_synthetic_config();

SyntheticConfig load_synthetic_config(const std::string& path);

// Deterministic under seed. Every sentence carries its generating section's
// label as gold; header dropout removes header sentences but never changes
// the gold labels of the remaining ones.
std::vector<LabeledReport> generate_synthetic_corpus(const SyntheticConfig& config,
                                                     int n_reports, std::uint32_t seed);

} // namespace sectlabel

#endif
