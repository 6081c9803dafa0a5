#include "sectlabel/weak_labeler.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "sectlabel/errors.hpp"

namespace sectlabel {

namespace {

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// keyword already lowercase; sentence trimmed + lowercased.
bool matches_header(std::string_view sentence, std::string_view keyword) {
    if (sentence.size() < keyword.size()) return false;
    if (sentence.substr(0, keyword.size()) != keyword) return false;
    std::string_view rest = sentence.substr(keyword.size());
    if (rest.empty()) return true;                 // keyword alone
    if (rest.front() == ':') return true;          // "findings:"
    if (std::isspace(static_cast<unsigned char>(rest.front()))) {
        std::string_view after = trim(rest);
        return !after.empty() && after.front() == ':';  // "findings :"
    }
    return false;
}

} // namespace

RuleSet mgb_rules() {
    RuleSet r;
    r.name = "mgb";
    r.header_patterns = {
        {"reason for visit", SectionLabel::Reason},
        {"reason", SectionLabel::Reason},
        {"indications", SectionLabel::History},
        {"indication", SectionLabel::History},
        {"history", SectionLabel::History},
        {"comparison", SectionLabel::Comparison},
        {"technique", SectionLabel::Technique},
        {"procedure", SectionLabel::Technique},
        {"type", SectionLabel::Technique},
        {"findings", SectionLabel::Findings},
        {"impression", SectionLabel::Impression},
    };
    return r;
}

RuleSet mimic_rules() {
    RuleSet r;
    r.name = "mimic";
    r.header_patterns = {
        {"reason for this examination", SectionLabel::Reason},
        {"reason for examination", SectionLabel::Reason},
        {"reason for exam", SectionLabel::Reason},
        {"reason", SectionLabel::Reason},
        {"indications", SectionLabel::History},
        {"indication", SectionLabel::History},
        {"clinical history", SectionLabel::History},
        {"history", SectionLabel::History},
        {"medical condition", SectionLabel::History},
        {"comparisons", SectionLabel::Comparison},
        {"comparison", SectionLabel::Comparison},
        {"technique", SectionLabel::Technique},
        {"procedure", SectionLabel::Technique},
        {"findings", SectionLabel::Findings},
        {"finding", SectionLabel::Findings},
        {"impressions", SectionLabel::Impression},
        {"impression", SectionLabel::Impression},
        {"conclusion", SectionLabel::Impression},
    };
    return r;
}

RuleSet load_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read rules file: " + path);
    RuleSet rules;
    rules.name = path;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        const std::size_t arrow = sv.find("->");
        if (arrow == std::string_view::npos)
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": expected 'keyword -> Label'");
        const std::string keyword = lowercase(trim(sv.substr(0, arrow)));
        const std::string_view label_text = trim(sv.substr(arrow + 2));
        if (keyword.empty())
            throw FormatError(path + ":" + std::to_string(line_no) + ": empty keyword");
        const auto label = parse_label(label_text);
        if (!label)
            throw FormatError(path + ":" + std::to_string(line_no) + ": unknown label '" +
                              std::string(label_text) + "'");
        rules.header_patterns.emplace_back(keyword, *label);
    }
    if (rules.header_patterns.empty())
        throw FormatError(path + ": rules file contains no patterns");
    return rules;
}

void save_rules(const RuleSet& rules, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write rules file: " + path);
    for (const auto& [keyword, label] : rules.header_patterns)
        out << keyword << " -> " << to_string(label) << '\n';
}

RuleSet resolve_rules(const std::string& name_or_path) {
    if (name_or_path == "mgb" || name_or_path == "mgb-style") return mgb_rules();
    if (name_or_path == "mimic" || name_or_path == "mimic-style") return mimic_rules();
    return load_rules(name_or_path);
}

std::vector<HeaderHit> detect_headers(const Report& report, const RuleSet& rules) {
    std::vector<HeaderHit> hits;
    for (const Sentence& sentence : report.sentences) {
        const std::string text = lowercase(trim(sentence.text));
        for (const auto& [keyword, label] : rules.header_patterns) {
            if (matches_header(text, keyword)) {
                hits.push_back({sentence.index, label});
                break;  // first matching pattern wins
            }
        }
    }
    return hits;
}

std::vector<LabeledSentence> weak_label(const Report& report, const RuleSet& rules) {
    const std::vector<HeaderHit> headers = detect_headers(report, rules);
    std::vector<LabeledSentence> out;
    out.reserve(report.sentences.size());

    std::size_t next_header = 0;
    SectionLabel current = SectionLabel::Others;
    for (const Sentence& sentence : report.sentences) {
        if (next_header < headers.size() &&
            headers[next_header].sentence_index == sentence.index) {
            current = headers[next_header].label;
            ++next_header;
        }
        out.push_back({sentence, current, LabelSource::Weak});
    }
    return out;
}

} // namespace sectlabel
