#include "sectlabel/corpus_io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sectlabel/errors.hpp"
#include "sectlabel/preprocess.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sectlabel {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string normalize_newlines(std::string text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string uppercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::string titlecase(const std::string& s) {
    std::string out = lowercase(s);
    bool word_start = true;
    for (char& c : out) {
        if (c == ' ') {
            word_start = true;
        } else if (word_start) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            word_start = false;
        }
    }
    return out;
}

} // namespace

std::vector<LabeledSentence> LabeledReport::labeled_sentences() const {
    std::vector<LabeledSentence> out;
    out.reserve(report.sentences.size());
    for (std::size_t i = 0; i < report.sentences.size(); ++i)
        out.push_back({report.sentences[i], labels[i], sources[i]});
    return out;
}

LabeledReport to_labeled_report(const Report& report,
                                const std::vector<LabeledSentence>& sentences) {
    if (sentences.size() != report.sentences.size())
        throw DataError("labeled sentence count does not match report " + report.id);
    LabeledReport lr;
    lr.report = report;
    for (const LabeledSentence& s : sentences) {
        lr.labels.push_back(s.label);
        lr.sources.push_back(s.source);
    }
    return lr;
}

void save_labeled_jsonl(const std::string& path, const std::vector<LabeledReport>& reports) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    for (const LabeledReport& lr : reports) {
        for (std::size_t i = 0; i < lr.report.sentences.size(); ++i) {
            const Sentence& s = lr.report.sentences[i];
            json row;
            row["report_id"] = lr.report.id;
            row["index"] = s.index;
            row["begin"] = s.begin;
            row["end"] = s.end;
            row["text"] = s.text;
            row["label"] = to_string(lr.labels[i]);
            row["source"] = to_string(lr.sources[i]);
            out << row.dump() << '\n';
        }
    }
}

std::vector<LabeledReport> load_labeled_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path);

    struct Row {
        int index;
        std::size_t begin, end;
        std::string text;
        SectionLabel label;
        LabelSource source;
    };
    std::vector<std::string> order;
    std::map<std::string, std::vector<Row>> by_report;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json row;
        try {
            row = json::parse(line);
        } catch (const json::parse_error& e) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": bad JSON: " + e.what());
        }
        const auto where = path + ":" + std::to_string(line_no);
        if (!row.contains("report_id") || !row.contains("text") || !row.contains("label"))
            throw FormatError(where + ": missing required field");
        const std::string id = row["report_id"].get<std::string>();
        if (!by_report.count(id)) order.push_back(id);
        const auto label = parse_label(row["label"].get<std::string>());
        if (!label) throw FormatError(where + ": unknown label " + row["label"].dump());
        auto source = LabelSource::Gold;
        if (row.contains("source")) {
            const auto parsed = parse_source(row["source"].get<std::string>());
            if (!parsed) throw FormatError(where + ": unknown source " + row["source"].dump());
            source = *parsed;
        }
        Row r;
        r.index = row.value("index", -1);
        r.begin = row.value("begin", std::size_t{0});
        r.end = row.value("end", std::size_t{0});
        r.text = row["text"].get<std::string>();
        r.label = *label;
        r.source = source;
        if (r.end != r.begin + r.text.size())
            throw FormatError(where + ": span length does not match text length");
        by_report[id].push_back(std::move(r));
    }
    if (order.empty()) throw DataError("empty corpus: " + path);

    std::vector<LabeledReport> reports;
    for (const std::string& id : order) {
        auto rows = by_report[id];
        std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            return a.index < b.index;
        });
        LabeledReport lr;
        lr.report.id = id;
        std::size_t raw_len = 0;
        for (const Row& r : rows) raw_len = std::max(raw_len, r.end);
        lr.report.raw_text.assign(raw_len, ' ');
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Row& r = rows[i];
            if (r.index != static_cast<int>(i))
                throw FormatError(path + ": report " + id + " has gaps in sentence indices");
            lr.report.raw_text.replace(r.begin, r.text.size(), r.text);
            Sentence s;
            s.text = r.text;
            s.begin = r.begin;
            s.end = r.end;
            s.index = r.index;
            lr.report.sentences.push_back(std::move(s));
            lr.labels.push_back(r.label);
            lr.sources.push_back(r.source);
        }
        validate_report(lr.report);
        reports.push_back(std::move(lr));
    }
    return reports;
}

Report report_from_text(const std::string& id, const std::string& raw_text) {
    Report report;
    report.id = id;
    report.raw_text = normalize_newlines(raw_text);
    report.sentences = segment_sentences(report.raw_text);
    return report;
}

std::vector<Report> load_text_reports(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no .txt reports in " + dir);

    std::vector<Report> reports;
    for (const fs::path& p : files)
        reports.push_back(report_from_text(p.stem().string(), read_file(p.string())));
    return reports;
}

std::vector<StandoffAnnotation> parse_ann(const std::string& path,
                                          const std::string& document_text) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path);
    std::vector<StandoffAnnotation> anns;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] != 'T') continue;  // entity annotations only
        const auto where = path + ":" + std::to_string(line_no);
        const std::size_t tab1 = line.find('\t');
        if (tab1 == std::string::npos) throw FormatError(where + ": expected tab after id");
        const std::size_t tab2 = line.find('\t', tab1 + 1);
        StandoffAnnotation ann;
        ann.id = line.substr(0, tab1);
        const std::string middle =
            tab2 == std::string::npos ? line.substr(tab1 + 1) : line.substr(tab1 + 1, tab2 - tab1 - 1);
        ann.covered_text = tab2 == std::string::npos ? "" : line.substr(tab2 + 1);

        std::istringstream mid(middle);
        mid >> ann.label_string;
        if (ann.label_string.empty()) throw FormatError(where + ": missing label");
        // fragments: "b e" separated by ';'
        std::string rest;
        std::getline(mid, rest);
        std::istringstream frag_stream(rest);
        std::string frag;
        while (std::getline(frag_stream, frag, ';')) {
            std::istringstream fs2(frag);
            long long b = -1, e = -1;
            fs2 >> b >> e;
            if (b < 0 || e < b) throw FormatError(where + ": bad span '" + frag + "'");
            if (static_cast<std::size_t>(e) > document_text.size())
                throw FormatError(where + ": span [" + std::to_string(b) + "," +
                                  std::to_string(e) + ") outside document of length " +
                                  std::to_string(document_text.size()));
            ann.spans.emplace_back(static_cast<std::size_t>(b), static_cast<std::size_t>(e));
        }
        if (ann.spans.empty()) throw FormatError(where + ": no spans");

        // covered-text check (newlines in the document render as spaces)
        std::string slice;
        for (std::size_t i = 0; i < ann.spans.size(); ++i) {
            if (i > 0) slice += ' ';
            slice += document_text.substr(ann.spans[i].first,
                                          ann.spans[i].second - ann.spans[i].first);
        }
        std::replace(slice.begin(), slice.end(), '\n', ' ');
        if (!ann.covered_text.empty() && slice != ann.covered_text)
            throw FormatError(where + ": covered text does not match document slice");
        anns.push_back(std::move(ann));
    }
    return anns;
}

std::vector<std::pair<std::string, SectionLabel>> load_label_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read label map: " + path);
    std::vector<std::pair<std::string, SectionLabel>> map;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const std::size_t arrow = line.find("->");
        if (arrow == std::string::npos)
            throw FormatError(path + ":" + std::to_string(line_no) + ": expected 'string -> Label'");
        auto trim = [](std::string s) {
            const std::size_t x = s.find_first_not_of(" \t\r");
            const std::size_t y = s.find_last_not_of(" \t\r");
            return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
        };
        const std::string key = lowercase(trim(line.substr(0, arrow)));
        const auto label = parse_label(trim(line.substr(arrow + 2)));
        if (key.empty() || !label)
            throw FormatError(path + ":" + std::to_string(line_no) + ": bad mapping");
        map.emplace_back(key, *label);
    }
    return map;
}

std::vector<LabeledReport> load_brat(const std::string& dir, const BratOptions& opts) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    std::set<std::string> txt, ann;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() == ".txt") txt.insert(entry.path().stem().string());
        if (entry.path().extension() == ".ann") ann.insert(entry.path().stem().string());
    }
    if (txt.empty()) throw DataError("no .txt reports in " + dir);
    for (const std::string& stem : txt)
        if (!ann.count(stem)) throw IoError("orphan report without annotations: " + stem + ".txt");
    for (const std::string& stem : ann)
        if (!txt.count(stem)) throw IoError("orphan annotation file: " + stem + ".ann");

    auto map_label = [&](const std::string& raw) -> std::optional<SectionLabel> {
        const std::string key = lowercase(raw);
        for (const auto& [k, v] : opts.extra_label_map)
            if (k == key) return v;
        return parse_label(key);
    };

    std::vector<LabeledReport> reports;
    std::set<std::string> unmapped;
    for (const std::string& stem : txt) {
        const std::string text =
            normalize_newlines(read_file((fs::path(dir) / (stem + ".txt")).string()));
        Report report = report_from_text(stem, text);
        const auto anns = parse_ann((fs::path(dir) / (stem + ".ann")).string(), text);

        std::vector<SectionLabel> ann_labels(anns.size(), SectionLabel::Others);
        for (std::size_t a = 0; a < anns.size(); ++a) {
            const auto mapped = map_label(anns[a].label_string);
            if (!mapped) {
                unmapped.insert(anns[a].label_string);
                continue;
            }
            ann_labels[a] = *mapped;
        }

        LabeledReport lr;
        lr.report = std::move(report);
        for (const Sentence& s : lr.report.sentences) {
            std::size_t best_overlap = 0;
            std::size_t best_ann = anns.size();
            for (std::size_t a = 0; a < anns.size(); ++a) {
                std::size_t overlap = 0;
                for (const auto& [b, e] : anns[a].spans) {
                    const std::size_t lo = std::max(b, s.begin);
                    const std::size_t hi = std::min(e, s.end);
                    if (hi > lo) overlap += hi - lo;
                }
                if (overlap > best_overlap) {  // ties keep the earlier annotation
                    best_overlap = overlap;
                    best_ann = a;
                }
            }
            lr.labels.push_back(best_ann < anns.size() ? ann_labels[best_ann]
                                                       : SectionLabel::Others);
            lr.sources.push_back(LabelSource::Gold);
        }
        reports.push_back(std::move(lr));
    }
    if (!unmapped.empty()) {
        std::string msg = "unmapped annotation labels:";
        for (const std::string& s : unmapped) msg += " '" + s + "'";
        throw DataError(msg);
    }
    return reports;
}

HeaderStyle parse_header_style(const std::string& name) {
    const std::string n = lowercase(name);
    if (n == "upper-colon" || n == "uppercolon") return HeaderStyle::UpperColon;
    if (n == "title-colon" || n == "titlecolon") return HeaderStyle::TitleColon;
    if (n == "bare") return HeaderStyle::Bare;
    if (n == "phrase") return HeaderStyle::Phrase;
    throw ConfigError("unknown header style: " + name);
}

const char* to_string(HeaderStyle style) {
    switch (style) {
        case HeaderStyle::UpperColon: return "upper-colon";
        case HeaderStyle::TitleColon: return "title-colon";
        case HeaderStyle::Bare: return "bare";
        case HeaderStyle::Phrase: return "phrase";
    }
    return "upper-colon";
}

SyntheticConfig default_synthetic_config() {
    SyntheticConfig cfg;
    cfg.preamble_bank = {
        "Electronically signed by the attending radiologist.",
        "Examination performed at the outpatient imaging center.",
        "The study was reviewed with the referring physician.",
        "Report dictated using voice recognition software.",
        "Patient identifiers verified prior to imaging.",
        "Images archived to the institutional system.",
        "Preliminary results communicated by telephone.",
        "Attending physician notified of the results.",
    };

    SectionSpec reason;
    reason.label = SectionLabel::Reason;
    reason.keywords = {"REASON FOR VISIT", "REASON"};
    reason.bank = {
        "Evaluate for pneumonia.",
        "Assess interval change in pulmonary nodules.",
        "Rule out acute intracranial hemorrhage.",
        "Evaluate persistent right lower quadrant pain.",
        "Follow up of known pleural effusion.",
        "Evaluate for deep venous thrombosis.",
        "Screening examination requested by primary care.",
        "Assess response to ongoing therapy.",
        "Evaluate chronic cough and weight loss.",
        "Preoperative evaluation before planned surgery.",
    };
    reason.min_sentences = 1;
    reason.max_sentences = 2;

    SectionSpec history;
    history.label = SectionLabel::History;
    history.keywords = {"HISTORY", "INDICATIONS", "INDICATION"};
    history.bank = {
        "The patient is a 67 year old man with fever and productive cough.",
        "Known metastatic disease under treatment.",
        "Prior cholecystectomy and appendectomy.",
        "Longstanding hypertension and diabetes mellitus.",
        "Recent fall with persistent left hip pain.",
        "Chronic obstructive pulmonary disease on home oxygen.",
        "No known drug allergies were reported.",
        "Previous smoker with a 30 pack year history.",
        "Presents with acute shortness of breath.",
        "Microlithiasis.",
    };
    history.min_sentences = 1;
    history.max_sentences = 3;

    SectionSpec comparison;
    comparison.label = SectionLabel::Comparison;
    comparison.keywords = {"COMPARISON"};
    comparison.bank = {
        "Comparison is made with the prior study.",
        "Compared with the examination from last year.",
        "No prior studies are available for review.",
        "Reference is made to the outside examination.",
        "Prior radiographs from the referring facility reviewed.",
        "Compared with the most recent computed tomography.",
        "Baseline examination for future comparison.",
        "Multiple prior examinations were reviewed.",
    };
    comparison.min_sentences = 1;
    comparison.max_sentences = 2;

    SectionSpec technique;
    technique.label = SectionLabel::Technique;
    technique.keywords = {"TECHNIQUE", "PROCEDURE", "TYPE"};
    technique.bank = {
        "Axial images were obtained through the chest without contrast.",
        "Multiplanar reformatted images were generated.",
        "Two view examination of the chest.",
        "Sagittal and coronal reconstructions performed.",
        "Intravenous contrast administered without complication.",
        "Imaging performed according to the low dose protocol.",
        "Grayscale and color Doppler images obtained.",
        "Single frontal view of the abdomen.",
    };
    technique.min_sentences = 1;
    technique.max_sentences = 2;

    SectionSpec findings;
    findings.label = SectionLabel::Findings;
    findings.keywords = {"FINDINGS"};
    findings.bank = {
        "The lungs are clear without focal consolidation.",
        "No pleural effusion or pneumothorax identified.",
        "Heart size is within normal limits.",
        "There is a 3 mm nodule in the right upper lobe.",
        "Degenerative changes noted throughout the spine.",
        "The visualized osseous structures are intact.",
        "Mild cardiomegaly with pulmonary vascular congestion.",
        "Trace free fluid in the pelvis.",
        "The liver demonstrates homogeneous attenuation.",
        "No suspicious focal lesion is identified.",
        "Unremarkable.",
        "Microlithiasis.",
    };
    findings.min_sentences = 2;
    findings.max_sentences = 4;

    SectionSpec impression;
    impression.label = SectionLabel::Impression;
    impression.keywords = {"IMPRESSION"};
    impression.bank = {
        "No acute cardiopulmonary process.",
        "Stable examination without interval change.",
        "Findings consistent with mild degenerative disease.",
        "No evidence of acute fracture or dislocation.",
        "Recommend clinical correlation.",
        "Short interval follow up is suggested.",
        "Overall stable postoperative appearance.",
        "No radiographic evidence of pneumonia.",
        "Unremarkable.",
        "Microlithiasis.",
    };
    impression.min_sentences = 1;
    impression.max_sentences = 3;

    cfg.sections = {reason, history, comparison, technique, findings, impression};
    return cfg;
}

SyntheticConfig shifted_synthetic_config() {
    SyntheticConfig cfg = default_synthetic_config();
    cfg.header_style = HeaderStyle::Phrase;
    cfg.permute_sections = true;
    cfg.casing_jitter = 0.5;
    cfg.id_prefix = "shift";
    return cfg;
}

SyntheticConfig load_synthetic_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw FormatError(path + ": bad JSON: " + e.what());
    }
    SyntheticConfig cfg;
    cfg.preamble_bank = j.value("preamble_bank", std::vector<std::string>{});
    cfg.min_preamble = j.value("min_preamble", 0);
    cfg.max_preamble = j.value("max_preamble", 2);
    cfg.header_dropout = j.value("header_dropout", 0.0);
    cfg.casing_jitter = j.value("casing_jitter", 0.0);
    cfg.synonym_prob = j.value("synonym_prob", 0.3);
    cfg.header_style = parse_header_style(j.value("header_style", "upper-colon"));
    cfg.permute_sections = j.value("permute_sections", false);
    cfg.id_prefix = j.value("id_prefix", "synth");
    if (!j.contains("sections") || !j["sections"].is_array() || j["sections"].empty())
        throw FormatError(path + ": template needs a non-empty 'sections' array");
    for (const auto& js : j["sections"]) {
        SectionSpec spec;
        const auto label = parse_label(js.at("label").get<std::string>());
        if (!label) throw FormatError(path + ": unknown section label " + js.at("label").dump());
        spec.label = *label;
        spec.keywords = js.at("keywords").get<std::vector<std::string>>();
        spec.bank = js.at("bank").get<std::vector<std::string>>();
        spec.min_sentences = js.value("min_sentences", 1);
        spec.max_sentences = js.value("max_sentences", 3);
        if (spec.keywords.empty() || spec.bank.empty())
            throw FormatError(path + ": section needs keywords and a sentence bank");
        cfg.sections.push_back(std::move(spec));
    }
    return cfg;
}

namespace {

std::string render_header(const SectionSpec& spec, HeaderStyle style, bool title_case,
                          std::mt19937& rng, double synonym_prob) {
    std::string keyword = spec.keywords.front();
    if (spec.keywords.size() > 1 && synonym_prob > 0.0) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        if (u(rng) < synonym_prob) {
            std::uniform_int_distribution<std::size_t> pick(1, spec.keywords.size() - 1);
            keyword = spec.keywords[pick(rng)];
        }
    }
    std::string text = title_case ? titlecase(keyword) : uppercase(keyword);
    switch (style) {
        case HeaderStyle::UpperColon:
        case HeaderStyle::TitleColon: return text + ":";
        case HeaderStyle::Bare: return text;
        case HeaderStyle::Phrase: return text + (title_case ? " Section" : " SECTION");
    }
    return text + ":";
}

} // namespace

std::vector<LabeledReport> generate_synthetic_corpus(const SyntheticConfig& config,
                                                     int n_reports, std::uint32_t seed) {
    if (n_reports < 1) throw DataError("n_reports must be >= 1");
    if (config.sections.empty()) throw ConfigError("synthetic template has no sections");
    for (const SectionSpec& s : config.sections) {
        if (s.bank.empty()) throw ConfigError("synthetic section has an empty sentence bank");
        if (s.min_sentences < 1 || s.max_sentences < s.min_sentences)
            throw ConfigError("bad sentence count range in synthetic template");
    }

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<LabeledReport> corpus;
    corpus.reserve(static_cast<std::size_t>(n_reports));

    for (int r = 0; r < n_reports; ++r) {
        std::vector<std::pair<std::string, SectionLabel>> lines;

        if (!config.preamble_bank.empty() && config.max_preamble > 0) {
            std::uniform_int_distribution<int> count(config.min_preamble, config.max_preamble);
            const int n_pre = count(rng);
            std::uniform_int_distribution<std::size_t> pick(0, config.preamble_bank.size() - 1);
            for (int i = 0; i < n_pre; ++i)
                lines.emplace_back(config.preamble_bank[pick(rng)], SectionLabel::Others);
        }

        std::vector<std::size_t> section_order(config.sections.size());
        std::iota(section_order.begin(), section_order.end(), std::size_t{0});
        if (config.permute_sections) std::shuffle(section_order.begin(), section_order.end(), rng);

        for (std::size_t si : section_order) {
            const SectionSpec& spec = config.sections[si];
            const bool drop_header = u(rng) < config.header_dropout;
            if (!drop_header) {
                const bool title = u(rng) < config.casing_jitter ||
                                   config.header_style == HeaderStyle::TitleColon;
                lines.emplace_back(
                    render_header(spec, config.header_style, title, rng, config.synonym_prob),
                    spec.label);
            }
            std::uniform_int_distribution<int> count(spec.min_sentences, spec.max_sentences);
            const int n_sents = count(rng);
            std::uniform_int_distribution<std::size_t> pick(0, spec.bank.size() - 1);
            for (int i = 0; i < n_sents; ++i)
                lines.emplace_back(spec.bank[pick(rng)], spec.label);
        }

        std::string raw;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (i > 0) raw += '\n';
            raw += lines[i].first;
        }

        char id[64];
        std::snprintf(id, sizeof(id), "%s-%05d", config.id_prefix.c_str(), r);
        LabeledReport lr;
        lr.report = report_from_text(id, raw);
        if (lr.report.sentences.size() != lines.size())
            throw DataError("synthetic template sentence '" +
                            lines[lr.report.sentences.size() > lines.size() ? 0 : lr.report.sentences.size()].first +
                            "' does not segment to exactly one sentence");
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (lr.report.sentences[i].text != lines[i].first)
                throw DataError("synthetic sentence was altered by segmentation: '" +
                                lines[i].first + "'");
            lr.labels.push_back(lines[i].second);
            lr.sources.push_back(LabelSource::Gold);
        }
        corpus.push_back(std::move(lr));
    }
    return corpus;
}

} // namespace sectlabel
