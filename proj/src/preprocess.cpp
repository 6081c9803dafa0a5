#include "sectlabel/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include "sectlabel/errors.hpp"

namespace sectlabel {

namespace {

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_kept(char c) {
    const auto u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9');
}

std::vector<std::string> whitespace_split(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_ascii_space(text[i])) ++i;
        std::size_t j = i;
        while (j < text.size() && !is_ascii_space(text[j])) ++j;
        if (j > i) out.emplace_back(text.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

Vocabulary::Vocabulary() {
    id_to_token_ = {"<pad>", "<unk>"};
}

Vocabulary::Vocabulary(const std::vector<std::string>& tokens) : Vocabulary() {
    for (const std::string& tok : tokens) {
        if (tok.empty() || std::any_of(tok.begin(), tok.end(), is_ascii_space))
            throw DataError("vocabulary token is empty or contains whitespace: '" + tok + "'");
        if (token_to_id_.count(tok))
            throw DataError("duplicate vocabulary token: '" + tok + "'");
        token_to_id_.emplace(tok, static_cast<int>(id_to_token_.size()));
        id_to_token_.push_back(tok);
        real_tokens_.push_back(tok);
    }
}

int Vocabulary::id_of(std::string_view token) const {
    auto it = token_to_id_.find(std::string(token));
    return it == token_to_id_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::token_of(int id) const {
    if (id < 0 || id >= size())
        throw DataError("vocabulary id out of range: " + std::to_string(id));
    return id_to_token_[static_cast<std::size_t>(id)];
}

bool Vocabulary::contains(std::string_view token) const {
    return token_to_id_.count(std::string(token)) > 0;
}

void Vocabulary::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write vocabulary file: " + path);
    for (const std::string& tok : real_tokens_) out << tok << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read vocabulary file: " + path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) tokens.push_back(line);
    }
    return Vocabulary(tokens);
}

std::uint64_t Vocabulary::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 1099511628211ULL;
    };
    for (const std::string& tok : real_tokens_) {
        for (char c : tok) mix(static_cast<unsigned char>(c));
        mix('\n');
    }
    return h;
}

std::string clean_text(std::string_view text) {
    std::string out(text.size(), ' ');
    for (std::size_t i = 0; i < text.size(); ++i)
        if (is_kept(text[i])) out[i] = text[i];
    return out;
}

std::vector<Sentence> segment_sentences(std::string_view raw_text) {
    std::vector<Sentence> sentences;
    const std::size_t n = raw_text.size();

    auto emit = [&](std::size_t begin, std::size_t end) {
        while (begin < end && is_ascii_space(raw_text[begin])) ++begin;
        while (end > begin && is_ascii_space(raw_text[end - 1])) --end;
        if (begin >= end) return;
        Sentence s;
        s.text = std::string(raw_text.substr(begin, end - begin));
        s.begin = begin;
        s.end = end;
        s.index = static_cast<int>(sentences.size());
        sentences.push_back(std::move(s));
    };

    std::size_t start = 0;
    std::size_t i = 0;
    while (i < n) {
        const char c = raw_text[i];
        if (c == '\n') {
            emit(start, i);
            while (i < n && raw_text[i] == '\n') ++i;
            start = i;
        } else if ((c == '.' || c == ':') && (i + 1 == n || is_ascii_space(raw_text[i + 1]))) {
            emit(start, i + 1);  // delimiter attached to the sentence
            ++i;
            start = i;
        } else {
            ++i;
        }
    }
    emit(start, n);
    return sentences;
}

TokenizedSentence tokenize(const Sentence& sentence, const Vocabulary& vocab) {
    TokenizedSentence out;
    out.raw = sentence;
    out.tokens = whitespace_split(clean_text(lowercase(sentence.text)));
    if (out.tokens.empty()) {
        out.token_ids = {kPadId};
        return out;
    }
    out.token_ids.reserve(out.tokens.size());
    for (const std::string& tok : out.tokens) out.token_ids.push_back(vocab.id_of(tok));
    return out;
}

TokenizedSentence tokenize_empty() {
    TokenizedSentence out;
    out.token_ids = {kPadId};
    return out;
}

Vocabulary build_vocab(const std::vector<Report>& corpus, int min_count) {
    if (min_count < 1) throw DataError("min_count must be >= 1");
    std::map<std::string, std::size_t> counts;  // ordered map: lexicographic tie-break for free
    for (const Report& report : corpus)
        for (const Sentence& s : report.sentences)
            for (const std::string& tok : whitespace_split(clean_text(lowercase(s.text))))
                ++counts[tok];

    std::vector<std::pair<std::string, std::size_t>> items(counts.begin(), counts.end());
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    std::vector<std::string> tokens;
    for (const auto& [tok, count] : items)
        if (count >= static_cast<std::size_t>(min_count)) tokens.push_back(tok);
    return Vocabulary(tokens);
}

} // namespace sectlabel
