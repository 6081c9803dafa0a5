#ifndef SECTLABEL_PREPROCESS_HPP
#define SECTLABEL_PREPROCESS_HPP

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sectlabel/core.hpp"

namespace sectlabel {

constexpr int kPadId = 0;
constexpr int kUnkId = 1;

// Immutable after build_vocab / load. Ids 0 and 1 are reserved for PAD and
// UNK; real tokens start at id 2.
class Vocabulary {
public:
    Vocabulary();

    // Tokens must not contain whitespace; duplicates are rejected.
    explicit Vocabulary(const std::vector<std::string>& tokens);

    int id_of(std::string_view token) const;  // kUnkId for unknown tokens
    const std::string& token_of(int id) const;
    int size() const { return static_cast<int>(id_to_token_.size()); }
    bool contains(std::string_view token) const;

    // Real tokens only, in id order (id = position + 2).
    const std::vector<std::string>& tokens() const { return real_tokens_; }

    // One token per line, line number = id - 2. PAD/UNK are implicit.
    void save(const std::string& path) const;
    static Vocabulary load(const std::string& path);

    // FNV-1a over the token list; recorded in model bundles.
    std::uint64_t hash() const;

private:
    std::vector<std::string> id_to_token_;
    std::vector<std::string> real_tokens_;
    std::unordered_map<std::string, int> token_to_id_;
};

struct TokenizedSentence {
    std::vector<std::string> tokens;
    std::vector<int> token_ids;
    Sentence raw;  // uncleaned, offsets preserved for layout features
};

// Keeps letters and digits, replaces every other character with a space.
// Output length equals input length.
std::string clean_text(std::string_view text);

// Boundaries at newline runs and at '.' or ':' followed by whitespace or
// end-of-text; the delimiter stays with the preceding sentence. Spans are
// trimmed and empty spans dropped.
std::vector<Sentence> segment_sentences(std::string_view raw_text);

// Whitespace-split of clean_text(lowercased text). Unknown tokens map to
// UNK; an empty sentence keeps an empty token list but gets the single PAD id
// so downstream encoders always see at least one timestep.
TokenizedSentence tokenize(const Sentence& sentence, const Vocabulary& vocab);

// Convenience for neighbor slots that fall outside the report.
TokenizedSentence tokenize_empty();

// Frequency-ordered (then lexicographic) vocabulary over the cleaned,
// lowercased corpus. min_count >= 1.
Vocabulary build_vocab(const std::vector<Report>& corpus, int min_count);

} // namespace sectlabel

#endif
