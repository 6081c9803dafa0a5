#include <doctest.h>

#include <cctype>
#include <cstdio>
#include <random>

#include "sectlabel/errors.hpp"
#include "sectlabel/preprocess.hpp"

using namespace sectlabel;

namespace {

std::string random_text(std::mt19937& rng, std::size_t max_len) {
    static const std::string alphabet =
        "abcdefgXYZ0123 .:,;\n\t!?-()[]'\"/\\FINDINGSimpression";
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string out;
    const std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) out.push_back(alphabet[pick(rng)]);
    return out;
}

Sentence sentence_of(const std::string& text) {
    Sentence s;
    s.text = text;
    s.begin = 0;
    s.end = text.size();
    s.index = 0;
    return s;
}

} // namespace

TEST_CASE("clean_text keeps letters and digits, blanks everything else") {
    CHECK(clean_text("CT scan, 2 views.") == "CT scan  2 views ");
    CHECK(clean_text("") == "");
    CHECK(clean_text("FINDINGS:") == "FINDINGS ");
}

TEST_CASE("clean_text preserves length and is idempotent") {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::string text = random_text(rng, 80);
        const std::string once = clean_text(text);
        CHECK(once.size() == text.size());
        CHECK(clean_text(once) == once);
        for (char c : once) {
            const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                            (c >= '0' && c <= '9') || c == ' ';
            CHECK(ok);
        }
    }
}

TEST_CASE("segment_sentences splits headers and delimiter-attached sentences") {
    const auto sentences = segment_sentences("FINDINGS: No fracture. Lungs clear.");
    REQUIRE(sentences.size() == 3);
    CHECK(sentences[0].text == "FINDINGS:");
    CHECK(sentences[1].text == "No fracture.");
    CHECK(sentences[2].text == "Lungs clear.");
    CHECK(sentences[0].begin == 0);
    CHECK(sentences[0].end == 9);
    CHECK(sentences[1].begin == 10);
    CHECK(sentences[2].index == 2);
}

TEST_CASE("segment_sentences newline runs and decimal points") {
    CHECK(segment_sentences("one\n\ntwo").size() == 2);
    const auto nodule = segment_sentences("3.5 cm nodule.");
    REQUIRE(nodule.size() == 1);
    CHECK(nodule[0].text == "3.5 cm nodule.");
    CHECK(segment_sentences("").empty());
    CHECK(segment_sentences("   \n\n  \t ").empty());
}

TEST_CASE("segmentation spans reproduce the raw text and cover all non-whitespace") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::string text = random_text(rng, 120);
        const auto sentences = segment_sentences(text);
        std::vector<bool> covered(text.size(), false);
        int index = 0;
        std::size_t prev_end = 0;
        for (const Sentence& s : sentences) {
            REQUIRE(s.begin < s.end);
            REQUIRE(s.end <= text.size());
            CHECK(text.substr(s.begin, s.end - s.begin) == s.text);
            CHECK(s.index == index++);
            if (s.index > 0) CHECK(s.begin >= prev_end);
            prev_end = s.end;
            for (std::size_t i = s.begin; i < s.end; ++i) covered[i] = true;
            // no sentence boundary hides inside a span
            for (std::size_t i = s.begin; i + 1 < s.end; ++i) {
                CHECK(s.text[i - s.begin] != '\n');
                if (text[i] == '.' || text[i] == ':')
                    CHECK_FALSE(std::isspace(static_cast<unsigned char>(text[i + 1])));
            }
        }
        for (std::size_t i = 0; i < text.size(); ++i)
            if (!covered[i]) CHECK(std::isspace(static_cast<unsigned char>(text[i])));
    }
}

TEST_CASE("tokenize looks up lowercased cleaned tokens") {
    const Vocabulary vocab({"no", "fracture"});
    const auto tokens = tokenize(sentence_of("No fracture."), vocab);
    REQUIRE(tokens.tokens.size() == 2);
    CHECK(tokens.tokens[0] == "no");
    CHECK(tokens.tokens[1] == "fracture");
    CHECK(tokens.token_ids == std::vector<int>{vocab.id_of("no"), vocab.id_of("fracture")});
    CHECK(tokens.raw.text == "No fracture.");
}

TEST_CASE("tokenize PAD and UNK conventions") {
    const Vocabulary vocab({"chest", "clear"});
    const auto empty = tokenize(sentence_of(""), vocab);
    CHECK(empty.tokens.empty());
    CHECK(empty.token_ids == std::vector<int>{kPadId});

    const auto unk = tokenize(sentence_of("qzxv"), vocab);
    CHECK(unk.token_ids == std::vector<int>{kUnkId});

    CHECK(tokenize_empty().token_ids == std::vector<int>{kPadId});
}

TEST_CASE("tokenize never produces out-of-range ids") {
    const Vocabulary vocab({"alpha", "beta"});
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto ts = tokenize(sentence_of(random_text(rng, 60)), vocab);
        CHECK_FALSE(ts.token_ids.empty());
        for (int id : ts.token_ids) {
            CHECK(id >= 0);
            CHECK(id < vocab.size());
        }
        if (!ts.tokens.empty()) CHECK(ts.tokens.size() == ts.token_ids.size());
    }
}

TEST_CASE("build_vocab applies the frequency threshold and reserved ids") {
    Report report;
    report.raw_text = "chest chest chest chest chest rare";
    report.sentences.push_back({report.raw_text, 0, report.raw_text.size(), 0});

    const Vocabulary v2 = build_vocab({report}, 2);
    CHECK(v2.size() == 3);  // PAD, UNK, chest
    CHECK(v2.id_of("chest") == 2);
    CHECK(v2.id_of("rare") == kUnkId);

    const Vocabulary v1 = build_vocab({report}, 1);
    CHECK(v1.size() == 4);
    CHECK(v1.id_of("chest") == 2);  // higher frequency first
    CHECK(v1.id_of("rare") == 3);
}

TEST_CASE("build_vocab is deterministic and orders ties lexicographically") {
    Report report;
    report.raw_text = "beta alpha beta alpha";
    report.sentences.push_back({report.raw_text, 0, report.raw_text.size(), 0});
    const Vocabulary a = build_vocab({report}, 1);
    const Vocabulary b = build_vocab({report}, 1);
    CHECK(a.tokens() == b.tokens());
    CHECK(a.id_of("alpha") == 2);  // equal counts, lexicographic
    CHECK(a.id_of("beta") == 3);

    CHECK(build_vocab({}, 1).size() == 2);  // PAD + UNK only
}

TEST_CASE("vocabulary file round-trips with implicit PAD/UNK") {
    const Vocabulary vocab({"lungs", "clear", "effusion"});
    const std::string path = "vocab_test.txt";
    vocab.save(path);
    const Vocabulary loaded = Vocabulary::load(path);
    CHECK(loaded.tokens() == vocab.tokens());
    CHECK(loaded.id_of("lungs") == 2);
    CHECK(loaded.hash() == vocab.hash());
    std::remove(path.c_str());
}
