#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cctype>

#include "somascope/strings.hpp"
#include "somascope/textscan.hpp"
#include "support.hpp"

using namespace somascope;

namespace {

std::vector<std::string> texts(const std::vector<Token> &tokens) {
  std::vector<std::string> out;
  for (const auto &t : tokens) out.push_back(t.text);
  return out;
}

const BodyPartLexicon &lexicon() {
  static const auto lex = load_bp_terms(testsupport::bundled_path("bp_terms.txt"));
  return lex;
}

}  // namespace

TEST_CASE("tokenize strips outer punctuation and sigils") {
  CHECK(texts(tokenize("My back hurts!")) == std::vector<std::string>{"my", "back", "hurts"});
  CHECK(texts(tokenize("#sore... my neck, ugh")) == std::vector<std::string>{"sore", "my", "neck", "ugh"});
  CHECK(tokenize("").empty());
  CHECK(tokenize(" \t\n ").empty());
  CHECK(texts(tokenize("don't (stop) @Sam -- ok")) == std::vector<std::string>{"don't", "stop", "sam", "ok"});
}

TEST_CASE("tokenize handles Unicode whitespace and quotes") {
  // no-break space, ideographic space, curly quotes, ellipsis
  const auto toks = tokenize("“My Heart”　aches…");
  CHECK(texts(toks) == std::vector<std::string>{"my", "heart", "aches"});
  CHECK(texts(tokenize("CAFÉ Über")) == std::vector<std::string>{"café", "über"});
}

TEST_CASE("token offsets point into the original text") {
  const std::string text = "  (My) neck!";
  for (const auto &t : tokenize(text)) {
    CHECK(to_lower_ascii(text.substr(t.start, t.end - t.start)) == t.text);
  }
}

TEST_CASE("count_code_points") {
  CHECK(count_code_points("") == 0);
  CHECK(count_code_points("abc") == 3);
  CHECK(count_code_points("é…") == 2);
}

TEST_CASE("detect_bpms finds every lexicon token") {
  const auto spans = detect_bpms(tokenize("i will be back"), lexicon());
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].surface == "back");
  CHECK(detect_bpms(tokenize("great game tonight"), lexicon()).empty());

  const auto two = detect_bpms(tokenize("my heart my hearts"), lexicon());
  REQUIRE(two.size() == 2);
  CHECK(two[0].canonical == "heart");
  CHECK(two[1].canonical == "heart");
  CHECK(two[1].surface == "hearts");
  CHECK(two[1].token_index == 3);
}

TEST_CASE("possession uses the immediately preceding token") {
  const auto classify = [](const std::string &text) {
    const auto toks = tokenize(text);
    auto spans = detect_bpms(toks, lexicon());
    classify_possession(toks, spans);
    return spans;
  };
  auto s = classify("my back hurts");
  REQUIRE(s.size() == 1);
  CHECK(s[0].possession == Possession::my);
  s = classify("i will be back");
  CHECK(s[0].possession == Possession::none);
  s = classify("my left arm aches");
  REQUIRE(s.size() == 1);
  CHECK(s[0].surface == "arm");
  CHECK(s[0].possession == Possession::none);
  s = classify("Back hurts");
  CHECK(s[0].possession == Possession::none);
  s = classify("THEIR hands. His feet");
  REQUIRE(s.size() == 2);
  CHECK(s[0].possession == Possession::their);
  CHECK(s[1].possession == Possession::his);
}

TEST_CASE("annotate_instance combines spans and lexicon hits") {
  EmotionLexicon emo;
  emo.set("hurts", emotion_bit(Emotion::sadness));
  VadLexicon vad;
  vad.set("hurts", {0.1, 0.5, 0.9});
  const Lexicons lex{&lexicon(), &emo, &vad};

  const auto a = annotate_instance("x", "my stomach hurts", lex);
  CHECK(a.has_bpm);
  CHECK(a.possession_flags == possession_bit(Possession::my));
  CHECK(a.emotion_hits == emotion_bit(Emotion::sadness));
  CHECK(a.vad_hits == (vad_bit(VadPole::low_valence) | vad_bit(VadPole::high_dominance)));
  CHECK(a.token_count == 3);
  CHECK(a.char_count == 16);

  const auto empty = annotate_instance("e", "", lex);
  CHECK_FALSE(empty.has_bpm);
  CHECK(empty.spans.empty());
  CHECK(empty.possession_flags == 0);
  CHECK(empty.emotion_hits == 0);
  CHECK(empty.vad_hits == 0);
  CHECK(empty.token_count == 0);
  CHECK(empty.char_count == 0);

  const auto pair = annotate_instance("p", "your hands his hands", lex);
  CHECK(pair.possession_flags == (possession_bit(Possession::your) | possession_bit(Possession::his)));
}

TEST_CASE("annotation is case invariant and works without affect lexicons") {
  const Lexicons lex{&lexicon(), nullptr, nullptr};
  const std::string text = "Ugh, my Neck and your SHOULDERS #pain";
  std::string upper = text;
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  const auto a = annotate_instance("i", text, lex);
  const auto b = annotate_instance("i", upper, lex);
  CHECK(a == b);
  CHECK(a.spans.size() == 2);
  CHECK(a.emotion_hits == 0);
}
