#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "somascope/corpus.hpp"
#include "somascope/lexicon.hpp"

namespace testsupport {

inline std::filesystem::path data_path(const std::string &name) {
  return std::filesystem::path(SOMASCOPE_TEST_DATA_DIR) / name;
}

inline std::filesystem::path bundled_path(const std::string &name) {
  return std::filesystem::path(SOMASCOPE_BUNDLED_DATA_DIR) / name;
}

using WordSet = std::unordered_set<std::string, somascope::StringHash, std::equal_to<>>;

// The bundled 5 000-instance fixture plus the lexicons it was built against.
struct Fixture {
  somascope::BodyPartLexicon bp = somascope::load_bp_terms(bundled_path("bp_terms.txt"));
  somascope::EmotionLexicon emo = somascope::load_emotion_lexicon(data_path("emotion_lexicon.tsv"));
  somascope::VadLexicon vad = somascope::load_vad_lexicon(data_path("vad_lexicon.tsv"));
  WordSet stopwords;
  std::vector<somascope::Instance> instances;
  somascope::IngestTally tally;

  Fixture() {
    const auto words = somascope::load_word_list(bundled_path("stopwords.txt"));
    stopwords.insert(words.begin(), words.end());
    std::ifstream in(data_path("fixture_corpus.jsonl"), std::ios::binary);
    tally = somascope::ingest(in, [this](somascope::Instance &&i) { instances.push_back(std::move(i)); });
  }

  [[nodiscard]] somascope::ScanContext context() const {
    somascope::ScanContext ctx;
    ctx.lexicons.body_parts = &bp;
    ctx.lexicons.emotions = &emo;
    ctx.lexicons.vad = &vad;
    ctx.stopwords = &stopwords;
    return ctx;
  }

  static const Fixture &get() {
    static const Fixture f;
    return f;
  }
};

}  // namespace testsupport
