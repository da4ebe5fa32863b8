#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "somascope/corpus.hpp"
#include "somascope/lexicon.hpp"

namespace somascope {

using DimensionArray = std::array<double, kDimensionCount>;

/// Share of a class's instances with at least one word on each dimension.
struct EmotionProfile {
  std::string label;
  DimensionArray proportions{};
  std::uint64_t n = 0;
};

struct ProfileSet {
  std::vector<EmotionProfile> profiles;
  std::vector<std::string> notices;  // classes omitted for lack of instances
};

inline const std::vector<BpmClass> kProfileClasses = {BpmClass::my, BpmClass::your, BpmClass::third, BpmClass::nobpm};

/// Proportions for a single class of one slice; nullopt when the class is empty.
[[nodiscard]] std::optional<EmotionProfile> slice_profile(const SliceStats &slice, BpmClass cls);

[[nodiscard]] ProfileSet class_profiles(const CorpusStats &stats,
                                        const std::vector<BpmClass> &classes = kProfileClasses);

struct TypeDelta {
  std::string term;
  std::uint64_t n = 0;
  DimensionArray proportions{};
  DimensionArray deltas{};  // proportion minus the unweighted mean over reported types
};

struct DeltaReport {
  DimensionArray mean{};
  DimensionArray std_dev{};  // population form
  std::vector<TypeDelta> types;  // descending by n, ties by term
};

/// Emotion deltas of myBPM types with at least `min_count` instances. When
/// `max_types` > 0 only the most frequent qualifying types enter the mean.
/// Throws DataError when fewer than two types qualify.
[[nodiscard]] DeltaReport per_type_deltas(const CorpusStats &stats, std::uint64_t min_count = 100,
                                          std::size_t max_types = 0);

struct TypeShare {
  std::string term;
  std::uint64_t count = 0;
  double share_percent = 0.0;
};

/// Most frequent canonical types in a class, share relative to all instances
/// of that class's types. Throws DataError when k <= 0.
[[nodiscard]] std::vector<TypeShare> top_types(const CorpusStats &stats, BpmClass cls, long k);

struct LengthRow {
  BpmClass cls = BpmClass::bpm;
  std::uint64_t n = 0;
  double mean_chars = 0.0;
  double mean_tokens = 0.0;
};

struct LengthReport {
  std::vector<LengthRow> rows;
  std::optional<double> char_ratio;   // BPM mean / NOBPM mean
  std::optional<double> token_ratio;
};

[[nodiscard]] LengthReport length_report(const CorpusStats &stats);

struct BinnedProfile {
  std::string bin;
  EmotionProfile profile;  // label = class name
  BpmClass cls = BpmClass::my;
};

/// Per word-count bin proportions for each class, in bin order then class order.
[[nodiscard]] std::vector<BinnedProfile> binned_profiles(const CorpusStats &stats,
                                                         const std::vector<BpmClass> &classes = {BpmClass::my,
                                                                                                 BpmClass::nobpm});

struct DiversityRow {
  BpmClass cls = BpmClass::my;
  std::size_t types_above = 0;
  std::size_t types_total = 0;
};

/// Number of canonical types whose share of the class exceeds `threshold`.
[[nodiscard]] std::vector<DiversityRow> type_diversity(const CorpusStats &stats, double threshold = 0.001);

struct LexiconGroupProfile {
  std::string group;
  std::size_t words = 0;          // group size (non-BP: entries of either lexicon)
  std::size_t in_emotion = 0;     // group words present in the emotion lexicon
  std::size_t in_vad = 0;         // group words present in the VAD lexicon
  std::array<double, 3> mean_vad{};  // valence, arousal, dominance
  std::array<double, kEmotionCount> emotion_rate{};  // over words in the emotion lexicon
};

/// Lexicon statistics for frequent BP words, all BP words and non-BP words.
/// Throws DataError naming any group with no entry in one of the lexicons.
[[nodiscard]] std::vector<LexiconGroupProfile> lexicon_profile_of_bp_words(const BodyPartLexicon &bp,
                                                                           const EmotionLexicon &emo,
                                                                           const VadLexicon &vad,
                                                                           const std::set<std::string> &frequent);

struct PrevalenceRow {
  std::string group;
  std::uint64_t total = 0;
  ClassCounts counts{};
};

/// Percent of `denominator` instances that fall in `cls`; 0 when empty.
[[nodiscard]] double percent(std::uint64_t count, std::uint64_t denominator) noexcept;

/// Rows for every group of `kind` in natural order (months and weekdays
/// numerically, length bins by edge, everything else lexicographically).
[[nodiscard]] std::vector<PrevalenceRow> prevalence_by_group(const CorpusStats &stats, GroupKind kind);

}  // namespace somascope
