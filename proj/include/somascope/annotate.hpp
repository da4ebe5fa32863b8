#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace somascope {

/// Emotions rated by crowd annotators.
enum class RatedEmotion : std::uint8_t { joy, fear, sadness, anger, disgust, trust };
inline constexpr std::size_t kRatedEmotionCount = 6;

[[nodiscard]] std::string_view rated_emotion_name(RatedEmotion e) noexcept;
/// Accepts the six names plus the alias "fear/anxiety".
[[nodiscard]] std::optional<RatedEmotion> parse_rated_emotion(std::string_view name) noexcept;

inline constexpr int kMaxRating = 4;  // no / slight / moderate / high / very high

struct RatingRecord {
  std::string item_id;
  std::string annotator_id;
  RatedEmotion emotion = RatedEmotion::joy;
  int rating = 0;
};

struct AggregatedLabel {
  std::string item_id;
  RatedEmotion emotion = RatedEmotion::joy;
  double mean_rating = 0.0;
  bool present = false;
  std::size_t n_raters = 0;
};

/// CSV with header `item_id,annotator_id,emotion,rating`.
[[nodiscard]] std::vector<RatingRecord> load_ratings_csv(const std::filesystem::path &path);
[[nodiscard]] std::vector<RatingRecord> parse_ratings_csv(std::string_view content,
                                                          const std::string &source = "<memory>");

inline constexpr double kDefaultPresenceThreshold = 1.5;

/// Mean rating per (item, emotion); present iff mean >= threshold. Output is
/// sorted by item then emotion. Throws DataError on a repeated
/// (item, annotator, emotion) triple or a rating outside 0..4.
[[nodiscard]] std::vector<AggregatedLabel> aggregate(const std::vector<RatingRecord> &records,
                                                     double presence_threshold = kDefaultPresenceThreshold);

/// Equal-width bin over [0, 4] of the mean `sum / count`, computed exactly.
[[nodiscard]] int rating_bin(long sum, long count, int n_bins) noexcept;

struct ShcmpResult {
  double value = 0.0;  // percent
  int n_bins = 0;
  std::size_t n_trials = 0;
  std::uint64_t seed = 0;
  std::size_t units = 0;     // (item, emotion) pairs scored
  std::size_t excluded = 0;  // pairs with fewer than two raters
};

/// Split-half class match percentage. Each trial shuffles every unit's raters,
/// splits them in half (an odd rater joins a uniformly chosen half), bins both
/// halves' mean ratings and counts matching bins. Deterministic in `seed`.
[[nodiscard]] ShcmpResult shcmp(const std::vector<RatingRecord> &records, int n_bins, std::size_t n_trials = 1000,
                                std::uint64_t seed = 0);

/// Seed for trial `index`, derived from the run seed with splitmix64.
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace somascope
