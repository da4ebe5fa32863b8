#include "somascope/annotate.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <tuple>

#include "somascope/error.hpp"
#include "somascope/lexicon.hpp"
#include "somascope/strings.hpp"

namespace somascope {

namespace {

constexpr std::array<std::string_view, kRatedEmotionCount> kRatedNames = {"joy",   "fear",    "sadness",
                                                                          "anger", "disgust", "trust"};

std::uint64_t splitmix64(std::uint64_t &state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Portable stream: splitmix64 with unbiased bounded draws.
class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
      const auto r = splitmix64(state_);
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

using UnitKey = std::pair<std::string, RatedEmotion>;

}  // namespace

std::string_view rated_emotion_name(RatedEmotion e) noexcept { return kRatedNames[static_cast<std::size_t>(e)]; }

std::optional<RatedEmotion> parse_rated_emotion(std::string_view name) noexcept {
  if (name == "fear/anxiety" || name == "anxiety") return RatedEmotion::fear;
  for (std::size_t i = 0; i < kRatedEmotionCount; ++i) {
    if (kRatedNames[i] == name) return static_cast<RatedEmotion>(i);
  }
  return std::nullopt;
}

std::vector<RatingRecord> parse_ratings_csv(std::string_view content, const std::string &source) {
  std::vector<RatingRecord> records;
  const auto lines = split_lines(content);
  std::vector<std::string> fields;
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    if (!parse_csv_line(lines[i], fields)) throw ParseError(source, i + 1, "unterminated quote");
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 4 || trim(fields[0]) != "item_id" || trim(fields[1]) != "annotator_id" ||
          trim(fields[2]) != "emotion" || trim(fields[3]) != "rating") {
        throw ParseError(source, i + 1, "expected header item_id,annotator_id,emotion,rating");
      }
      continue;
    }
    if (fields.size() != 4) throw ParseError(source, i + 1, "expected 4 fields");
    RatingRecord r;
    r.item_id = trim(fields[0]);
    r.annotator_id = trim(fields[1]);
    if (r.item_id.empty() || r.annotator_id.empty()) throw ParseError(source, i + 1, "empty identifier");
    const auto emotion = parse_rated_emotion(to_lower_ascii(trim(fields[2])));
    if (!emotion) throw ParseError(source, i + 1, "unknown emotion '" + std::string(trim(fields[2])) + "'");
    r.emotion = *emotion;
    const auto rating = trim(fields[3]);
    if (rating.size() != 1 || rating[0] < '0' || rating[0] > '0' + kMaxRating) {
      throw ParseError(source, i + 1, "rating must be an integer 0-4");
    }
    r.rating = rating[0] - '0';
    records.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(source, 1, "missing header");
  return records;
}

std::vector<RatingRecord> load_ratings_csv(const std::filesystem::path &path) {
  return parse_ratings_csv(read_file(path), path.string());
}

namespace {

// Ratings per (item, emotion), each list ordered by annotator id.
std::map<UnitKey, std::vector<int>> group_ratings(const std::vector<RatingRecord> &records) {
  std::map<std::tuple<std::string, RatedEmotion, std::string>, int> unique;
  for (const auto &r : records) {
    if (r.rating < 0 || r.rating > kMaxRating) {
      throw DataError("rating " + std::to_string(r.rating) + " outside 0-4 for item '" + r.item_id + "'");
    }
    if (!unique.emplace(std::make_tuple(r.item_id, r.emotion, r.annotator_id), r.rating).second) {
      throw DataError("duplicate rating for (item '" + r.item_id + "', annotator '" + r.annotator_id +
                      "', emotion '" + std::string(rated_emotion_name(r.emotion)) + "')");
    }
  }
  std::map<UnitKey, std::vector<int>> units;
  for (const auto &[key, rating] : unique) units[{std::get<0>(key), std::get<1>(key)}].push_back(rating);
  return units;
}

}  // namespace

std::vector<AggregatedLabel> aggregate(const std::vector<RatingRecord> &records, double presence_threshold) {
  std::vector<AggregatedLabel> out;
  for (const auto &[key, ratings] : group_ratings(records)) {
    long sum = 0;
    for (int r : ratings) sum += r;
    AggregatedLabel label;
    label.item_id = key.first;
    label.emotion = key.second;
    label.n_raters = ratings.size();
    label.mean_rating = static_cast<double>(sum) / static_cast<double>(ratings.size());
    label.present = label.mean_rating >= presence_threshold;
    out.push_back(std::move(label));
  }
  return out;
}

int rating_bin(long sum, long count, int n_bins) noexcept {
  // floor(mean / (4 / n_bins)) in integers; the top edge folds into the last bin.
  const long bin = (sum * n_bins) / (static_cast<long>(kMaxRating) * count);
  return static_cast<int>(std::min<long>(bin, n_bins - 1));
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t state = seed;
  const auto base = splitmix64(state);
  state = base ^ (index * 0xD1B54A32D192ED03ULL);
  return splitmix64(state);
}

ShcmpResult shcmp(const std::vector<RatingRecord> &records, int n_bins, std::size_t n_trials, std::uint64_t seed) {
  if (n_bins < 2) throw DataError("shcmp: n_bins must be at least 2");
  if (n_trials == 0) throw DataError("shcmp: n_trials must be positive");

  ShcmpResult result;
  result.n_bins = n_bins;
  result.n_trials = n_trials;
  result.seed = seed;

  std::vector<std::vector<int>> units;
  for (auto &[key, ratings] : group_ratings(records)) {
    if (ratings.size() < 2) {
      ++result.excluded;
    } else {
      units.push_back(std::move(ratings));
    }
  }
  if (units.empty()) throw DataError("shcmp: no (item, emotion) pair has two or more raters");
  result.units = units.size();

  double score_sum = 0.0;
  std::vector<int> shuffled;
  for (std::size_t t = 0; t < n_trials; ++t) {
    TrialRng rng(trial_seed(seed, t));
    std::size_t matches = 0;
    for (const auto &ratings : units) {
      shuffled = ratings;
      for (std::size_t i = shuffled.size() - 1; i > 0; --i) std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
      std::size_t first = shuffled.size() / 2;
      if (shuffled.size() % 2 == 1 && rng.below(2) == 1) ++first;
      long sum_a = 0;
      long sum_b = 0;
      for (std::size_t i = 0; i < shuffled.size(); ++i) (i < first ? sum_a : sum_b) += shuffled[i];
      const auto count_a = static_cast<long>(first);
      const auto count_b = static_cast<long>(shuffled.size() - first);
      if (rating_bin(sum_a, count_a, n_bins) == rating_bin(sum_b, count_b, n_bins)) ++matches;
    }
    score_sum += static_cast<double>(matches) / static_cast<double>(units.size());
  }
  result.value = 100.0 * score_sum / static_cast<double>(n_trials);
  return result;
}

}  // namespace somascope
