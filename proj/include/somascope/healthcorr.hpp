#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "somascope/corpus.hpp"
#include "somascope/inference.hpp"

namespace somascope {

struct HealthRecord {
  std::string city;  // normalized: trimmed, ASCII-lowercased
  std::string metric;
  double value = 0.0;
};

/// Trim and ASCII casefold; the only transformation applied before joining.
[[nodiscard]] std::string normalize_city(std::string_view city);

/// CSV with header `city,metric,value`.
[[nodiscard]] std::vector<HealthRecord> load_health_csv(const std::filesystem::path &path);
[[nodiscard]] std::vector<HealthRecord> parse_health_csv(std::string_view content,
                                                         const std::string &source = "<memory>");

/// A city-level feature drawn from the corpus.
struct CityFeature {
  enum class Kind { tweet_count, bpm_share, my_bpm_share, emotion_share };
  Kind kind = Kind::bpm_share;
  std::size_t dimension = 0;  // emotion_share only

  /// `tweet_count`, `bpm_share`, `my_bpm_share` or `emotion_share:<dimension>`.
  [[nodiscard]] static CityFeature parse(std::string_view name);
  [[nodiscard]] std::string name() const;
  [[nodiscard]] double value(const SliceStats &city) const;
};

/// The default feature list: counts, shares and one emotion share per dimension.
[[nodiscard]] std::vector<CityFeature> default_city_features();

struct CorrelationRow {
  std::string feature;
  std::string metric;
  CorrelationResult result;
  [[nodiscard]] bool significant() const noexcept { return result.p < 0.05; }
};

struct CorrelationTable {
  std::vector<CorrelationRow> rows;          // feature-major, metrics sorted
  std::vector<std::string> corpus_only;      // cities without health data
  std::vector<std::string> health_only;      // cities absent from the corpus
  std::vector<std::string> undefined;        // pairs with a constant side (rho NaN, p 1)
};

/// Spearman correlation of every (feature, metric) pair over the cities both
/// sources share. A pair with a constant side gets rho NaN and p 1. Throws
/// DataError when fewer than three cities overlap.
[[nodiscard]] CorrelationTable correlate(const CorpusStats &stats, const std::vector<HealthRecord> &health,
                                         const std::vector<CityFeature> &features);

}  // namespace somascope
