#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace somascope {

// Transparent hashing so lookups can take string_view without allocating.
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

/// Plutchik's eight categorical emotions, in lexicon column order.
enum class Emotion : std::uint8_t {
  anger,
  anticipation,
  disgust,
  fear,
  joy,
  sadness,
  surprise,
  trust,
};
inline constexpr std::size_t kEmotionCount = 8;

/// High/low poles of the valence, arousal and dominance dimensions.
enum class VadPole : std::uint8_t {
  high_valence,
  low_valence,
  high_arousal,
  low_arousal,
  high_dominance,
  low_dominance,
};
inline constexpr std::size_t kVadPoleCount = 6;

/// All reported affect dimensions: the 8 emotions followed by the 6 VAD poles.
inline constexpr std::size_t kDimensionCount = kEmotionCount + kVadPoleCount;

using EmotionSet = std::uint8_t;  // bit i set <=> Emotion(i)
using VadPoleSet = std::uint8_t;  // bit i set <=> VadPole(i)

[[nodiscard]] std::string_view emotion_name(Emotion e) noexcept;
[[nodiscard]] std::optional<Emotion> parse_emotion(std::string_view name) noexcept;
[[nodiscard]] std::string_view vad_pole_name(VadPole p) noexcept;
/// Dimension names used as report columns: emotions then VAD poles.
[[nodiscard]] std::string_view dimension_name(std::size_t dim);

[[nodiscard]] constexpr EmotionSet emotion_bit(Emotion e) noexcept {
  return static_cast<EmotionSet>(1U << static_cast<unsigned>(e));
}
[[nodiscard]] constexpr VadPoleSet vad_bit(VadPole p) noexcept {
  return static_cast<VadPoleSet>(1U << static_cast<unsigned>(p));
}

/// Links plural surface forms to singulars. Only irregular pairs are listed;
/// regular "+s"/"+es" pairs are recognised by rule.
class PluralTable {
 public:
  PluralTable() = default;
  explicit PluralTable(std::map<std::string, std::string, std::less<>> irregular)
      : irregular_(std::move(irregular)) {}

  /// TSV `plural<TAB>singular`, `#` comments allowed.
  static PluralTable load(const std::filesystem::path &path);
  /// The table shipped under the data directory.
  static PluralTable bundled();

  [[nodiscard]] std::optional<std::string_view> irregular_singular(std::string_view plural) const;
  [[nodiscard]] std::size_t size() const noexcept { return irregular_.size(); }

 private:
  std::map<std::string, std::string, std::less<>> irregular_;
};

/// Immutable set of body-part surface forms with their canonical singulars.
class BodyPartLexicon {
 public:
  BodyPartLexicon() = default;

  /// Builds from raw terms. Terms are trimmed and lowercased; duplicates dropped.
  /// Throws ConfigError when no term survives.
  static BodyPartLexicon from_terms(const std::vector<std::string> &raw_terms,
                                    const PluralTable &plurals);

  [[nodiscard]] bool contains(std::string_view term) const;
  /// Canonical form of a surface term, or nullopt if the term is unknown.
  [[nodiscard]] std::optional<std::string_view> canonical(std::string_view term) const;

  /// Sorted surface forms.
  [[nodiscard]] const std::vector<std::string> &terms() const noexcept { return sorted_; }
  [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }
  [[nodiscard]] std::size_t duplicates_dropped() const noexcept { return duplicates_; }

  /// One term per line, sorted; reloads to the same lexicon.
  [[nodiscard]] std::string serialize() const;

 private:
  std::unordered_map<std::string, std::string, StringHash, std::equal_to<>> canonical_of_;
  std::vector<std::string> sorted_;
  std::size_t duplicates_ = 0;
};

/// Loads a term list (one per line, `#` comments ignored).
BodyPartLexicon load_bp_terms(const std::filesystem::path &path,
                              const PluralTable &plurals = PluralTable::bundled());

/// Word to categorical-emotion associations.
class EmotionLexicon {
 public:
  [[nodiscard]] EmotionSet lookup(std::string_view word) const;
  [[nodiscard]] bool contains(std::string_view word) const;
  [[nodiscard]] std::size_t size() const noexcept { return assoc_.size(); }
  [[nodiscard]] const auto &entries() const noexcept { return assoc_; }

  void set(std::string word, EmotionSet emotions);
  void add(std::string_view word, std::optional<Emotion> emotion);

 private:
  std::unordered_map<std::string, EmotionSet, StringHash, std::equal_to<>> assoc_;
};

/// TSV `word<TAB>emotion<TAB>flag`. The NRC sentiment labels `positive` and
/// `negative` are accepted and ignored; any other unknown label is an error.
EmotionLexicon load_emotion_lexicon(const std::filesystem::path &path);
EmotionLexicon parse_emotion_lexicon(std::string_view content, const std::string &source = "<memory>");

struct VadScores {
  double valence = 0.0;
  double arousal = 0.0;
  double dominance = 0.0;
};

enum class VadLevel : std::uint8_t { low, neutral, high };

/// Word to (valence, arousal, dominance) scores plus binarization thresholds.
class VadLexicon {
 public:
  inline static constexpr double kDefaultHigh = 0.67;
  inline static constexpr double kDefaultLow = 0.33;

  /// Throws ConfigError unless 0 <= lo < hi <= 1.
  explicit VadLexicon(double hi = kDefaultHigh, double lo = kDefaultLow);

  [[nodiscard]] double hi_threshold() const noexcept { return hi_; }
  [[nodiscard]] double lo_threshold() const noexcept { return lo_; }

  [[nodiscard]] std::optional<VadScores> find(std::string_view word) const;
  [[nodiscard]] VadLevel binarize(double score) const noexcept;
  /// Poles hit by a word; empty if the word is unknown or neutral everywhere.
  [[nodiscard]] VadPoleSet poles(std::string_view word) const;
  [[nodiscard]] std::size_t size() const noexcept { return scores_.size(); }
  [[nodiscard]] const auto &entries() const noexcept { return scores_; }

  void set(std::string word, VadScores scores);

 private:
  double hi_;
  double lo_;
  std::unordered_map<std::string, VadScores, StringHash, std::equal_to<>> scores_;
};

/// TSV `word<TAB>v<TAB>a<TAB>d`; an optional header row starting with `word` is skipped.
VadLexicon load_vad_lexicon(const std::filesystem::path &path, double hi = VadLexicon::kDefaultHigh,
                            double lo = VadLexicon::kDefaultLow);
VadLexicon parse_vad_lexicon(std::string_view content, double hi, double lo,
                             const std::string &source = "<memory>");

/// Bundled resource directory: $SOMASCOPE_DATA_DIR if set, else the install default.
std::filesystem::path data_dir();

/// Reads a whole file; throws Error if it cannot be opened.
std::string read_file(const std::filesystem::path &path);

/// Splits into lines, dropping a trailing '\r' from each.
std::vector<std::string_view> split_lines(std::string_view content);

/// Reads a list file (one entry per line, `#` comments, blanks skipped), lowercased.
std::vector<std::string> load_word_list(const std::filesystem::path &path);

}  // namespace somascope
