#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "somascope/lexicon.hpp"
#include "somascope/textscan.hpp"

namespace somascope {

enum class Medium : std::uint8_t { blog, tweet };

struct CivilDate {
  int year = 1970;
  unsigned month = 1;  // 1..12
  unsigned day = 1;    // 1..31

  friend bool operator==(const CivilDate &, const CivilDate &) = default;
};

/// Parses the calendar date of an ISO-8601 date or date-time. The date fields
/// are taken as written; any UTC offset is validated but not applied.
[[nodiscard]] std::optional<CivilDate> parse_iso8601_date(std::string_view s);

/// ISO weekday, Monday = 1 ... Sunday = 7.
[[nodiscard]] unsigned iso_weekday(const CivilDate &d) noexcept;

struct Instance {
  std::string id;
  std::string text;
  Medium medium = Medium::tweet;
  std::optional<CivilDate> date;
  std::optional<std::string> city;
  std::optional<std::string> country;
};

/// Rule-based sentence segmenter: splits after runs of `.`, `!`, `?` (plus
/// trailing closing quotes/brackets) that are followed by whitespace or the
/// end of text, except after listed abbreviations.
class SentenceSplitter {
 public:
  SentenceSplitter() = default;
  explicit SentenceSplitter(std::vector<std::string> abbreviations);

  /// Uses `abbreviations.txt` from the data directory.
  static const SentenceSplitter &bundled();

  [[nodiscard]] std::vector<std::string> split(std::string_view text) const;

 private:
  [[nodiscard]] bool is_abbreviation(std::string_view text, std::size_t period_pos) const;

  std::unordered_set<std::string, StringHash, std::equal_to<>> abbreviations_;
};

[[nodiscard]] std::vector<std::string> sentence_split(std::string_view text);

struct IngestTally {
  std::uint64_t records = 0;    // well-formed records
  std::uint64_t instances = 0;  // instances emitted
  std::uint64_t errors = 0;     // malformed lines skipped

  friend bool operator==(const IngestTally &, const IngestTally &) = default;
};

/// Decodes one JSONL record; nullopt if the record fails the schema.
[[nodiscard]] std::optional<std::vector<Instance>> parse_record(std::string_view line,
                                                                const SentenceSplitter &splitter);

/// Reads JSONL from `in`, handing every instance to `sink`. Blank lines are
/// ignored. Throws Error on stream failure.
IngestTally ingest(std::istream &in, const std::function<void(Instance &&)> &sink,
                   const SentenceSplitter &splitter = SentenceSplitter::bundled());

// ---------------------------------------------------------------------------
// Statistics

/// Instance classes. THIRD is the union of HIS, HER and THEIR; POSSESSED the
/// union of all five possessive classes.
enum class BpmClass : std::uint8_t { bpm, nobpm, my, your, his, her, their, third, possessed };
inline constexpr std::size_t kClassCount = 9;

[[nodiscard]] std::string_view class_name(BpmClass c) noexcept;
[[nodiscard]] std::optional<BpmClass> parse_class(std::string_view name) noexcept;
[[nodiscard]] BpmClass class_of(Possession p) noexcept;

using ClassCounts = std::array<std::uint64_t, kClassCount>;

/// Counters for one slice of the corpus (the whole corpus or one group).
struct SliceStats {
  std::uint64_t total = 0;
  ClassCounts per_class{};
  /// [class][dimension] -> instances of the class with >= 1 word on that dimension.
  std::array<std::array<std::uint64_t, kDimensionCount>, kClassCount> emotion_by_class{};
  ClassCounts char_sum{};
  ClassCounts token_sum{};

  void add(const InstanceAnnotation &ann);
  SliceStats &operator+=(const SliceStats &other);
  [[nodiscard]] std::uint64_t count(BpmClass c) const noexcept { return per_class[static_cast<std::size_t>(c)]; }

  friend bool operator==(const SliceStats &, const SliceStats &) = default;
};

enum class GroupKind : std::uint8_t { month, year_month, weekday, city, country, year_country, length_bin };
inline constexpr std::size_t kGroupKindCount = 7;

[[nodiscard]] std::string_view group_kind_name(GroupKind k) noexcept;
[[nodiscard]] std::optional<GroupKind> parse_group_kind(std::string_view name) noexcept;

/// Word-count bin label: (0,10], (10,20], ...; zero tokens map to "[0,0]".
[[nodiscard]] std::string length_bin_label(std::size_t token_count);
/// Lower edge of a bin label, for ordering. "[0,0]" sorts first.
[[nodiscard]] long length_bin_order(std::string_view label) noexcept;

struct GroupKey {
  GroupKind kind = GroupKind::month;
  std::string value;

  friend auto operator<=>(const GroupKey &, const GroupKey &) = default;
};

/// Per-type counters: canonical term -> instances per class (NOBPM unused).
using TypeCounts = std::map<std::string, ClassCounts, std::less<>>;

/// Mergeable corpus statistics; every report derives from this.
struct CorpusStats {
  std::uint64_t ingest_errors = 0;
  SliceStats global;
  std::array<std::uint64_t, kPossessionCount> mention_counts{};
  TypeCounts per_type;
  std::map<GroupKey, SliceStats> per_group;
  /// canonical myBPM term -> dimension -> instances with >= 1 word on it.
  std::map<std::string, std::array<std::uint64_t, kDimensionCount>, std::less<>> my_type_emotions;
  /// canonical myBPM term -> context word -> instances where both occur.
  std::map<std::string, std::map<std::string, std::uint64_t, std::less<>>, std::less<>> cooccur;

  [[nodiscard]] std::uint64_t total_instances() const noexcept { return global.total; }

  void add(const Instance &inst, const InstanceAnnotation &ann, const std::vector<Token> &tokens,
           const std::unordered_set<std::string, StringHash, std::equal_to<>> *stopwords);

  CorpusStats &operator+=(const CorpusStats &other);

  friend bool operator==(const CorpusStats &, const CorpusStats &) = default;
};

[[nodiscard]] CorpusStats merge(const CorpusStats &a, const CorpusStats &b);

/// Everything a scan needs besides the instances.
struct ScanContext {
  Lexicons lexicons;
  const std::unordered_set<std::string, StringHash, std::equal_to<>> *stopwords = nullptr;
};

[[nodiscard]] CorpusStats scan_one(const Instance &inst, const ScanContext &ctx);

/// Annotates every instance; `threads` > 1 splits the input into contiguous
/// chunks scanned in parallel and merged.
[[nodiscard]] CorpusStats scan(std::span<const Instance> instances, const ScanContext &ctx, unsigned threads = 1);

/// Streams JSONL through the scanner in batches.
[[nodiscard]] CorpusStats scan_stream(std::istream &in, const ScanContext &ctx, unsigned threads = 1,
                                      const SentenceSplitter &splitter = SentenceSplitter::bundled(),
                                      IngestTally *tally = nullptr);

/// Violations of the partition identities, one message each; empty when valid.
[[nodiscard]] std::vector<std::string> check_invariants(const CorpusStats &stats);

// JSON checkpoint format ("somascope.corpus_stats/1").
[[nodiscard]] std::string stats_to_json(const CorpusStats &stats);
[[nodiscard]] CorpusStats stats_from_json(std::string_view json);

}  // namespace somascope
