#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "somascope/affect.hpp"
#include "somascope/annotate.hpp"
#include "somascope/corpus.hpp"
#include "somascope/healthcorr.hpp"

namespace somascope {

inline constexpr std::string_view kToolName = "somascope";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Provenance block written at the top of every output.
struct RunMeta {
  std::string config_hash;
  std::uint64_t seed = 0;
};

/// One table cell. Doubles carry the number of decimals used in CSV; JSON
/// always keeps full precision. Non-finite doubles render as empty / null.
struct Cell {
  std::variant<std::monostate, std::string, std::uint64_t, double, bool> value;
  int decimals = 4;

  Cell() = default;
  Cell(std::string s) : value(std::move(s)) {}  // NOLINT(google-explicit-constructor)
  Cell(const char *s) : value(std::string(s)) {}  // NOLINT(google-explicit-constructor)
  Cell(std::string_view s) : value(std::string(s)) {}  // NOLINT(google-explicit-constructor)
  Cell(std::uint64_t n) : value(n) {}  // NOLINT(google-explicit-constructor)
  Cell(bool b) : value(b) {}  // NOLINT(google-explicit-constructor)
  Cell(double d, int places) : value(d), decimals(places) {}

  static Cell pct(double d) { return {d, 1}; }
  static Cell prop(double d) { return {d, 4}; }
  static Cell real(double d) { return {d, 6}; }
  static Cell sci(double d) { return {d, -1}; }  // %.6g
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;
};

enum class OutputFormat { csv, json };

[[nodiscard]] std::string render_csv(const Table &table, const RunMeta &meta);
[[nodiscard]] std::string render_json(const Table &table, const RunMeta &meta);
/// Writes `<dir>/<table.name>.<csv|json>` and returns the path.
std::filesystem::path write_table(const Table &table, const RunMeta &meta, const std::filesystem::path &dir,
                                  OutputFormat format);

struct ReportOptions {
  std::uint64_t min_count = 100;      // per-type deltas
  std::size_t max_delta_types = 0;    // 0 = every qualifying type
  double diversity_threshold = 0.001;
  long top_k = 20;
  unsigned month_anchor = 4;          // April
  unsigned weekday_anchor = 1;        // Monday
  std::size_t cooccur_terms = 20;
  std::size_t cooccur_words = 20;
};

/// Report names accepted by build_report, in output order.
[[nodiscard]] const std::vector<std::string> &report_names();

/// Optional lexicons for the lexicon profile report.
struct ReportLexicons {
  const BodyPartLexicon *body_parts = nullptr;
  const EmotionLexicon *emotions = nullptr;
  const VadLexicon *vad = nullptr;
};

/// Builds the tables behind one report name (some reports yield several).
/// Throws ConfigError for an unknown name.
[[nodiscard]] std::vector<Table> build_report(const std::string &name, const CorpusStats &stats,
                                              const ReportOptions &options, const ReportLexicons &lexicons = {});

[[nodiscard]] Table correlation_table(const CorrelationTable &table);
[[nodiscard]] Table shcmp_table(const std::vector<ShcmpResult> &results);
[[nodiscard]] Table aggregate_table(const std::vector<AggregatedLabel> &labels, double presence_threshold);

/// 64-bit FNV-1a, rendered as 16 hex digits.
[[nodiscard]] std::string fnv1a_hex(std::string_view data);

}  // namespace somascope
