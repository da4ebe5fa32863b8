// somascope command-line driver: scan a corpus once, then derive reports from
// the checkpointed statistics.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"
#include "somascope/affect.hpp"
#include "somascope/annotate.hpp"
#include "somascope/corpus.hpp"
#include "somascope/error.hpp"
#include "somascope/healthcorr.hpp"
#include "somascope/lexicon.hpp"
#include "somascope/report.hpp"
#include "somascope/strings.hpp"

namespace fs = std::filesystem;
using namespace somascope;

namespace {

// Thrown for flag combinations CLI11 cannot express.
struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string input;
  std::string bp_lexicon;
  std::string emotion_lexicon;
  std::string vad_lexicon;
  std::optional<double> vad_hi;
  std::optional<double> vad_lo;
  std::string health;
  std::string ratings;
  std::uint64_t min_count = 100;
  std::size_t max_delta_types = 0;
  double diversity_threshold = 0.001;
  double presence_threshold = kDefaultPresenceThreshold;
  long top_k = 20;
  unsigned month_anchor = 4;
  unsigned weekday_anchor = 1;
  std::string bins = "2-10";
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
  std::string format = "csv";
  std::vector<std::string> reports;
  std::vector<std::string> features;
};

// The hash covers flags and input *contents*, so moving files does not change it.
class ConfigHasher {
 public:
  explicit ConfigHasher(std::string command) : text_(std::move(command)) {}

  void flag(std::string_view name, const std::string &value) {
    text_ += '\n';
    text_ += name;
    text_ += '=';
    text_ += value;
  }
  void file(std::string_view name, const std::string &path) {
    if (!path.empty()) flag(name, fnv1a_hex(read_file(path)));
  }
  [[nodiscard]] std::string hex() const { return fnv1a_hex(text_); }

 private:
  std::string text_;
};

OutputFormat output_format(const std::string &s) { return s == "json" ? OutputFormat::json : OutputFormat::csv; }

fs::path output_dir(const std::string &out) {
  const fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
  return dir;
}

CorpusStats load_stats(const std::string &path) { return stats_from_json(read_file(path)); }

void emit(const std::vector<Table> &tables, const RunMeta &meta, const Options &o) {
  const auto dir = output_dir(o.out);
  for (const auto &t : tables) std::cout << write_table(t, meta, dir, output_format(o.format)).string() << '\n';
}

std::vector<int> parse_bins(const std::string &spec) {
  std::vector<int> bins;
  for (const auto &part : split(spec, ',')) {
    const auto piece = std::string(trim(part));
    const auto dash = piece.find('-', 1);
    double lo = 0;
    double hi = 0;
    const bool ok = dash == std::string::npos
                        ? parse_double(piece, lo) && ((hi = lo), true)
                        : parse_double(piece.substr(0, dash), lo) && parse_double(piece.substr(dash + 1), hi);
    if (!ok || lo != static_cast<int>(lo) || hi != static_cast<int>(hi) || lo < 2 || hi < lo) {
      throw UsageError("--bins: expected integers >= 2 such as '2-10' or '2,5', got '" + piece + "'");
    }
    for (int b = static_cast<int>(lo); b <= static_cast<int>(hi); ++b) bins.push_back(b);
  }
  if (bins.empty()) throw UsageError("--bins is empty");
  return bins;
}

// ---------------------------------------------------------------------------

int cmd_scan(const Options &o) {
  if (o.vad_lexicon.empty() && (o.vad_hi || o.vad_lo)) {
    throw UsageError("--vad-hi/--vad-lo require --vad-lexicon");
  }
  const double hi = o.vad_hi.value_or(VadLexicon::kDefaultHigh);
  const double lo = o.vad_lo.value_or(VadLexicon::kDefaultLow);
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) throw UsageError("need 0 <= --vad-lo < --vad-hi <= 1");
  if (o.threads == 0) throw UsageError("--threads must be positive");

  const auto bp = load_bp_terms(o.bp_lexicon);
  std::optional<EmotionLexicon> emo;
  std::optional<VadLexicon> vad;
  if (!o.emotion_lexicon.empty()) emo = load_emotion_lexicon(o.emotion_lexicon);
  if (!o.vad_lexicon.empty()) vad = load_vad_lexicon(o.vad_lexicon, hi, lo);
  const auto words = load_word_list(data_dir() / "stopwords.txt");
  const std::unordered_set<std::string, StringHash, std::equal_to<>> stopwords(words.begin(), words.end());

  ScanContext ctx;
  ctx.lexicons.body_parts = &bp;
  ctx.lexicons.emotions = emo ? &*emo : nullptr;
  ctx.lexicons.vad = vad ? &*vad : nullptr;
  ctx.stopwords = &stopwords;

  std::ifstream in(o.input, std::ios::binary);
  if (!in) throw Error("cannot open " + o.input);
  IngestTally tally;
  const auto stats = scan_stream(in, ctx, o.threads, SentenceSplitter::bundled(), &tally);
  if (tally.errors > 0) std::cerr << "scan: skipped " << tally.errors << " malformed record(s)\n";

  const auto json = stats_to_json(stats);
  if (o.out.empty() || o.out == "-") {
    std::cout << json;
  } else {
    std::ofstream out(o.out, std::ios::binary | std::ios::trunc);
    if (!out || !(out << json)) throw Error("cannot write " + o.out);
  }
  return 0;
}

int cmd_report(const Options &o, const RunMeta &meta) {
  const auto &known = report_names();
  std::vector<std::string> names = o.reports.empty() ? known : o.reports;
  for (const auto &n : names) {
    if (std::find(known.begin(), known.end(), n) == known.end()) throw UsageError("unknown report '" + n + "'");
  }
  if (o.min_count == 0) throw UsageError("--min-count must be positive");
  if (o.top_k <= 0) throw UsageError("--top-k must be positive");
  if (o.month_anchor < 1 || o.month_anchor > 12) throw UsageError("--month-anchor must be 1-12");
  if (o.weekday_anchor < 1 || o.weekday_anchor > 7) throw UsageError("--weekday-anchor must be 1-7");
  const int lexicon_flags = !o.bp_lexicon.empty() + !o.emotion_lexicon.empty() + !o.vad_lexicon.empty();
  if (lexicon_flags != 0 && lexicon_flags != 3) {
    throw UsageError("the lexicon report needs --bp-lexicon, --emotion-lexicon and --vad-lexicon together");
  }
  if (o.reports.empty() && lexicon_flags == 0) names.erase(std::find(names.begin(), names.end(), "lexicon"));

  const auto stats = load_stats(o.input);
  ReportOptions opt;
  opt.min_count = o.min_count;
  opt.max_delta_types = o.max_delta_types;
  opt.diversity_threshold = o.diversity_threshold;
  opt.top_k = o.top_k;
  opt.month_anchor = o.month_anchor;
  opt.weekday_anchor = o.weekday_anchor;

  std::optional<BodyPartLexicon> bp;
  std::optional<EmotionLexicon> emo;
  std::optional<VadLexicon> vad;
  ReportLexicons lex;
  if (lexicon_flags == 3) {
    bp = load_bp_terms(o.bp_lexicon);
    emo = load_emotion_lexicon(o.emotion_lexicon);
    vad = load_vad_lexicon(o.vad_lexicon, o.vad_hi.value_or(VadLexicon::kDefaultHigh),
                           o.vad_lo.value_or(VadLexicon::kDefaultLow));
    lex = {&*bp, &*emo, &*vad};
  }
  std::vector<Table> tables;
  for (const auto &n : names) {
    auto built = build_report(n, stats, opt, lex);
    tables.insert(tables.end(), built.begin(), built.end());
  }
  emit(tables, meta, o);
  return 0;
}

int cmd_correlate(const Options &o, const RunMeta &meta) {
  std::vector<CityFeature> features;
  if (o.features.empty()) {
    features = default_city_features();
  } else {
    try {
      for (const auto &f : o.features) features.push_back(CityFeature::parse(f));
    } catch (const ConfigError &e) {
      throw UsageError(e.what());
    }
  }
  const auto stats = load_stats(o.input);
  const auto health = load_health_csv(o.health);
  emit({correlation_table(correlate(stats, health, features))}, meta, o);
  return 0;
}

int cmd_shcmp(const Options &o, const RunMeta &meta) {
  const auto bins = parse_bins(o.bins);
  if (o.trials == 0) throw UsageError("--trials must be positive");
  const auto records = load_ratings_csv(o.ratings);
  std::vector<ShcmpResult> results;
  for (int b : bins) results.push_back(shcmp(records, b, o.trials, o.seed));
  emit({shcmp_table(results)}, meta, o);
  return 0;
}

int cmd_aggregate(const Options &o, const RunMeta &meta) {
  const auto records = load_ratings_csv(o.ratings);
  emit({aggregate_table(aggregate(records, o.presence_threshold), o.presence_threshold)}, meta, o);
  return 0;
}

void add_format(CLI::App *cmd, Options &o) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Body part mentions and emotion in social media text"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Options o;

  auto *scan_cmd = app.add_subcommand("scan", "Annotate a JSONL corpus and write statistics JSON");
  scan_cmd->add_option("--input", o.input, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  scan_cmd->add_option("--bp-lexicon", o.bp_lexicon, "Body-part term list")->required()->check(CLI::ExistingFile);
  scan_cmd->add_option("--emotion-lexicon", o.emotion_lexicon, "Word-emotion TSV")->check(CLI::ExistingFile);
  scan_cmd->add_option("--vad-lexicon", o.vad_lexicon, "Word-VAD TSV")->check(CLI::ExistingFile);
  scan_cmd->add_option("--vad-hi", o.vad_hi, "High-pole threshold (default 0.67)");
  scan_cmd->add_option("--vad-lo", o.vad_lo, "Low-pole threshold (default 0.33)");
  scan_cmd->add_option("--threads", o.threads, "Scan threads");
  scan_cmd->add_option("--out", o.out, "Statistics file (stdout when omitted)");

  auto *report_cmd = app.add_subcommand("report", "Write report tables from statistics JSON");
  report_cmd->add_option("reports", o.reports, "Report names (default: all)");
  report_cmd->add_option("--input", o.input, "Statistics JSON")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--min-count", o.min_count, "Minimum instances for a per-type delta");
  report_cmd->add_option("--max-delta-types", o.max_delta_types, "Cap on types entering the delta mean (0 = all)");
  report_cmd->add_option("--diversity-threshold", o.diversity_threshold, "Share above which a type counts");
  report_cmd->add_option("--top-k", o.top_k, "Rows per class in the top types table");
  report_cmd->add_option("--month-anchor", o.month_anchor, "Month treated as offset 0 in the trend fit");
  report_cmd->add_option("--weekday-anchor", o.weekday_anchor, "ISO weekday treated as offset 0");
  report_cmd->add_option("--bp-lexicon", o.bp_lexicon, "Body-part term list")->check(CLI::ExistingFile);
  report_cmd->add_option("--emotion-lexicon", o.emotion_lexicon, "Word-emotion TSV")->check(CLI::ExistingFile);
  report_cmd->add_option("--vad-lexicon", o.vad_lexicon, "Word-VAD TSV")->check(CLI::ExistingFile);
  report_cmd->add_option("--vad-hi", o.vad_hi, "High-pole threshold");
  report_cmd->add_option("--vad-lo", o.vad_lo, "Low-pole threshold");
  report_cmd->add_option("--out", o.out, "Output directory");
  add_format(report_cmd, o);

  auto *corr_cmd = app.add_subcommand("correlate", "Rank-correlate city features with health metrics");
  corr_cmd->add_option("--input", o.input, "Statistics JSON")->required()->check(CLI::ExistingFile);
  corr_cmd->add_option("--health", o.health, "city,metric,value CSV")->required()->check(CLI::ExistingFile);
  corr_cmd->add_option("--feature", o.features, "City feature (repeatable; default: all)");
  corr_cmd->add_option("--out", o.out, "Output directory");
  add_format(corr_cmd, o);

  auto *shcmp_cmd = app.add_subcommand("shcmp", "Split-half class match percentage of annotator ratings");
  shcmp_cmd->add_option("--ratings", o.ratings, "Ratings CSV")->required()->check(CLI::ExistingFile);
  shcmp_cmd->add_option("--bins", o.bins, "Bin counts, e.g. 2-10 or 2,5");
  shcmp_cmd->add_option("--trials", o.trials, "Random splits per bin count");
  shcmp_cmd->add_option("--seed", o.seed, "Random seed");
  shcmp_cmd->add_option("--out", o.out, "Output directory");
  add_format(shcmp_cmd, o);

  auto *agg_cmd = app.add_subcommand("aggregate", "Mean rating and presence label per item and emotion");
  agg_cmd->add_option("--ratings", o.ratings, "Ratings CSV")->required()->check(CLI::ExistingFile);
  agg_cmd->add_option("--presence-threshold", o.presence_threshold, "Mean rating marking an emotion present");
  agg_cmd->add_option("--out", o.out, "Output directory");
  add_format(agg_cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto *cmd = app.get_subcommands().front();
    ConfigHasher hash(cmd->get_name());
    for (const auto *opt : cmd->get_options()) {
      if (opt->count() == 0 || opt->get_name() == "--help") continue;
      const auto &name = opt->get_name();
      if (name == "--input" || name.find("lexicon") != std::string::npos || name == "--health" ||
          name == "--ratings") {
        for (const auto &v : opt->results()) hash.file(name, v);
      } else if (name != "--out" && name != "--threads") {
        for (const auto &v : opt->results()) hash.flag(name, v);
      }
    }
    RunMeta meta{hash.hex(), o.seed};

    if (cmd == scan_cmd) return cmd_scan(o);
    if (cmd == report_cmd) return cmd_report(o, meta);
    if (cmd == corr_cmd) return cmd_correlate(o, meta);
    if (cmd == shcmp_cmd) return cmd_shcmp(o, meta);
    return cmd_aggregate(o, meta);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
