#include "somascope/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "json.hpp"
#include "somascope/error.hpp"
#include "somascope/inference.hpp"
#include "somascope/strings.hpp"

namespace somascope {

using ojson = nlohmann::ordered_json;

namespace {

std::string format_double(double d, int decimals) {
  if (!std::isfinite(d)) return {};
  char buf[64];
  if (decimals < 0) {
    std::snprintf(buf, sizeof buf, "%.6g", d);
  } else {
    std::snprintf(buf, sizeof buf, "%.*f", decimals, d);
  }
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string cell_text(const Cell &c) {
  return std::visit(
      [&c](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return {};
        } else if constexpr (std::is_same_v<T, std::string>) {
          return csv_escape(v);
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return format_double(v, c.decimals);
        }
      },
      c.value);
}

ojson cell_json(const Cell &c) {
  return std::visit(
      [](const auto &v) -> ojson {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(v) ? ojson(v) : ojson(nullptr);
        } else {
          return v;
        }
      },
      c.value);
}

std::vector<std::string> dimension_columns(const std::string &prefix = {}) {
  std::vector<std::string> cols;
  for (std::size_t d = 0; d < kDimensionCount; ++d) cols.push_back(prefix + std::string(dimension_name(d)));
  return cols;
}

Table make_table(std::string name, std::vector<std::string> columns) {
  Table t;
  t.name = std::move(name);
  t.columns = std::move(columns);
  return t;
}

std::uint64_t count(const SliceStats &s, BpmClass c) { return s.count(c); }

const std::vector<BpmClass> kPossessionRows = {BpmClass::possessed, BpmClass::my,    BpmClass::your, BpmClass::his,
                                               BpmClass::her,       BpmClass::their, BpmClass::third};

// ---------------------------------------------------------------------------

std::vector<Table> report_b1(const CorpusStats &stats) {
  auto t = make_table("b1_prevalence", {"scope", "instances", "bpm", "bpm_pct", "nobpm", "nobpm_pct"});
  if (stats.total_instances() > 0) {
    const auto &g = stats.global;
    t.rows.push_back({"all", g.total, count(g, BpmClass::bpm), Cell::pct(percent(count(g, BpmClass::bpm), g.total)),
                      count(g, BpmClass::nobpm), Cell::pct(percent(count(g, BpmClass::nobpm), g.total))});
  }
  return {t};
}

std::vector<Table> report_b2(const CorpusStats &stats) {
  auto t = make_table("b2_possession", {"class", "instances", "pct_of_bpm", "pct_of_all", "mentions"});
  const auto &g = stats.global;
  if (count(g, BpmClass::bpm) > 0) {
    for (auto c : kPossessionRows) {
      Cell mentions;
      if (c != BpmClass::possessed && c != BpmClass::third) {
        for (std::size_t p = 1; p < kPossessionCount; ++p) {
          if (class_of(static_cast<Possession>(p)) == c) mentions = Cell(stats.mention_counts[p]);
        }
      } else {
        std::uint64_t m = 0;
        for (std::size_t p = 1; p < kPossessionCount; ++p) {
          const auto cls = class_of(static_cast<Possession>(p));
          if (c == BpmClass::possessed || cls == BpmClass::his || cls == BpmClass::her || cls == BpmClass::their) {
            m += stats.mention_counts[p];
          }
        }
        mentions = Cell(m);
      }
      t.rows.push_back({class_name(c), count(g, c), Cell::pct(percent(count(g, c), count(g, BpmClass::bpm))),
                        Cell::pct(percent(count(g, c), g.total)), mentions});
    }
  }
  return {t};
}

std::vector<Table> report_b3(const CorpusStats &stats, const ReportOptions &opt) {
  auto t = make_table("b3_top_types", {"class", "rank", "term", "instances", "share_pct"});
  for (auto c : {BpmClass::my, BpmClass::your, BpmClass::third}) {
    const auto rows = top_types(stats, c, opt.top_k);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      t.rows.push_back({class_name(c), std::uint64_t{i + 1}, rows[i].term, rows[i].count,
                        Cell::pct(rows[i].share_percent)});
    }
  }
  return {t};
}

// Logit trend of a class share on a cyclic predictor starting at `anchor`.
void add_trend_rows(Table &t, const CorpusStats &stats, GroupKind kind, unsigned anchor, unsigned period) {
  for (auto cls : {BpmClass::bpm, BpmClass::my}) {
    std::vector<double> x;
    std::vector<std::uint64_t> s;
    std::vector<std::uint64_t> n;
    for (const auto &row : prevalence_by_group(stats, kind)) {
      const unsigned v = static_cast<unsigned>(std::stoul(row.group));
      x.push_back(static_cast<double>((v + period - anchor) % period));
      s.push_back(row.counts[static_cast<std::size_t>(cls)]);
      n.push_back(row.total);
    }
    const std::string label = std::string(group_kind_name(kind)) + "/" + std::string(class_name(cls));
    if (x.size() < 2) {
      t.notes.push_back(label + ": fewer than two groups; trend not fitted");
      continue;
    }
    try {
      const auto fit = fit_binomial_logit(s, n, DesignMatrix::intercept_and_slope(x));
      t.rows.push_back({group_kind_name(kind), class_name(cls), std::uint64_t{anchor}, Cell::sci(fit.coefficients[1]),
                        Cell::sci(fit.std_errors[1]), Cell::sci(fit.wald_p[1]), Cell::real(fit.lr_stat),
                        Cell::sci(fit.lr_p), fit.converged});
    } catch (const DataError &e) {
      t.notes.push_back(label + ": " + e.what());
    }
  }
}

std::vector<Table> report_b4(const CorpusStats &stats, const ReportOptions &opt) {
  auto t = make_table("b4_time", {"grouping", "group", "instances", "bpm_pct", "my_pct", "possessed_pct"});
  for (auto kind : {GroupKind::month, GroupKind::weekday, GroupKind::year_month}) {
    for (const auto &row : prevalence_by_group(stats, kind)) {
      t.rows.push_back({group_kind_name(kind), row.group, row.total,
                        Cell::pct(percent(row.counts[static_cast<std::size_t>(BpmClass::bpm)], row.total)),
                        Cell::pct(percent(row.counts[static_cast<std::size_t>(BpmClass::my)], row.total)),
                        Cell::pct(percent(row.counts[static_cast<std::size_t>(BpmClass::possessed)], row.total))});
    }
  }
  // Per-month percentages averaged over years (each year one vote).
  std::map<std::string, std::vector<const PrevalenceRow *>> per_month;
  const auto year_months = prevalence_by_group(stats, GroupKind::year_month);
  for (const auto &row : year_months) per_month[row.group.substr(5)].push_back(&row);
  for (const auto &[month, rows] : per_month) {
    std::array<double, 3> sums{};
    for (const auto *r : rows) {
      sums[0] += percent(r->counts[static_cast<std::size_t>(BpmClass::bpm)], r->total);
      sums[1] += percent(r->counts[static_cast<std::size_t>(BpmClass::my)], r->total);
      sums[2] += percent(r->counts[static_cast<std::size_t>(BpmClass::possessed)], r->total);
    }
    const auto years = static_cast<double>(rows.size());
    t.rows.push_back({"month_mean_over_years", month, std::uint64_t{rows.size()}, Cell::pct(sums[0] / years),
                      Cell::pct(sums[1] / years), Cell::pct(sums[2] / years)});
  }

  auto trend = make_table("b4_trend", {"grouping", "outcome", "anchor", "coefficient", "std_error", "wald_p",
                                       "lr_stat", "lr_p", "converged"});
  add_trend_rows(trend, stats, GroupKind::month, opt.month_anchor, 12);
  add_trend_rows(trend, stats, GroupKind::weekday, opt.weekday_anchor, 7);
  return {t, trend};
}

std::vector<Table> report_b5(const CorpusStats &stats) {
  auto t = make_table("b5_region", {"grouping", "group", "instances", "bpm_pct", "my_pct", "possessed_pct"});
  auto test = make_table("b5_region_test", {"grouping", "outcome", "levels", "lr_stat", "df", "p", "converged"});
  for (auto kind : {GroupKind::city, GroupKind::country, GroupKind::year_country}) {
    const auto rows = prevalence_by_group(stats, kind);
    for (const auto &row : rows) {
      t.rows.push_back({group_kind_name(kind), row.group, row.total,
                        Cell::pct(percent(row.counts[static_cast<std::size_t>(BpmClass::bpm)], row.total)),
                        Cell::pct(percent(row.counts[static_cast<std::size_t>(BpmClass::my)], row.total)),
                        Cell::pct(percent(row.counts[static_cast<std::size_t>(BpmClass::possessed)], row.total))});
    }
    if (kind == GroupKind::year_country) continue;
    for (auto cls : {BpmClass::bpm, BpmClass::my}) {
      const std::string label = std::string(group_kind_name(kind)) + "/" + std::string(class_name(cls));
      if (rows.size() < 2) {
        test.notes.push_back(label + ": fewer than two groups; test skipped");
        continue;
      }
      std::vector<std::uint64_t> s;
      std::vector<std::uint64_t> n;
      std::vector<std::size_t> levels;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        s.push_back(rows[i].counts[static_cast<std::size_t>(cls)]);
        n.push_back(rows[i].total);
        levels.push_back(i);
      }
      try {
        const auto fit = fit_binomial_logit(s, n, DesignMatrix::intercept_and_indicators(levels, rows.size()));
        test.rows.push_back({group_kind_name(kind), class_name(cls), std::uint64_t{rows.size()},
                             Cell::real(fit.lr_stat), std::uint64_t{rows.size() - 1}, Cell::sci(fit.lr_p),
                             fit.converged});
      } catch (const DataError &e) {
        test.notes.push_back(label + ": " + e.what());
      }
    }
  }
  return {t, test};
}

std::vector<Table> report_ba1(const CorpusStats &stats) {
  auto cols = std::vector<std::string>{"class", "instances"};
  for (auto &c : dimension_columns()) cols.push_back(c);
  auto t = make_table("ba1_profiles", cols);
  const auto set = class_profiles(stats, {BpmClass::bpm, BpmClass::my, BpmClass::your, BpmClass::third,
                                          BpmClass::his, BpmClass::her, BpmClass::their, BpmClass::nobpm});
  for (const auto &p : set.profiles) {
    std::vector<Cell> row{p.label, p.n};
    for (double v : p.proportions) row.push_back(Cell::prop(v));
    t.rows.push_back(std::move(row));
  }
  t.notes = set.notices;

  // Class x dimension ANOVA over the four BA1 classes, one cell per proportion.
  auto anova = make_table("ba1_anova", {"analysis", "effect", "sum_sq", "df", "mean_sq", "f", "p"});
  const auto main = class_profiles(stats);
  if (main.profiles.size() < 2) {
    anova.notes.push_back("fewer than two populated classes; ANOVA skipped");
  } else {
    for (const auto &[analysis, first, last] : {std::tuple{"vad", kEmotionCount, kDimensionCount},
                                                std::tuple{"emotion", std::size_t{0}, kEmotionCount}}) {
      std::vector<double> values;
      std::vector<std::string> fa;
      std::vector<std::string> fb;
      for (const auto &p : main.profiles) {
        for (std::size_t d = first; d < last; ++d) {
          values.push_back(p.proportions[d]);
          fa.push_back(p.label);
          fb.emplace_back(dimension_name(d));
        }
      }
      try {
        const auto res = two_way_anova(values, fa, fb);
        const auto add = [&](const char *effect, const AnovaRow &r, bool with_f) {
          anova.rows.push_back({analysis, effect, Cell::real(r.sum_sq), std::uint64_t(r.df), Cell::real(r.mean_sq),
                                with_f ? Cell::real(r.f) : Cell(), with_f ? Cell::sci(r.p) : Cell()});
        };
        add("class", res.factor_a, true);
        add("dimension", res.factor_b, true);
        if (res.interaction) add("interaction", *res.interaction, true);
        add("residual", res.residual, false);
      } catch (const DataError &e) {
        anova.notes.push_back(std::string(analysis) + ": " + e.what());
      }
    }
  }
  return {t, anova};
}

std::vector<Table> report_ba3(const CorpusStats &stats, const ReportOptions &opt) {
  auto t = make_table("ba3_deltas", {"term", "instances", "dimension", "proportion", "mean", "std", "delta"});
  try {
    const auto rep = per_type_deltas(stats, opt.min_count, opt.max_delta_types);
    for (const auto &type : rep.types) {
      for (std::size_t d = 0; d < kDimensionCount; ++d) {
        t.rows.push_back({type.term, type.n, dimension_name(d), Cell::prop(type.proportions[d]),
                          Cell::prop(rep.mean[d]), Cell::prop(rep.std_dev[d]), Cell::prop(type.deltas[d])});
      }
    }
  } catch (const DataError &e) {
    t.notes.push_back(e.what());
  }
  return {t};
}

std::vector<Table> report_length(const CorpusStats &stats) {
  auto t = make_table("length", {"class", "instances", "mean_chars", "mean_tokens"});
  const auto rep = length_report(stats);
  for (const auto &r : rep.rows) {
    t.rows.push_back({class_name(r.cls), r.n, Cell(r.mean_chars, 2), Cell(r.mean_tokens, 2)});
  }
  if (rep.char_ratio || rep.token_ratio) {
    t.rows.push_back({"bpm/nobpm", Cell(), rep.char_ratio ? Cell(*rep.char_ratio, 2) : Cell(),
                      rep.token_ratio ? Cell(*rep.token_ratio, 2) : Cell()});
  }
  return {t};
}

std::vector<Table> report_bins(const CorpusStats &stats) {
  auto cols = std::vector<std::string>{"bin", "class", "instances"};
  for (auto &c : dimension_columns()) cols.push_back(c);
  auto t = make_table("bins", cols);
  for (const auto &b : binned_profiles(stats)) {
    std::vector<Cell> row{b.bin, class_name(b.cls), b.profile.n};
    for (double v : b.profile.proportions) row.push_back(Cell::prop(v));
    t.rows.push_back(std::move(row));
  }
  return {t};
}

std::vector<Table> report_diversity(const CorpusStats &stats, const ReportOptions &opt) {
  auto t = make_table("diversity", {"class", "threshold", "types_above", "types_total"});
  for (const auto &r : type_diversity(stats, opt.diversity_threshold)) {
    if (r.types_total == 0) continue;
    t.rows.push_back({class_name(r.cls), Cell(opt.diversity_threshold, 4), std::uint64_t{r.types_above},
                      std::uint64_t{r.types_total}});
  }
  return {t};
}

std::vector<Table> report_cooccur(const CorpusStats &stats, const ReportOptions &opt) {
  auto t = make_table("cooccur", {"term", "term_instances", "rank", "word", "instances"});
  for (const auto &type : top_types(stats, BpmClass::my, static_cast<long>(std::max<std::size_t>(opt.cooccur_terms, 1)))) {
    const auto it = stats.cooccur.find(type.term);
    if (it == stats.cooccur.end()) continue;
    std::vector<std::pair<std::string, std::uint64_t>> words(it->second.begin(), it->second.end());
    std::sort(words.begin(), words.end(),
              [](const auto &a, const auto &b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
    if (words.size() > opt.cooccur_words) words.resize(opt.cooccur_words);
    for (std::size_t i = 0; i < words.size(); ++i) {
      t.rows.push_back({type.term, type.count, std::uint64_t{i + 1}, words[i].first, words[i].second});
    }
  }
  return {t};
}

std::vector<Table> report_lexicon(const CorpusStats &stats, const ReportOptions &opt, const ReportLexicons &lex) {
  auto t = make_table("lexicon_profile", {"group", "words", "in_emotion_lexicon", "in_vad_lexicon", "mean_valence",
                                          "mean_arousal", "mean_dominance"});
  for (std::size_t e = 0; e < kEmotionCount; ++e) t.columns.push_back("rate_" + std::string(dimension_name(e)));
  if (lex.body_parts == nullptr || lex.emotions == nullptr || lex.vad == nullptr) {
    t.notes.push_back("lexicons not supplied; lexicon profile skipped");
    return {t};
  }
  std::set<std::string> frequent;
  for (const auto &row : top_types(stats, BpmClass::my, opt.top_k)) frequent.insert(row.term);
  try {
    for (const auto &g : lexicon_profile_of_bp_words(*lex.body_parts, *lex.emotions, *lex.vad, frequent)) {
      std::vector<Cell> row{g.group, std::uint64_t{g.words}, std::uint64_t{g.in_emotion}, std::uint64_t{g.in_vad},
                            Cell::prop(g.mean_vad[0]), Cell::prop(g.mean_vad[1]), Cell::prop(g.mean_vad[2])};
      for (double r : g.emotion_rate) row.push_back(Cell::prop(r));
      t.rows.push_back(std::move(row));
    }
  } catch (const DataError &e) {
    t.notes.push_back(e.what());
  }
  return {t};
}

}  // namespace

std::string render_csv(const Table &table, const RunMeta &meta) {
  std::string out = "# tool=" + std::string(kToolName) + " version=" + std::string(kToolVersion) +
                    " config_hash=" + meta.config_hash + " seed=" + std::to_string(meta.seed) + "\n";
  for (const auto &note : table.notes) out += "# note: " + note + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_escape(table.columns[i]);
  }
  out += '\n';
  for (const auto &row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Table &table, const RunMeta &meta) {
  ojson doc;
  doc["meta"] = {{"tool", kToolName}, {"version", kToolVersion}, {"config_hash", meta.config_hash}, {"seed", meta.seed}};
  doc["table"] = table.name;
  doc["columns"] = table.columns;
  ojson rows = ojson::array();
  for (const auto &row : table.rows) {
    ojson obj = ojson::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  doc["notes"] = table.notes;
  return doc.dump(1) + "\n";
}

std::filesystem::path write_table(const Table &table, const RunMeta &meta, const std::filesystem::path &dir,
                                  OutputFormat format) {
  const auto path = dir / (table.name + (format == OutputFormat::csv ? ".csv" : ".json"));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << (format == OutputFormat::csv ? render_csv(table, meta) : render_json(table, meta));
  if (!out) throw Error("write failure on " + path.string());
  return path;
}

const std::vector<std::string> &report_names() {
  static const std::vector<std::string> names = {"B1",  "B2",     "B3",   "B4",        "B5",      "BA1",
                                                 "BA3", "length", "bins", "diversity", "cooccur", "lexicon"};
  return names;
}

std::vector<Table> build_report(const std::string &name, const CorpusStats &stats, const ReportOptions &options,
                                const ReportLexicons &lexicons) {
  if (name == "B1") return report_b1(stats);
  if (name == "B2") return report_b2(stats);
  if (name == "B3") return report_b3(stats, options);
  if (name == "B4") return report_b4(stats, options);
  if (name == "B5") return report_b5(stats);
  if (name == "BA1") return report_ba1(stats);
  if (name == "BA3") return report_ba3(stats, options);
  if (name == "length") return report_length(stats);
  if (name == "bins") return report_bins(stats);
  if (name == "diversity") return report_diversity(stats, options);
  if (name == "cooccur") return report_cooccur(stats, options);
  if (name == "lexicon") return report_lexicon(stats, options, lexicons);
  throw ConfigError("unknown report '" + name + "'");
}

Table correlation_table(const CorrelationTable &table) {
  auto t = make_table("correlations", {"feature", "metric", "n", "rho", "p", "significant"});
  for (const auto &r : table.rows) {
    t.rows.push_back({r.feature, r.metric, std::uint64_t{r.result.n}, Cell(r.result.rho, 3), Cell(r.result.p, 3),
                      r.significant()});
  }
  if (!table.corpus_only.empty()) {
    std::string note = "cities without health data (dropped):";
    for (const auto &c : table.corpus_only) note += " " + c;
    t.notes.push_back(note);
  }
  if (!table.health_only.empty()) {
    std::string note = "cities absent from corpus (dropped):";
    for (const auto &c : table.health_only) note += " " + c;
    t.notes.push_back(note);
  }
  if (!table.undefined.empty()) {
    std::string note = "constant feature or metric, rho undefined:";
    for (const auto &u : table.undefined) note += " [" + u + "]";
    t.notes.push_back(note);
  }
  t.notes.push_back("emotion_share(dim) = share of city instances with >= 1 word on the dimension");
  return t;
}

Table shcmp_table(const std::vector<ShcmpResult> &results) {
  auto t = make_table("shcmp", {"n_bins", "n_trials", "seed", "value", "units", "excluded"});
  for (const auto &r : results) {
    t.rows.push_back({std::uint64_t(r.n_bins), std::uint64_t{r.n_trials}, r.seed, Cell(r.value, 1),
                      std::uint64_t{r.units}, std::uint64_t{r.excluded}});
  }
  if (!results.empty() && results.front().excluded > 0) {
    t.notes.push_back(std::to_string(results.front().excluded) + " (item, emotion) pairs with < 2 raters excluded");
  }
  return t;
}

Table aggregate_table(const std::vector<AggregatedLabel> &labels, double presence_threshold) {
  auto t = make_table("aggregated_labels", {"item_id", "emotion", "mean_rating", "present", "n_raters"});
  for (const auto &l : labels) {
    t.rows.push_back({l.item_id, rated_emotion_name(l.emotion), Cell(l.mean_rating, 4), l.present,
                      std::uint64_t{l.n_raters}});
  }
  t.notes.push_back("present <=> mean rating >= " + format_double(presence_threshold, 2));
  return t;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace somascope
