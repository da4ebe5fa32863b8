#include "somascope/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <thread>

#include "json.hpp"
#include "somascope/error.hpp"
#include "somascope/strings.hpp"

namespace somascope {

using json = nlohmann::json;

namespace {

constexpr std::array<std::string_view, kClassCount> kClassNames = {"bpm", "nobpm", "my",    "your",     "his",
                                                                   "her", "their", "3p", "possessed"};

constexpr std::array<std::string_view, kGroupKindCount> kGroupKindNames = {
    "month", "year_month", "weekday", "city", "country", "year_country", "length_bin"};

constexpr std::size_t kBatchSize = 1U << 15;

bool read_uint(std::string_view s, std::size_t pos, std::size_t len, unsigned &out) {
  if (pos + len > s.size()) return false;
  const auto *b = s.data() + pos;
  const auto *e = b + len;
  if (!std::all_of(b, e, [](char c) { return c >= '0' && c <= '9'; })) return false;
  return std::from_chars(b, e, out).ec == std::errc{};
}

bool is_leap(int y) noexcept { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(int y, unsigned m) noexcept {
  static constexpr std::array<unsigned, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return (m == 2 && is_leap(y)) ? 29U : kDays[m - 1];
}

// Days since 1970-01-01 (proleptic Gregorian).
long days_from_civil(int y, unsigned m, unsigned d) noexcept {
  y -= m <= 2 ? 1 : 0;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

bool is_sentence_end(char c) noexcept { return c == '.' || c == '!' || c == '?'; }

bool is_ascii_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

// Length of a closing quote/bracket at i, 0 if none.
std::size_t closer_length(std::string_view s, std::size_t i) noexcept {
  const char c = s[i];
  if (c == '"' || c == '\'' || c == ')' || c == ']' || c == '}') return 1;
  // U+2019 and U+201D
  if (s.substr(i, 3) == "\xE2\x80\x99" || s.substr(i, 3) == "\xE2\x80\x9D") return 3;
  return 0;
}

std::string bin_label(std::size_t upper) {
  return "(" + std::to_string(upper - 10) + "," + std::to_string(upper) + "]";
}

std::optional<std::string> optional_string(const json &obj, const char *key, bool &ok) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    ok = false;
    return std::nullopt;
  }
  return it->get<std::string>();
}

}  // namespace

// ---------------------------------------------------------------------------
// Dates

std::optional<CivilDate> parse_iso8601_date(std::string_view s) {
  s = trim(s);
  unsigned year = 0;
  unsigned month = 0;
  unsigned day = 0;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!read_uint(s, 0, 4, year) || !read_uint(s, 5, 2, month) || !read_uint(s, 8, 2, day)) return std::nullopt;
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(static_cast<int>(year), month)) return std::nullopt;

  auto rest = s.substr(10);
  if (!rest.empty()) {
    if (rest.front() != 'T' && rest.front() != 't' && rest.front() != ' ') return std::nullopt;
    rest.remove_prefix(1);
    unsigned hh = 0;
    unsigned mm = 0;
    unsigned ss = 0;
    if (!read_uint(rest, 0, 2, hh) || rest.size() < 5 || rest[2] != ':' || !read_uint(rest, 3, 2, mm)) {
      return std::nullopt;
    }
    rest.remove_prefix(5);
    if (!rest.empty() && rest.front() == ':') {
      if (!read_uint(rest, 1, 2, ss)) return std::nullopt;
      rest.remove_prefix(3);
      if (!rest.empty() && (rest.front() == '.' || rest.front() == ',')) {
        std::size_t k = 1;
        while (k < rest.size() && rest[k] >= '0' && rest[k] <= '9') ++k;
        if (k == 1) return std::nullopt;
        rest.remove_prefix(k);
      }
    }
    if (hh > 24 || mm > 59 || ss > 60) return std::nullopt;
    if (!rest.empty()) {
      if (rest == "Z" || rest == "z") {
        rest = {};
      } else if (rest.front() == '+' || rest.front() == '-') {
        unsigned oh = 0;
        unsigned om = 0;
        if (!read_uint(rest, 1, 2, oh)) return std::nullopt;
        auto tail = rest.substr(3);
        if (!tail.empty() && tail.front() == ':') tail.remove_prefix(1);
        if (!tail.empty() && (tail.size() != 2 || !read_uint(tail, 0, 2, om))) return std::nullopt;
        if (oh > 23 || om > 59) return std::nullopt;
      } else {
        return std::nullopt;
      }
    }
  }
  return CivilDate{static_cast<int>(year), month, day};
}

unsigned iso_weekday(const CivilDate &d) noexcept {
  const long days = days_from_civil(d.year, d.month, d.day);
  // 1970-01-01 was a Thursday (ISO 4).
  return static_cast<unsigned>(((days % 7) + 7 + 3) % 7) + 1;
}

// ---------------------------------------------------------------------------
// Sentence splitting

SentenceSplitter::SentenceSplitter(std::vector<std::string> abbreviations) {
  for (auto &a : abbreviations) abbreviations_.insert(to_lower_ascii(trim(a)));
}

const SentenceSplitter &SentenceSplitter::bundled() {
  static const SentenceSplitter splitter(load_word_list(data_dir() / "abbreviations.txt"));
  return splitter;
}

bool SentenceSplitter::is_abbreviation(std::string_view text, std::size_t period_pos) const {
  std::size_t begin = period_pos;
  while (begin > 0 && !is_ascii_space(text[begin - 1])) --begin;
  while (begin < period_pos && (text[begin] == '(' || text[begin] == '"' || text[begin] == '\'' || text[begin] == '[')) {
    ++begin;
  }
  const auto word = to_lower_ascii(text.substr(begin, period_pos - begin + 1));
  return abbreviations_.contains(word);
}

std::vector<std::string> SentenceSplitter::split(std::string_view text) const {
  std::vector<std::string> out;
  const auto emit = [&out](std::string_view piece) {
    piece = trim(piece);
    if (!piece.empty()) out.emplace_back(piece);
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_sentence_end(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_sentence_end(text[j])) ++j;
    const bool single_period = (j - i == 1) && text[i] == '.';
    for (std::size_t len = 0; j < text.size() && (len = closer_length(text, j)) > 0;) j += len;
    if (j == text.size() || is_ascii_space(text[j])) {
      if (!(single_period && is_abbreviation(text, i))) {
        emit(text.substr(start, j - start));
        start = j;
      }
    }
    i = j;
  }
  emit(text.substr(start));
  return out;
}

std::vector<std::string> sentence_split(std::string_view text) { return SentenceSplitter::bundled().split(text); }

// ---------------------------------------------------------------------------
// Ingest

std::optional<std::vector<Instance>> parse_record(std::string_view line, const SentenceSplitter &splitter) {
  const auto doc = json::parse(line.begin(), line.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;

  const auto id = doc.find("id");
  const auto text = doc.find("text");
  const auto medium = doc.find("medium");
  if (id == doc.end() || !id->is_string() || id->get_ref<const std::string &>().empty()) return std::nullopt;
  if (text == doc.end() || !text->is_string()) return std::nullopt;
  if (medium == doc.end() || !medium->is_string()) return std::nullopt;

  Instance proto;
  const auto &medium_name = medium->get_ref<const std::string &>();
  if (medium_name == "blog") {
    proto.medium = Medium::blog;
  } else if (medium_name == "tweet") {
    proto.medium = Medium::tweet;
  } else {
    return std::nullopt;
  }

  bool ok = true;
  if (auto ts = optional_string(doc, "timestamp", ok)) {
    proto.date = parse_iso8601_date(*ts);
    if (!proto.date) return std::nullopt;
  }
  proto.city = optional_string(doc, "city", ok);
  proto.country = optional_string(doc, "country", ok);
  if (!ok) return std::nullopt;

  const auto &base_id = id->get_ref<const std::string &>();
  const auto &body = text->get_ref<const std::string &>();
  std::vector<Instance> out;
  if (proto.medium == Medium::tweet) {
    proto.id = base_id;
    proto.text = body;
    out.push_back(std::move(proto));
    return out;
  }
  auto sentences = splitter.split(body);
  out.reserve(sentences.size());
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    Instance inst = proto;
    inst.id = base_id + "#" + std::to_string(k);
    inst.text = std::move(sentences[k]);
    out.push_back(std::move(inst));
  }
  return out;
}

IngestTally ingest(std::istream &in, const std::function<void(Instance &&)> &sink, const SentenceSplitter &splitter) {
  IngestTally tally;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto parsed = parse_record(line, splitter);
    if (!parsed) {
      ++tally.errors;
      continue;
    }
    ++tally.records;
    for (auto &inst : *parsed) {
      ++tally.instances;
      sink(std::move(inst));
    }
  }
  if (in.bad()) throw Error("I/O failure while reading corpus stream");
  return tally;
}

// ---------------------------------------------------------------------------
// Classes and groups

std::string_view class_name(BpmClass c) noexcept { return kClassNames[static_cast<std::size_t>(c)]; }

std::optional<BpmClass> parse_class(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kClassCount; ++i) {
    if (kClassNames[i] == name) return static_cast<BpmClass>(i);
  }
  return std::nullopt;
}

BpmClass class_of(Possession p) noexcept {
  switch (p) {
    case Possession::my: return BpmClass::my;
    case Possession::your: return BpmClass::your;
    case Possession::his: return BpmClass::his;
    case Possession::her: return BpmClass::her;
    case Possession::their: return BpmClass::their;
    case Possession::none: break;
  }
  return BpmClass::bpm;
}

std::string_view group_kind_name(GroupKind k) noexcept { return kGroupKindNames[static_cast<std::size_t>(k)]; }

std::optional<GroupKind> parse_group_kind(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kGroupKindCount; ++i) {
    if (kGroupKindNames[i] == name) return static_cast<GroupKind>(i);
  }
  return std::nullopt;
}

std::string length_bin_label(std::size_t token_count) {
  if (token_count == 0) return "[0,0]";
  return bin_label((token_count + 9) / 10 * 10);
}

long length_bin_order(std::string_view label) noexcept {
  if (label.size() < 2 || label.front() != '(') return -1;
  long lower = 0;
  const auto comma = label.find(',');
  if (comma == std::string_view::npos) return -1;
  std::from_chars(label.data() + 1, label.data() + comma, lower);
  return lower;
}

// ---------------------------------------------------------------------------
// SliceStats / CorpusStats

namespace {

// Classes an annotated instance belongs to.
std::vector<BpmClass> classes_of(const InstanceAnnotation &ann) {
  std::vector<BpmClass> classes;
  classes.push_back(ann.has_bpm ? BpmClass::bpm : BpmClass::nobpm);
  for (auto p : {Possession::my, Possession::your, Possession::his, Possession::her, Possession::their}) {
    if (ann.possessed(p)) classes.push_back(class_of(p));
  }
  if (ann.possessed(Possession::his) || ann.possessed(Possession::her) || ann.possessed(Possession::their)) {
    classes.push_back(BpmClass::third);
  }
  if (ann.possession_flags != 0) classes.push_back(BpmClass::possessed);
  return classes;
}

template <typename Array>
void add_arrays(Array &dst, const Array &src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

}  // namespace

void SliceStats::add(const InstanceAnnotation &ann) {
  ++total;
  for (auto c : classes_of(ann)) {
    const auto ci = static_cast<std::size_t>(c);
    ++per_class[ci];
    char_sum[ci] += ann.char_count;
    token_sum[ci] += ann.token_count;
    auto &dims = emotion_by_class[ci];
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      if ((ann.emotion_hits >> e) & 1U) ++dims[e];
    }
    for (std::size_t v = 0; v < kVadPoleCount; ++v) {
      if ((ann.vad_hits >> v) & 1U) ++dims[kEmotionCount + v];
    }
  }
}

SliceStats &SliceStats::operator+=(const SliceStats &other) {
  total += other.total;
  add_arrays(per_class, other.per_class);
  for (std::size_t c = 0; c < kClassCount; ++c) add_arrays(emotion_by_class[c], other.emotion_by_class[c]);
  add_arrays(char_sum, other.char_sum);
  add_arrays(token_sum, other.token_sum);
  return *this;
}

void CorpusStats::add(const Instance &inst, const InstanceAnnotation &ann, const std::vector<Token> &tokens,
                      const std::unordered_set<std::string, StringHash, std::equal_to<>> *stopwords) {
  global.add(ann);
  for (const auto &span : ann.spans) ++mention_counts[static_cast<std::size_t>(span.possession)];

  // Per-type counts are per instance: a (term, class) pair counts once.
  std::map<std::string_view, std::array<bool, kClassCount>> seen;
  for (const auto &span : ann.spans) {
    auto &flags = seen[span.canonical];
    flags[static_cast<std::size_t>(BpmClass::bpm)] = true;
    if (span.possession != Possession::none) {
      flags[static_cast<std::size_t>(class_of(span.possession))] = true;
      if (span.possession == Possession::his || span.possession == Possession::her ||
          span.possession == Possession::their) {
        flags[static_cast<std::size_t>(BpmClass::third)] = true;
      }
      flags[static_cast<std::size_t>(BpmClass::possessed)] = true;
    }
  }
  for (const auto &[term, flags] : seen) {
    auto it = per_type.find(term);
    if (it == per_type.end()) it = per_type.emplace(std::string(term), ClassCounts{}).first;
    for (std::size_t c = 0; c < kClassCount; ++c) it->second[c] += flags[c] ? 1 : 0;
    if (flags[static_cast<std::size_t>(BpmClass::my)]) {
      auto eit = my_type_emotions.find(term);
      if (eit == my_type_emotions.end()) {
        eit = my_type_emotions.emplace(std::string(term), std::array<std::uint64_t, kDimensionCount>{}).first;
      }
      for (std::size_t e = 0; e < kEmotionCount; ++e) eit->second[e] += (ann.emotion_hits >> e) & 1U;
      for (std::size_t v = 0; v < kVadPoleCount; ++v) eit->second[kEmotionCount + v] += (ann.vad_hits >> v) & 1U;
    }
  }

  const auto add_group = [this, &ann](GroupKind kind, std::string value) {
    per_group[GroupKey{kind, std::move(value)}].add(ann);
  };
  if (inst.date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02u", inst.date->month);
    add_group(GroupKind::month, buf);
    std::snprintf(buf, sizeof buf, "%04d-%02u", inst.date->year, inst.date->month);
    add_group(GroupKind::year_month, buf);
    add_group(GroupKind::weekday, std::to_string(iso_weekday(*inst.date)));
    if (inst.country && !inst.country->empty()) {
      add_group(GroupKind::year_country, std::to_string(inst.date->year) + "|" + *inst.country);
    }
  }
  if (inst.city && !inst.city->empty()) add_group(GroupKind::city, *inst.city);
  if (inst.country && !inst.country->empty()) add_group(GroupKind::country, *inst.country);
  add_group(GroupKind::length_bin, length_bin_label(ann.token_count));

  // Context words of myBPMs: every other token except the term and its pronoun.
  std::map<std::string_view, std::vector<bool>> excluded;
  for (const auto &span : ann.spans) {
    if (span.possession != Possession::my) continue;
    auto &mask = excluded[span.canonical];
    if (mask.empty()) mask.assign(tokens.size(), false);
    mask[span.token_index] = true;
    mask[span.token_index - 1] = true;
  }
  for (const auto &[term, mask] : excluded) {
    std::set<std::string_view> words;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (mask[i]) continue;
      const auto &w = tokens[i].text;
      if (stopwords != nullptr && stopwords->contains(w)) continue;
      words.insert(w);
    }
    if (words.empty()) continue;
    auto it = cooccur.find(term);
    if (it == cooccur.end()) it = cooccur.emplace(std::string(term), std::map<std::string, std::uint64_t, std::less<>>{}).first;
    for (auto w : words) {
      auto wit = it->second.find(w);
      if (wit == it->second.end()) wit = it->second.emplace(std::string(w), 0).first;
      ++wit->second;
    }
  }
}

CorpusStats &CorpusStats::operator+=(const CorpusStats &other) {
  ingest_errors += other.ingest_errors;
  global += other.global;
  add_arrays(mention_counts, other.mention_counts);
  for (const auto &[term, counts] : other.per_type) add_arrays(per_type[term], counts);
  for (const auto &[key, slice] : other.per_group) per_group[key] += slice;
  for (const auto &[term, dims] : other.my_type_emotions) add_arrays(my_type_emotions[term], dims);
  for (const auto &[term, words] : other.cooccur) {
    auto &dst = cooccur[term];
    for (const auto &[w, n] : words) dst[w] += n;
  }
  return *this;
}

CorpusStats merge(const CorpusStats &a, const CorpusStats &b) {
  CorpusStats out = a;
  out += b;
  return out;
}

CorpusStats scan_one(const Instance &inst, const ScanContext &ctx) {
  CorpusStats stats;
  const auto tokens = tokenize(inst.text);
  stats.add(inst, annotate_tokens(inst.id, inst.text, tokens, ctx.lexicons), tokens, ctx.stopwords);
  return stats;
}

namespace {

void scan_range(std::span<const Instance> instances, const ScanContext &ctx, CorpusStats &out) {
  for (const auto &inst : instances) {
    const auto tokens = tokenize(inst.text);
    out.add(inst, annotate_tokens(inst.id, inst.text, tokens, ctx.lexicons), tokens, ctx.stopwords);
  }
}

}  // namespace

CorpusStats scan(std::span<const Instance> instances, const ScanContext &ctx, unsigned threads) {
  if (ctx.lexicons.body_parts == nullptr) throw ConfigError("scan requires a body-part lexicon");
  threads = std::max(1U, threads);
  CorpusStats total;
  if (threads == 1 || instances.size() < 2 * threads) {
    scan_range(instances, ctx, total);
    return total;
  }
  const std::size_t chunk = (instances.size() + threads - 1) / threads;
  std::vector<CorpusStats> parts(threads);
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const auto begin = std::min(instances.size(), t * chunk);
    const auto end = std::min(instances.size(), begin + chunk);
    workers.emplace_back([&, t, begin, end] { scan_range(instances.subspan(begin, end - begin), ctx, parts[t]); });
  }
  for (auto &w : workers) w.join();
  for (const auto &p : parts) total += p;
  return total;
}

CorpusStats scan_stream(std::istream &in, const ScanContext &ctx, unsigned threads, const SentenceSplitter &splitter,
                        IngestTally *tally) {
  CorpusStats total;
  std::vector<Instance> batch;
  batch.reserve(kBatchSize);
  const auto flush = [&] {
    total += scan(batch, ctx, threads);
    batch.clear();
  };
  const auto counts = ingest(
      in,
      [&](Instance &&inst) {
        batch.push_back(std::move(inst));
        if (batch.size() >= kBatchSize) flush();
      },
      splitter);
  flush();
  total.ingest_errors += counts.errors;
  if (tally != nullptr) *tally = counts;
  return total;
}

std::vector<std::string> check_invariants(const CorpusStats &stats) {
  std::vector<std::string> problems;
  const auto check = [&problems](const SliceStats &s, const std::string &where) {
    if (s.count(BpmClass::bpm) + s.count(BpmClass::nobpm) != s.total) {
      problems.push_back(where + ": bpm + nobpm != total");
    }
    for (auto c : {BpmClass::my, BpmClass::your, BpmClass::his, BpmClass::her, BpmClass::their, BpmClass::third,
                   BpmClass::possessed}) {
      if (s.count(c) > s.count(BpmClass::bpm)) {
        problems.push_back(where + ": " + std::string(class_name(c)) + " exceeds bpm");
      }
    }
    if (s.count(BpmClass::third) >
        s.count(BpmClass::his) + s.count(BpmClass::her) + s.count(BpmClass::their)) {
      problems.push_back(where + ": 3p exceeds his + her + their");
    }
    for (auto c : {BpmClass::my, BpmClass::your, BpmClass::third}) {
      if (s.count(c) > s.count(BpmClass::possessed)) {
        problems.push_back(where + ": " + std::string(class_name(c)) + " exceeds possessed");
      }
    }
  };
  check(stats.global, "global");
  for (const auto &[key, slice] : stats.per_group) {
    check(slice, std::string(group_kind_name(key.kind)) + "=" + key.value);
  }
  return problems;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

constexpr std::string_view kSchema = "somascope.corpus_stats/1";

json class_counts_to_json(const ClassCounts &counts, bool skip_nobpm = false) {
  json out = json::object();
  for (std::size_t c = 0; c < kClassCount; ++c) {
    if (skip_nobpm && c == static_cast<std::size_t>(BpmClass::nobpm)) continue;
    out[std::string(kClassNames[c])] = counts[c];
  }
  return out;
}

ClassCounts class_counts_from_json(const json &j) {
  ClassCounts counts{};
  for (const auto &[name, value] : j.items()) {
    const auto c = parse_class(name);
    if (!c) throw Error("stats JSON: unknown class '" + name + "'");
    counts[static_cast<std::size_t>(*c)] = value.get<std::uint64_t>();
  }
  return counts;
}

json slice_to_json(const SliceStats &s) {
  json emotions = json::object();
  for (std::size_t c = 0; c < kClassCount; ++c) {
    json dims = json::object();
    for (std::size_t d = 0; d < kDimensionCount; ++d) dims[std::string(dimension_name(d))] = s.emotion_by_class[c][d];
    emotions[std::string(kClassNames[c])] = std::move(dims);
  }
  return json{{"total", s.total},
              {"classes", class_counts_to_json(s.per_class)},
              {"char_sum", class_counts_to_json(s.char_sum)},
              {"token_sum", class_counts_to_json(s.token_sum)},
              {"emotions", std::move(emotions)}};
}

SliceStats slice_from_json(const json &j) {
  SliceStats s;
  s.total = j.at("total").get<std::uint64_t>();
  s.per_class = class_counts_from_json(j.at("classes"));
  s.char_sum = class_counts_from_json(j.at("char_sum"));
  s.token_sum = class_counts_from_json(j.at("token_sum"));
  for (const auto &[cname, dims] : j.at("emotions").items()) {
    const auto c = parse_class(cname);
    if (!c) throw Error("stats JSON: unknown class '" + cname + "'");
    for (std::size_t d = 0; d < kDimensionCount; ++d) {
      s.emotion_by_class[static_cast<std::size_t>(*c)][d] =
          dims.value(std::string(dimension_name(d)), std::uint64_t{0});
    }
  }
  return s;
}

}  // namespace

std::string stats_to_json(const CorpusStats &stats) {
  json mentions = json::object();
  for (std::size_t p = 0; p < kPossessionCount; ++p) {
    mentions[std::string(possession_name(static_cast<Possession>(p)))] = stats.mention_counts[p];
  }
  json types = json::object();
  for (const auto &[term, counts] : stats.per_type) types[term] = class_counts_to_json(counts, true);

  json groups = json::object();
  for (std::size_t k = 0; k < kGroupKindCount; ++k) groups[std::string(kGroupKindNames[k])] = json::object();
  for (const auto &[key, slice] : stats.per_group) {
    groups[std::string(group_kind_name(key.kind))][key.value] = slice_to_json(slice);
  }

  json type_emotions = json::object();
  for (const auto &[term, dims] : stats.my_type_emotions) {
    json d = json::object();
    for (std::size_t k = 0; k < kDimensionCount; ++k) d[std::string(dimension_name(k))] = dims[k];
    type_emotions[term] = std::move(d);
  }

  json cooccur = json::object();
  for (const auto &[term, words] : stats.cooccur) {
    json w = json::object();
    for (const auto &[word, n] : words) w[word] = n;
    cooccur[term] = std::move(w);
  }

  const json doc{{"schema", kSchema},
                 {"total_instances", stats.total_instances()},
                 {"ingest_errors", stats.ingest_errors},
                 {"global", slice_to_json(stats.global)},
                 {"mentions", std::move(mentions)},
                 {"types", std::move(types)},
                 {"groups", std::move(groups)},
                 {"my_type_emotions", std::move(type_emotions)},
                 {"cooccur", std::move(cooccur)}};
  return doc.dump(1) + "\n";
}

CorpusStats stats_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    throw Error(std::string("stats JSON: ") + e.what());
  }
  try {
    if (doc.value("schema", std::string{}) != kSchema) throw Error("stats JSON: unsupported schema");
    CorpusStats stats;
    stats.ingest_errors = doc.at("ingest_errors").get<std::uint64_t>();
    stats.global = slice_from_json(doc.at("global"));
    for (std::size_t p = 0; p < kPossessionCount; ++p) {
      stats.mention_counts[p] = doc.at("mentions").value(std::string(possession_name(static_cast<Possession>(p))),
                                                         std::uint64_t{0});
    }
    for (const auto &[term, counts] : doc.at("types").items()) stats.per_type[term] = class_counts_from_json(counts);
    for (const auto &[kind_name, entries] : doc.at("groups").items()) {
      const auto kind = parse_group_kind(kind_name);
      if (!kind) throw Error("stats JSON: unknown group kind '" + kind_name + "'");
      for (const auto &[value, slice] : entries.items()) stats.per_group[GroupKey{*kind, value}] = slice_from_json(slice);
    }
    for (const auto &[term, dims] : doc.at("my_type_emotions").items()) {
      auto &dst = stats.my_type_emotions[term];
      for (std::size_t k = 0; k < kDimensionCount; ++k) dst[k] = dims.value(std::string(dimension_name(k)), std::uint64_t{0});
    }
    for (const auto &[term, words] : doc.at("cooccur").items()) {
      auto &dst = stats.cooccur[term];
      for (const auto &[word, n] : words.items()) dst[word] = n.get<std::uint64_t>();
    }
    if (doc.at("total_instances").get<std::uint64_t>() != stats.global.total) {
      throw Error("stats JSON: total_instances disagrees with global slice");
    }
    return stats;
  } catch (const json::exception &e) {
    throw Error(std::string("stats JSON: ") + e.what());
  }
}

}  // namespace somascope
