#include "somascope/lexicon.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "somascope/error.hpp"
#include "somascope/strings.hpp"

#ifndef SOMASCOPE_DEFAULT_DATA_DIR
#define SOMASCOPE_DEFAULT_DATA_DIR "data"
#endif

namespace somascope {

namespace {

constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {
    "anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust"};

constexpr std::array<std::string_view, kVadPoleCount> kVadPoleNames = {
    "high_valence", "low_valence", "high_arousal", "low_arousal", "high_dominance", "low_dominance"};

bool is_comment_or_blank(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace

std::string_view emotion_name(Emotion e) noexcept { return kEmotionNames[static_cast<std::size_t>(e)]; }

std::optional<Emotion> parse_emotion(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    if (kEmotionNames[i] == name) return static_cast<Emotion>(i);
  }
  return std::nullopt;
}

std::string_view vad_pole_name(VadPole p) noexcept { return kVadPoleNames[static_cast<std::size_t>(p)]; }

std::string_view dimension_name(std::size_t dim) {
  if (dim < kEmotionCount) return kEmotionNames[dim];
  if (dim < kDimensionCount) return kVadPoleNames[dim - kEmotionCount];
  throw std::out_of_range("dimension index " + std::to_string(dim));
}

std::filesystem::path data_dir() {
  if (const char *env = std::getenv("SOMASCOPE_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return SOMASCOPE_DEFAULT_DATA_DIR;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error("read failure on " + path.string());
  return std::move(buf).str();
}

std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    auto line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> load_word_list(const std::filesystem::path &path) {
  const auto content = read_file(path);
  std::vector<std::string> words;
  for (auto line : split_lines(content)) {
    if (is_comment_or_blank(line)) continue;
    words.push_back(to_lower_ascii(trim(line)));
  }
  return words;
}

// ---------------------------------------------------------------------------
// PluralTable

PluralTable PluralTable::load(const std::filesystem::path &path) {
  const auto content = read_file(path);
  std::map<std::string, std::string, std::less<>> pairs;
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    const auto fields = split(lines[i], '\t');
    if (fields.size() != 2) throw ParseError(path.string(), i + 1, "expected plural<TAB>singular");
    auto plural = to_lower_ascii(trim(fields[0]));
    auto singular = to_lower_ascii(trim(fields[1]));
    if (plural.empty() || singular.empty()) throw ParseError(path.string(), i + 1, "empty field");
    pairs.emplace(std::move(plural), std::move(singular));
  }
  return PluralTable(std::move(pairs));
}

PluralTable PluralTable::bundled() { return load(data_dir() / "irregular_plurals.tsv"); }

std::optional<std::string_view> PluralTable::irregular_singular(std::string_view plural) const {
  if (auto it = irregular_.find(plural); it != irregular_.end()) return it->second;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// BodyPartLexicon

BodyPartLexicon BodyPartLexicon::from_terms(const std::vector<std::string> &raw_terms,
                                            const PluralTable &plurals) {
  BodyPartLexicon lex;
  std::set<std::string, std::less<>> unique;
  for (const auto &raw : raw_terms) {
    auto term = to_lower_ascii(trim(raw));
    if (term.empty()) continue;
    if (!unique.insert(std::move(term)).second) ++lex.duplicates_;
  }
  if (unique.empty()) throw ConfigError("body-part term list is empty");

  // Direct plural -> singular links between entries that are both present.
  std::unordered_map<std::string, std::string> parent;
  for (const auto &term : unique) {
    if (auto irr = plurals.irregular_singular(term); irr && *irr != term && unique.contains(*irr)) {
      parent.emplace(term, std::string(*irr));
      continue;
    }
    const std::string_view sv = term;
    if (sv.size() > 1 && sv.ends_with('s') && unique.contains(sv.substr(0, sv.size() - 1))) {
      parent.emplace(term, std::string(sv.substr(0, sv.size() - 1)));
    } else if (sv.size() > 2 && sv.ends_with("es") && unique.contains(sv.substr(0, sv.size() - 2))) {
      parent.emplace(term, std::string(sv.substr(0, sv.size() - 2)));
    }
  }

  for (const auto &term : unique) {
    std::string root = term;
    std::size_t hops = 0;
    for (auto it = parent.find(root); it != parent.end(); it = parent.find(root)) {
      root = it->second;
      if (++hops > unique.size()) {  // cyclic table entries
        root = term;
        break;
      }
    }
    lex.canonical_of_.emplace(term, std::move(root));
  }
  lex.sorted_.assign(unique.begin(), unique.end());
  return lex;
}

bool BodyPartLexicon::contains(std::string_view term) const { return canonical_of_.find(term) != canonical_of_.end(); }

std::optional<std::string_view> BodyPartLexicon::canonical(std::string_view term) const {
  if (auto it = canonical_of_.find(term); it != canonical_of_.end()) return std::string_view(it->second);
  return std::nullopt;
}

std::string BodyPartLexicon::serialize() const {
  std::string out;
  for (const auto &t : sorted_) {
    out += t;
    out += '\n';
  }
  return out;
}

BodyPartLexicon load_bp_terms(const std::filesystem::path &path, const PluralTable &plurals) {
  return BodyPartLexicon::from_terms(load_word_list(path), plurals);
}

// ---------------------------------------------------------------------------
// EmotionLexicon

EmotionSet EmotionLexicon::lookup(std::string_view word) const {
  if (auto it = assoc_.find(word); it != assoc_.end()) return it->second;
  return 0;
}

bool EmotionLexicon::contains(std::string_view word) const { return assoc_.find(word) != assoc_.end(); }

void EmotionLexicon::set(std::string word, EmotionSet emotions) { assoc_[std::move(word)] = emotions; }

void EmotionLexicon::add(std::string_view word, std::optional<Emotion> emotion) {
  auto it = assoc_.find(word);
  if (it == assoc_.end()) it = assoc_.emplace(std::string(word), EmotionSet{0}).first;
  if (emotion) it->second |= emotion_bit(*emotion);
}

EmotionLexicon parse_emotion_lexicon(std::string_view content, const std::string &source) {
  EmotionLexicon lex;
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = split(lines[i], '\t');
    if (fields.size() != 3) throw ParseError(source, i + 1, "expected word<TAB>emotion<TAB>flag");
    const auto word = to_lower_ascii(trim(fields[0]));
    if (word.empty()) throw ParseError(source, i + 1, "empty word");
    const auto label = to_lower_ascii(trim(fields[1]));
    const auto flag = trim(fields[2]);
    if (flag != "0" && flag != "1") throw ParseError(source, i + 1, "flag must be 0 or 1");

    const auto emotion = parse_emotion(label);
    if (!emotion && label != "positive" && label != "negative") {
      throw ParseError(source, i + 1, "unknown emotion label '" + label + "'");
    }
    lex.add(word, (emotion && flag == "1") ? emotion : std::nullopt);
  }
  return lex;
}

EmotionLexicon load_emotion_lexicon(const std::filesystem::path &path) {
  return parse_emotion_lexicon(read_file(path), path.string());
}

// ---------------------------------------------------------------------------
// VadLexicon

VadLexicon::VadLexicon(double hi, double lo) : hi_(hi), lo_(lo) {
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
    throw ConfigError("VAD thresholds must satisfy 0 <= lo < hi <= 1 (got lo=" + std::to_string(lo) +
                      ", hi=" + std::to_string(hi) + ")");
  }
}

std::optional<VadScores> VadLexicon::find(std::string_view word) const {
  if (auto it = scores_.find(word); it != scores_.end()) return it->second;
  return std::nullopt;
}

VadLevel VadLexicon::binarize(double score) const noexcept {
  if (score >= hi_) return VadLevel::high;
  if (score <= lo_) return VadLevel::low;
  return VadLevel::neutral;
}

VadPoleSet VadLexicon::poles(std::string_view word) const {
  auto it = scores_.find(word);
  if (it == scores_.end()) return 0;
  VadPoleSet out = 0;
  const auto mark = [&](double score, VadPole high, VadPole low) {
    switch (binarize(score)) {
      case VadLevel::high: out |= vad_bit(high); break;
      case VadLevel::low: out |= vad_bit(low); break;
      case VadLevel::neutral: break;
    }
  };
  mark(it->second.valence, VadPole::high_valence, VadPole::low_valence);
  mark(it->second.arousal, VadPole::high_arousal, VadPole::low_arousal);
  mark(it->second.dominance, VadPole::high_dominance, VadPole::low_dominance);
  return out;
}

void VadLexicon::set(std::string word, VadScores scores) { scores_[std::move(word)] = scores; }

VadLexicon parse_vad_lexicon(std::string_view content, double hi, double lo, const std::string &source) {
  VadLexicon lex(hi, lo);
  const auto lines = split_lines(content);
  bool first = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = split(lines[i], '\t');
    if (first) {
      first = false;
      if (!fields.empty() && to_lower_ascii(trim(fields[0])) == "word") continue;
    }
    if (fields.size() != 4) throw ParseError(source, i + 1, "expected word<TAB>v<TAB>a<TAB>d");
    auto word = to_lower_ascii(trim(fields[0]));
    if (word.empty()) throw ParseError(source, i + 1, "empty word");
    std::array<double, 3> v{};
    for (std::size_t k = 0; k < 3; ++k) {
      if (!parse_double(fields[k + 1], v[k])) throw ParseError(source, i + 1, "value is not a number");
      if (v[k] < 0.0 || v[k] > 1.0) throw ParseError(source, i + 1, "value outside [0,1]");
    }
    lex.set(std::move(word), VadScores{v[0], v[1], v[2]});
  }
  return lex;
}

VadLexicon load_vad_lexicon(const std::filesystem::path &path, double hi, double lo) {
  VadLexicon probe(hi, lo);  // validate thresholds before touching the file
  return parse_vad_lexicon(read_file(path), hi, lo, path.string());
}

}  // namespace somascope
