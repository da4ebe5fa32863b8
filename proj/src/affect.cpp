#include "somascope/affect.hpp"

#include <algorithm>
#include <cmath>

#include "somascope/error.hpp"

namespace somascope {

namespace {

double ratio(std::uint64_t num, std::uint64_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

bool by_count_then_term(std::uint64_t na, const std::string &ta, std::uint64_t nb, const std::string &tb) {
  return na != nb ? na > nb : ta < tb;
}

}  // namespace

double percent(std::uint64_t count, std::uint64_t denominator) noexcept { return 100.0 * ratio(count, denominator); }

std::optional<EmotionProfile> slice_profile(const SliceStats &slice, BpmClass cls) {
  const auto ci = static_cast<std::size_t>(cls);
  const auto n = slice.per_class[ci];
  if (n == 0) return std::nullopt;
  EmotionProfile p;
  p.label = class_name(cls);
  p.n = n;
  for (std::size_t d = 0; d < kDimensionCount; ++d) p.proportions[d] = ratio(slice.emotion_by_class[ci][d], n);
  return p;
}

ProfileSet class_profiles(const CorpusStats &stats, const std::vector<BpmClass> &classes) {
  ProfileSet out;
  for (auto cls : classes) {
    if (auto p = slice_profile(stats.global, cls)) {
      out.profiles.push_back(std::move(*p));
    } else {
      out.notices.push_back("class '" + std::string(class_name(cls)) + "' has no instances; omitted");
    }
  }
  return out;
}

DeltaReport per_type_deltas(const CorpusStats &stats, std::uint64_t min_count, std::size_t max_types) {
  const auto my = static_cast<std::size_t>(BpmClass::my);
  DeltaReport report;
  for (const auto &[term, counts] : stats.per_type) {
    const auto n = counts[my];
    if (n == 0 || n < min_count) continue;
    TypeDelta row;
    row.term = term;
    row.n = n;
    if (auto it = stats.my_type_emotions.find(term); it != stats.my_type_emotions.end()) {
      for (std::size_t d = 0; d < kDimensionCount; ++d) row.proportions[d] = ratio(it->second[d], n);
    }
    report.types.push_back(std::move(row));
  }
  std::sort(report.types.begin(), report.types.end(),
            [](const TypeDelta &a, const TypeDelta &b) { return by_count_then_term(a.n, a.term, b.n, b.term); });
  if (max_types > 0 && report.types.size() > max_types) report.types.resize(max_types);
  if (report.types.size() < 2) {
    throw DataError("per_type_deltas: " + std::to_string(report.types.size()) + " myBPM type(s) with at least " +
                    std::to_string(min_count) + " instances; need 2");
  }

  const auto m = static_cast<double>(report.types.size());
  for (std::size_t d = 0; d < kDimensionCount; ++d) {
    double sum = 0.0;
    for (const auto &t : report.types) sum += t.proportions[d];
    const double mean = sum / m;
    double ss = 0.0;
    for (auto &t : report.types) {
      t.deltas[d] = t.proportions[d] - mean;
      ss += t.deltas[d] * t.deltas[d];
    }
    report.mean[d] = mean;
    report.std_dev[d] = std::sqrt(ss / m);
  }
  return report;
}

std::vector<TypeShare> top_types(const CorpusStats &stats, BpmClass cls, long k) {
  if (k <= 0) throw DataError("top_types: k must be positive");
  const auto ci = static_cast<std::size_t>(cls);
  std::vector<TypeShare> rows;
  std::uint64_t total = 0;
  for (const auto &[term, counts] : stats.per_type) {
    if (counts[ci] == 0) continue;
    rows.push_back(TypeShare{term, counts[ci], 0.0});
    total += counts[ci];
  }
  for (auto &r : rows) r.share_percent = percent(r.count, total);
  std::sort(rows.begin(), rows.end(), [](const TypeShare &a, const TypeShare &b) {
    return by_count_then_term(a.count, a.term, b.count, b.term);
  });
  if (rows.size() > static_cast<std::size_t>(k)) rows.resize(static_cast<std::size_t>(k));
  return rows;
}

LengthReport length_report(const CorpusStats &stats) {
  LengthReport rep;
  const auto &g = stats.global;
  for (std::size_t c = 0; c < kClassCount; ++c) {
    if (g.per_class[c] == 0) continue;
    rep.rows.push_back(LengthRow{static_cast<BpmClass>(c), g.per_class[c], ratio(g.char_sum[c], g.per_class[c]),
                                 ratio(g.token_sum[c], g.per_class[c])});
  }
  const auto find = [&rep](BpmClass c) -> const LengthRow * {
    for (const auto &r : rep.rows) {
      if (r.cls == c) return &r;
    }
    return nullptr;
  };
  const auto *bpm = find(BpmClass::bpm);
  const auto *nobpm = find(BpmClass::nobpm);
  if (bpm != nullptr && nobpm != nullptr) {
    if (nobpm->mean_chars > 0) rep.char_ratio = bpm->mean_chars / nobpm->mean_chars;
    if (nobpm->mean_tokens > 0) rep.token_ratio = bpm->mean_tokens / nobpm->mean_tokens;
  }
  return rep;
}

namespace {

std::vector<std::pair<const GroupKey *, const SliceStats *>> groups_in_order(const CorpusStats &stats, GroupKind kind) {
  std::vector<std::pair<const GroupKey *, const SliceStats *>> out;
  for (const auto &[key, slice] : stats.per_group) {
    if (key.kind == kind) out.emplace_back(&key, &slice);
  }
  if (kind == GroupKind::length_bin) {
    std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
      return length_bin_order(a.first->value) < length_bin_order(b.first->value);
    });
  }
  return out;
}

}  // namespace

std::vector<BinnedProfile> binned_profiles(const CorpusStats &stats, const std::vector<BpmClass> &classes) {
  std::vector<BinnedProfile> out;
  for (const auto &[key, slice] : groups_in_order(stats, GroupKind::length_bin)) {
    for (auto cls : classes) {
      if (auto p = slice_profile(*slice, cls)) out.push_back(BinnedProfile{key->value, std::move(*p), cls});
    }
  }
  return out;
}

std::vector<DiversityRow> type_diversity(const CorpusStats &stats, double threshold) {
  std::vector<DiversityRow> rows;
  for (auto cls : {BpmClass::bpm, BpmClass::possessed, BpmClass::my, BpmClass::your, BpmClass::his, BpmClass::her,
                   BpmClass::their, BpmClass::third}) {
    const auto ci = static_cast<std::size_t>(cls);
    std::uint64_t total = 0;
    std::size_t types = 0;
    for (const auto &[term, counts] : stats.per_type) {
      total += counts[ci];
      types += counts[ci] > 0 ? 1 : 0;
    }
    DiversityRow row{cls, 0, types};
    for (const auto &[term, counts] : stats.per_type) {
      if (counts[ci] > 0 && ratio(counts[ci], total) > threshold) ++row.types_above;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<LexiconGroupProfile> lexicon_profile_of_bp_words(const BodyPartLexicon &bp, const EmotionLexicon &emo,
                                                             const VadLexicon &vad,
                                                             const std::set<std::string> &frequent) {
  for (const auto &w : frequent) {
    if (!bp.contains(w)) throw DataError("frequent word '" + w + "' is not in the body-part lexicon");
  }
  std::set<std::string> all_bp(bp.terms().begin(), bp.terms().end());
  std::set<std::string> non_bp;
  for (const auto &[w, _] : emo.entries()) {
    if (!bp.contains(w)) non_bp.insert(w);
  }
  for (const auto &[w, _] : vad.entries()) {
    if (!bp.contains(w)) non_bp.insert(w);
  }

  const auto profile = [&](const std::string &name, const std::set<std::string> &words) {
    LexiconGroupProfile g;
    g.group = name;
    g.words = words.size();
    std::array<double, 3> vad_sum{};
    std::array<std::size_t, kEmotionCount> emo_hits{};
    for (const auto &w : words) {  // sorted, so sums are reproducible
      if (emo.contains(w)) {
        ++g.in_emotion;
        const auto set = emo.lookup(w);
        for (std::size_t e = 0; e < kEmotionCount; ++e) emo_hits[e] += (set >> e) & 1U;
      }
      if (auto s = vad.find(w)) {
        ++g.in_vad;
        vad_sum[0] += s->valence;
        vad_sum[1] += s->arousal;
        vad_sum[2] += s->dominance;
      }
    }
    if (g.in_emotion == 0) throw DataError("lexicon profile: group '" + name + "' has no entry in the emotion lexicon");
    if (g.in_vad == 0) throw DataError("lexicon profile: group '" + name + "' has no entry in the VAD lexicon");
    for (std::size_t k = 0; k < 3; ++k) g.mean_vad[k] = vad_sum[k] / static_cast<double>(g.in_vad);
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      g.emotion_rate[e] = static_cast<double>(emo_hits[e]) / static_cast<double>(g.in_emotion);
    }
    return g;
  };

  return {profile("frequent_bp", frequent), profile("all_bp", all_bp), profile("non_bp", non_bp)};
}

std::vector<PrevalenceRow> prevalence_by_group(const CorpusStats &stats, GroupKind kind) {
  std::vector<PrevalenceRow> rows;
  for (const auto &[key, slice] : groups_in_order(stats, kind)) {
    rows.push_back(PrevalenceRow{key->value, slice->total, slice->per_class});
  }
  return rows;
}

}  // namespace somascope
