#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "somascope/affect.hpp"
#include "somascope/error.hpp"
#include "support.hpp"

using namespace somascope;
using Catch::Matchers::WithinAbs;
using testsupport::Fixture;

namespace {

const CorpusStats &fixture_stats() {
  static const CorpusStats s = scan(Fixture::get().instances, Fixture::get().context());
  return s;
}

Instance tweet(std::string id, std::string text) {
  Instance i;
  i.id = std::move(id);
  i.text = std::move(text);
  return i;
}

// Hand-built corpus with a known emotion split.
CorpusStats small_stats() {
  static const EmotionLexicon emo = parse_emotion_lexicon("ache\tsadness\t1\nglad\tjoy\t1\n");
  ScanContext ctx;
  ctx.lexicons.body_parts = &Fixture::get().bp;
  ctx.lexicons.emotions = &emo;
  std::vector<Instance> v;
  for (int i = 0; i < 4; ++i) v.push_back(tweet("m" + std::to_string(i), i == 0 ? "my head ache" : "my head"));
  for (int i = 0; i < 2; ++i) v.push_back(tweet("k" + std::to_string(i), i == 0 ? "my knee glad" : "my knee ache"));
  v.push_back(tweet("y", "your knee"));
  for (int i = 0; i < 5; ++i) v.push_back(tweet("n" + std::to_string(i), i < 2 ? "so glad" : "nothing"));
  return scan(v, ctx);
}

}  // namespace

TEST_CASE("class profiles are co-occurrence proportions") {
  const auto stats = small_stats();
  const auto set = class_profiles(stats, {BpmClass::my, BpmClass::nobpm, BpmClass::his});
  REQUIRE(set.profiles.size() == 2);
  CHECK(set.notices.size() == 1);
  const auto &my = set.profiles[0];
  CHECK(my.label == "my");
  CHECK(my.n == 6);
  CHECK(my.proportions[static_cast<std::size_t>(Emotion::sadness)] == 2.0 / 6.0);
  CHECK(my.proportions[static_cast<std::size_t>(Emotion::joy)] == 1.0 / 6.0);
  CHECK(set.profiles[1].proportions[static_cast<std::size_t>(Emotion::joy)] == 2.0 / 5.0);
}

TEST_CASE("per-type deltas") {
  const auto rep = per_type_deltas(small_stats(), 2);
  REQUIRE(rep.types.size() == 2);
  CHECK(rep.types[0].term == "head");
  CHECK(rep.types[1].term == "knee");
  const auto sad = static_cast<std::size_t>(Emotion::sadness);
  // head 1/4, knee 1/2
  CHECK_THAT(rep.mean[sad], WithinAbs(0.375, 1e-15));
  CHECK_THAT(rep.types[0].deltas[sad], WithinAbs(-0.125, 1e-15));
  CHECK_THAT(rep.std_dev[sad], WithinAbs(0.125, 1e-15));
  CHECK_THROWS_AS(per_type_deltas(small_stats(), 3), DataError);
  CHECK_THROWS_AS(per_type_deltas(small_stats(), 1, 1), DataError);  // cap leaves one type
}

TEST_CASE("deltas on the fixture sum to zero") {
  const auto rep = per_type_deltas(fixture_stats(), 10);
  REQUIRE(rep.types.size() >= 2);
  for (std::size_t d = 0; d < kDimensionCount; ++d) {
    double s = 0.0;
    for (const auto &t : rep.types) s += t.deltas[d];
    CHECK(std::abs(s) <= 1e-12);
  }
}

TEST_CASE("top types") {
  const auto stats = small_stats();
  const auto rows = top_types(stats, BpmClass::my, 10);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].term == "head");
  CHECK(rows[0].count == 4);
  CHECK_THAT(rows[0].share_percent, WithinAbs(100.0 * 4 / 6, 1e-12));
  CHECK(top_types(stats, BpmClass::my, 1).size() == 1);
  CHECK(top_types(stats, BpmClass::his, 5).empty());
  CHECK_THROWS_AS(top_types(stats, BpmClass::my, 0), DataError);

  const auto all = top_types(fixture_stats(), BpmClass::bpm, 100000);
  double sum = 0.0;
  for (const auto &r : all) sum += r.share_percent;
  CHECK_THAT(sum, WithinAbs(100.0, 1e-9));
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].count >= all[i].count);
}

TEST_CASE("length report") {
  const auto rep = length_report(small_stats());
  REQUIRE(rep.char_ratio);
  REQUIRE(rep.token_ratio);
  const auto &g = small_stats().global;
  const double bpm_tokens = static_cast<double>(g.token_sum[0]) / static_cast<double>(g.per_class[0]);
  const double nobpm_tokens = static_cast<double>(g.token_sum[1]) / static_cast<double>(g.per_class[1]);
  CHECK(*rep.token_ratio == bpm_tokens / nobpm_tokens);
  CHECK(length_report(CorpusStats{}).rows.empty());
}

TEST_CASE("binned profiles in bin order") {
  const auto bins = binned_profiles(fixture_stats());
  REQUIRE_FALSE(bins.empty());
  for (std::size_t i = 1; i < bins.size(); ++i) {
    CHECK(length_bin_order(bins[i - 1].bin) <= length_bin_order(bins[i].bin));
  }
}

TEST_CASE("type diversity threshold") {
  const auto rows = type_diversity(small_stats(), 0.4);
  const auto my = std::find_if(rows.begin(), rows.end(), [](const auto &r) { return r.cls == BpmClass::my; });
  REQUIRE(my != rows.end());
  CHECK(my->types_total == 2);
  CHECK(my->types_above == 1);  // head 4/6 > 0.4, knee 2/6 not
}

TEST_CASE("lexicon profile groups") {
  const auto &fx = Fixture::get();
  const auto groups = lexicon_profile_of_bp_words(fx.bp, fx.emo, fx.vad, {"heart", "head"});
  REQUIRE(groups.size() == 3);
  CHECK(groups[0].group == "frequent_bp");
  CHECK(groups[0].words == 2);
  CHECK(groups[0].in_vad == 2);
  CHECK_THAT(groups[0].mean_vad[0], WithinAbs((0.8 + 0.5) / 2, 1e-12));
  CHECK(groups[1].words == fx.bp.size());
  CHECK_THROWS_AS(lexicon_profile_of_bp_words(fx.bp, fx.emo, fx.vad, {"table"}), DataError);
  CHECK_THROWS_AS(lexicon_profile_of_bp_words(fx.bp, fx.emo, fx.vad, {"pancreas"}), DataError);
}

TEST_CASE("prevalence by group orders months numerically") {
  const auto rows = prevalence_by_group(fixture_stats(), GroupKind::month);
  REQUIRE(rows.size() == 12);
  CHECK(rows.front().group == "01");
  CHECK(rows.back().group == "12");
  std::uint64_t total = 0;
  for (const auto &r : rows) total += r.total;
  CHECK(total <= fixture_stats().total_instances());
  CHECK(percent(1, 0) == 0.0);
  CHECK(percent(1, 4) == 25.0);
}
