#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "somascope/error.hpp"
#include "somascope/healthcorr.hpp"
#include "support.hpp"

using namespace somascope;
using Catch::Matchers::WithinAbs;

namespace {

// Five cities with BPM shares 1/10 .. 5/10 over 10 instances each.
CorpusStats city_stats() {
  ScanContext ctx;
  ctx.lexicons.body_parts = &testsupport::Fixture::get().bp;
  std::vector<Instance> v;
  const std::vector<std::string> cities{"Alpha", "Beta", "Gamma", "Delta", "Epsilon"};
  for (std::size_t c = 0; c < cities.size(); ++c) {
    for (std::size_t i = 0; i < 10 + c; ++i) {
      Instance inst;
      inst.id = cities[c] + std::to_string(i);
      inst.text = i <= c ? "my head" : "nothing";
      inst.city = cities[c];
      v.push_back(inst);
    }
  }
  return scan(v, ctx);
}

}  // namespace

TEST_CASE("health CSV parsing") {
  const auto recs = parse_health_csv("city,metric,value\n  Alpha ,life_expectancy,78.5\nBETA,life_expectancy,77\n"
                                     "alpha,physical_inactivity,25\n");
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].city == "alpha");
  CHECK(recs[0].metric == "life_expectancy");
  CHECK(recs[0].value == 78.5);
  CHECK(recs[1].city == "beta");
  CHECK(parse_health_csv("city,metric,value\n").empty());
  CHECK_THROWS_AS(parse_health_csv("city,metric,value\nA,m,1\na ,m,2\n"), ParseError);
  CHECK_THROWS_AS(parse_health_csv("city,metric,value\nA,m,abc\n"), ParseError);
  CHECK_THROWS_AS(parse_health_csv("town,metric,value\n"), ParseError);
}

TEST_CASE("feature names round trip") {
  for (const auto &f : default_city_features()) CHECK(CityFeature::parse(f.name()).name() == f.name());
  CHECK(default_city_features().size() == 3 + kDimensionCount);
  CHECK_THROWS_AS(CityFeature::parse("emotion_share:bliss"), ConfigError);
}

TEST_CASE("correlate matches the rank oracle") {
  const auto stats = city_stats();
  std::vector<HealthRecord> health;
  const std::vector<double> distress{10.0, 12.5, 11.0, 15.0, 14.0};
  const std::vector<std::string> names{"alpha", "beta", "gamma", "delta", "epsilon"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    health.push_back({names[i], "distress", distress[i]});
    health.push_back({names[i], "same", static_cast<double>(i)});
  }
  health.push_back({"zeta", "distress", 9.0});

  const std::vector<CityFeature> features{CityFeature::parse("bpm_share"), CityFeature::parse("tweet_count"),
                                          CityFeature::parse("emotion_share:joy")};
  const auto table = correlate(stats, health, features);
  CHECK(table.rows.size() == features.size() * 2);
  CHECK(table.health_only == std::vector<std::string>{"zeta"});
  CHECK(table.corpus_only.empty());

  // City order in the join is alphabetical: alpha, beta, delta, epsilon, gamma.
  const std::vector<double> share{0.1, 2.0 / 11, 4.0 / 13, 5.0 / 14, 3.0 / 12};
  const std::vector<double> y{10.0, 12.5, 15.0, 14.0, 11.0};
  const auto &row = table.rows[0];
  CHECK(row.feature == "bpm_share");
  CHECK(row.metric == "distress");
  CHECK_THAT(row.result.rho, WithinAbs(oracle::spearman_rho(share, y), 1e-12));
  CHECK_THAT(row.result.p, WithinAbs(oracle::spearman_p(row.result.rho, 5), 1e-9));
  CHECK(row.significant() == (row.result.p < 0.05));

  // bpm_share rises with the city index, as does "same".
  CHECK(table.rows[1].metric == "same");
  CHECK(table.rows[1].result.rho == 1.0);
  CHECK(table.rows[1].significant());

  // No emotion lexicon: the joy share is constant, so rho is undefined but the row stays.
  const auto &joy = table.rows[4];
  CHECK(joy.feature == "emotion_share:joy");
  CHECK(std::isnan(joy.result.rho));
  CHECK(joy.result.p == 1.0);
  CHECK_FALSE(joy.significant());
  CHECK(table.undefined.size() == 2);
}

TEST_CASE("correlate needs three shared cities") {
  const auto stats = city_stats();
  const std::vector<HealthRecord> health{{"alpha", "m", 1}, {"beta", "m", 2}, {"omega", "m", 3}};
  CHECK_THROWS_AS(correlate(stats, health, default_city_features()), DataError);
}
