#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "json.hpp"
#include "somascope/error.hpp"
#include "somascope/report.hpp"
#include "somascope/strings.hpp"
#include "support.hpp"

using namespace somascope;

namespace {

const RunMeta kMeta{"0123456789abcdef", 7};

std::vector<std::string> lines_of(const std::string &s) {
  std::vector<std::string> out;
  for (auto sv : split_lines(s)) out.emplace_back(sv);
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

}  // namespace

TEST_CASE("CSV rendering") {
  Table t;
  t.name = "demo";
  t.columns = {"label", "n", "pct", "prop", "p", "flag", "missing"};
  t.rows.push_back({"a,b", std::uint64_t{3}, Cell::pct(12.345), Cell::prop(-0.00001), Cell::sci(1.5e-12), true,
                    Cell::real(std::numeric_limits<double>::quiet_NaN())});
  t.notes.push_back("hello");
  const auto lines = lines_of(render_csv(t, kMeta));
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "# tool=somascope version=0.1.0 config_hash=0123456789abcdef seed=7");
  CHECK(lines[1] == "# note: hello");
  CHECK(lines[2] == "label,n,pct,prop,p,flag,missing");
  CHECK(lines[3] == "\"a,b\",3,12.3,0.0000,1.5e-12,true,");
}

TEST_CASE("JSON rendering keeps full precision") {
  Table t;
  t.name = "demo";
  t.columns = {"x", "y"};
  t.rows.push_back({Cell::pct(1.0 / 3.0), Cell()});
  const auto doc = nlohmann::json::parse(render_json(t, kMeta));
  CHECK(doc["meta"]["config_hash"] == "0123456789abcdef");
  CHECK(doc["meta"]["seed"] == 7);
  CHECK(doc["table"] == "demo");
  CHECK(doc["rows"][0]["x"].get<double>() == 1.0 / 3.0);
  CHECK(doc["rows"][0]["y"].is_null());
}

TEST_CASE("every report builds on the fixture") {
  const auto &fx = testsupport::Fixture::get();
  const auto stats = scan(fx.instances, fx.context());
  ReportOptions opt;
  opt.min_count = 20;
  const ReportLexicons lex{&fx.bp, &fx.emo, &fx.vad};
  for (const auto &name : report_names()) {
    const auto tables = build_report(name, stats, opt, lex);
    REQUIRE_FALSE(tables.empty());
    for (const auto &t : tables) {
      CHECK_FALSE(t.rows.empty());
      for (const auto &row : t.rows) CHECK(row.size() == t.columns.size());
    }
  }
  CHECK_THROWS_AS(build_report("B9", stats, opt), ConfigError);
}

TEST_CASE("empty stats give header-only tables") {
  const CorpusStats empty;
  const ReportOptions opt;
  for (const auto &name : report_names()) {
    for (const auto &t : build_report(name, empty, opt)) {
      CHECK(t.rows.empty());
      const auto lines = lines_of(render_csv(t, kMeta));
      REQUIRE(lines.size() >= 2);
      CHECK(lines.back().front() != '#');
    }
  }
}

TEST_CASE("B2 percentages are bounded by the BPM count") {
  const auto &fx = testsupport::Fixture::get();
  const auto stats = scan(fx.instances, fx.context());
  const auto t = build_report("B2", stats, ReportOptions{}).front();
  for (const auto &row : t.rows) {
    CHECK(std::get<double>(row[2].value) <= 100.0);
    CHECK(row[2].decimals == 1);
  }
}

TEST_CASE("FNV-1a test vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}
