#include <catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "somascope/corpus.hpp"
#include "somascope/lexicon.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using testsupport::bundled_path;
using testsupport::data_path;

namespace {

const fs::path &workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("somascope_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string &args) {
  const std::string cmd = std::string(SOMASCOPE_CLI_PATH) + " " + args + " >" + (workdir() / "stdout").string() +
                          " 2>" + (workdir() / "stderr").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) { return somascope::read_file(p); }

std::string scan_args(const fs::path &input, const fs::path &out) {
  return "scan --input " + input.string() + " --bp-lexicon " + bundled_path("bp_terms.txt").string() +
         " --emotion-lexicon " + data_path("emotion_lexicon.tsv").string() + " --vad-lexicon " +
         data_path("vad_lexicon.tsv").string() + " --out " + out.string();
}

}  // namespace

TEST_CASE("scan of an empty corpus") {
  const auto empty = workdir() / "empty.jsonl";
  std::ofstream(empty).close();
  REQUIRE(run(scan_args(empty, workdir() / "empty_stats.json")) == 0);
  const auto stats = somascope::stats_from_json(slurp(workdir() / "empty_stats.json"));
  CHECK(stats.total_instances() == 0);

  REQUIRE(run("report --input " + (workdir() / "empty_stats.json").string() + " --out " +
              (workdir() / "empty_report").string()) == 0);
  const auto b1 = slurp(workdir() / "empty_report" / "b1_prevalence.csv");
  CHECK(b1.substr(b1.find('\n') + 1) == "scope,instances,bpm,bpm_pct,nobpm,nobpm_pct\n");
}

TEST_CASE("CLI scan equals the library call byte for byte") {
  REQUIRE(run(scan_args(data_path("fixture_corpus.jsonl"), workdir() / "stats1.json")) == 0);
  REQUIRE(run(scan_args(data_path("fixture_corpus.jsonl"), workdir() / "stats4.json") + " --threads 4") == 0);

  const auto &fx = testsupport::Fixture::get();
  std::ifstream in(data_path("fixture_corpus.jsonl"), std::ios::binary);
  const auto direct = somascope::stats_to_json(somascope::scan_stream(in, fx.context()));
  CHECK(slurp(workdir() / "stats1.json") == direct);
  CHECK(slurp(workdir() / "stats4.json") == direct);
  CHECK(slurp(workdir() / "stderr").find("skipped 6") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  const auto corpus = data_path("fixture_corpus.jsonl").string();
  CHECK(run("scan --input " + corpus) == 2);  // no --bp-lexicon
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run(scan_args(data_path("fixture_corpus.jsonl"), workdir() / "x.json") + " --vad-hi 0.2 --vad-lo 0.5") == 2);
  CHECK(run("scan --input " + corpus + " --bp-lexicon " + bundled_path("bp_terms.txt").string() + " --vad-hi 0.8") ==
        2);
  REQUIRE(run(scan_args(data_path("fixture_corpus.jsonl"), workdir() / "stats.json")) == 0);
  const auto stats = (workdir() / "stats.json").string();
  CHECK(run("report B9 --input " + stats + " --out " + (workdir() / "r").string()) == 2);
  CHECK(run("report --input " + stats + " --format xml") == 2);
  CHECK(run("report lexicon --input " + stats + " --bp-lexicon " + bundled_path("bp_terms.txt").string()) == 2);
  CHECK(run("shcmp --ratings " + data_path("ratings.csv").string() + " --bins 1-3") == 2);
  CHECK(run("report --input /does/not/exist.json") == 2);
  CHECK(run("--version") == 0);
}

TEST_CASE("data errors exit with 1") {
  const auto bad = workdir() / "bad_health.csv";
  std::ofstream(bad) << "city,metric,value\nA,m,not-a-number\n";
  REQUIRE(run(scan_args(data_path("fixture_corpus.jsonl"), workdir() / "stats.json")) == 0);
  CHECK(run("correlate --input " + (workdir() / "stats.json").string() + " --health " + bad.string()) == 1);
  CHECK(slurp(workdir() / "stderr").find("bad_health.csv:2") != std::string::npos);

  const auto cmd = "SOMASCOPE_DATA_DIR=" + (workdir() / "nowhere").string() + " " +
                   std::string(SOMASCOPE_CLI_PATH) + " " +
                   scan_args(data_path("fixture_corpus.jsonl"), workdir() / "y.json") + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 1);
}

TEST_CASE("reruns with the same seed are identical") {
  const auto ratings = data_path("ratings.csv").string();
  REQUIRE(run("shcmp --ratings " + ratings + " --bins 2-4 --trials 200 --seed 5 --format json --out " +
              (workdir() / "s1").string()) == 0);
  REQUIRE(run("shcmp --ratings " + ratings + " --bins 2-4 --trials 200 --seed 5 --format json --out " +
              (workdir() / "s2").string()) == 0);
  CHECK(slurp(workdir() / "s1" / "shcmp.json") == slurp(workdir() / "s2" / "shcmp.json"));
  REQUIRE(run("shcmp --ratings " + ratings + " --bins 2-4 --trials 200 --seed 6 --format json --out " +
              (workdir() / "s3").string()) == 0);
  CHECK(slurp(workdir() / "s1" / "shcmp.json") != slurp(workdir() / "s3" / "shcmp.json"));

  REQUIRE(run("aggregate --ratings " + ratings + " --out " + (workdir() / "agg").string()) == 0);
  CHECK(slurp(workdir() / "agg" / "aggregated_labels.csv").find("t000,fear,") != std::string::npos);
}
