#include "somascope/healthcorr.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "somascope/error.hpp"
#include "somascope/lexicon.hpp"
#include "somascope/strings.hpp"

namespace somascope {

std::string normalize_city(std::string_view city) { return to_lower_ascii(trim(city)); }

std::vector<HealthRecord> parse_health_csv(std::string_view content, const std::string &source) {
  std::vector<HealthRecord> records;
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::string> fields;
  bool header_seen = false;
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    if (!parse_csv_line(lines[i], fields)) throw ParseError(source, i + 1, "unterminated quote");
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 3 || trim(fields[0]) != "city" || trim(fields[1]) != "metric" ||
          trim(fields[2]) != "value") {
        throw ParseError(source, i + 1, "expected header city,metric,value");
      }
      continue;
    }
    if (fields.size() != 3) throw ParseError(source, i + 1, "expected 3 fields");
    HealthRecord r;
    r.city = normalize_city(fields[0]);
    r.metric = std::string(trim(fields[1]));
    if (r.city.empty() || r.metric.empty()) throw ParseError(source, i + 1, "empty city or metric");
    if (!parse_double(fields[2], r.value)) throw ParseError(source, i + 1, "value is not a finite number");
    if (!seen.emplace(r.city, r.metric).second) {
      throw ParseError(source, i + 1, "duplicate (city, metric) = (" + r.city + ", " + r.metric + ")");
    }
    records.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(source, 1, "missing header");
  return records;
}

std::vector<HealthRecord> load_health_csv(const std::filesystem::path &path) {
  return parse_health_csv(read_file(path), path.string());
}

CityFeature CityFeature::parse(std::string_view name) {
  name = trim(name);
  if (name == "tweet_count") return {Kind::tweet_count, 0};
  if (name == "bpm_share") return {Kind::bpm_share, 0};
  if (name == "my_bpm_share") return {Kind::my_bpm_share, 0};
  constexpr std::string_view prefix = "emotion_share:";
  if (name.starts_with(prefix)) {
    const auto dim = name.substr(prefix.size());
    for (std::size_t d = 0; d < kDimensionCount; ++d) {
      if (dimension_name(d) == dim) return {Kind::emotion_share, d};
    }
  }
  throw ConfigError("unknown city feature '" + std::string(name) + "'");
}

std::string CityFeature::name() const {
  switch (kind) {
    case Kind::tweet_count: return "tweet_count";
    case Kind::bpm_share: return "bpm_share";
    case Kind::my_bpm_share: return "my_bpm_share";
    case Kind::emotion_share: return "emotion_share:" + std::string(dimension_name(dimension));
  }
  return {};
}

double CityFeature::value(const SliceStats &city) const {
  const auto share = [&city](std::uint64_t count) {
    return city.total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(city.total);
  };
  switch (kind) {
    case Kind::tweet_count: return static_cast<double>(city.total);
    case Kind::bpm_share: return share(city.count(BpmClass::bpm));
    case Kind::my_bpm_share: return share(city.count(BpmClass::my));
    case Kind::emotion_share: {
      // BPM and NOBPM partition the slice, so their sum covers every instance.
      const auto bpm = city.emotion_by_class[static_cast<std::size_t>(BpmClass::bpm)][dimension];
      const auto nobpm = city.emotion_by_class[static_cast<std::size_t>(BpmClass::nobpm)][dimension];
      return share(bpm + nobpm);
    }
  }
  return 0.0;
}

std::vector<CityFeature> default_city_features() {
  std::vector<CityFeature> out = {{CityFeature::Kind::tweet_count, 0},
                                  {CityFeature::Kind::bpm_share, 0},
                                  {CityFeature::Kind::my_bpm_share, 0}};
  for (std::size_t d = 0; d < kDimensionCount; ++d) out.push_back({CityFeature::Kind::emotion_share, d});
  return out;
}

CorrelationTable correlate(const CorpusStats &stats, const std::vector<HealthRecord> &health,
                           const std::vector<CityFeature> &features) {
  std::map<std::string, SliceStats> cities;
  for (const auto &[key, slice] : stats.per_group) {
    if (key.kind == GroupKind::city) cities[normalize_city(key.value)] += slice;
  }
  std::map<std::string, std::map<std::string, double>> by_metric;  // metric -> city -> value
  std::set<std::string> health_cities;
  for (const auto &r : health) {
    by_metric[r.metric][normalize_city(r.city)] = r.value;
    health_cities.insert(normalize_city(r.city));
  }

  CorrelationTable table;
  for (const auto &[city, _] : cities) {
    if (!health_cities.contains(city)) table.corpus_only.push_back(city);
  }
  for (const auto &city : health_cities) {
    if (!cities.contains(city)) table.health_only.push_back(city);
  }

  for (const auto &feature : features) {
    for (const auto &[metric, values] : by_metric) {
      std::vector<double> x;
      std::vector<double> y;
      for (const auto &[city, value] : values) {
        const auto it = cities.find(city);
        if (it == cities.end()) continue;
        x.push_back(feature.value(it->second));
        y.push_back(value);
      }
      if (x.size() < 3) {
        throw DataError("correlate: only " + std::to_string(x.size()) + " cities have both corpus data and '" +
                        metric + "'; need 3");
      }
      const auto constant = [](const std::vector<double> &v) {
        return std::all_of(v.begin(), v.end(), [&v](double d) { return d == v.front(); });
      };
      if (constant(x) || constant(y)) {
        // Rank correlation is undefined; keep the row so the table stays complete.
        CorrelationResult undefined;
        undefined.rho = std::numeric_limits<double>::quiet_NaN();
        undefined.p = 1.0;
        undefined.n = x.size();
        table.rows.push_back(CorrelationRow{feature.name(), metric, undefined});
        table.undefined.push_back(feature.name() + " vs " + metric);
        continue;
      }
      table.rows.push_back(CorrelationRow{feature.name(), metric, spearman(x, y)});
    }
  }
  return table;
}

}  // namespace somascope
