#include <catch_amalgamated.hpp>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <map>
#include <random>

#include "somascope/error.hpp"
#include "somascope/inference.hpp"

using namespace somascope;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace bm = boost::math;

TEST_CASE("distribution tails against Boost.Math") {
  CHECK_THAT(chi_square_sf(3.84, 1), WithinAbs(0.05, 1e-3));
  for (double df : {1.0, 2.0, 3.5, 10.0, 48.0}) {
    for (double x : {0.01, 0.5, 1.0, 3.84, 12.0, 60.0}) {
      CHECK_THAT(chi_square_sf(x, df), WithinAbs(bm::cdf(bm::complement(bm::chi_squared(df), x)), 1e-12));
      CHECK_THAT(t_sf(x, df), WithinAbs(bm::cdf(bm::complement(bm::students_t(df), x)), 1e-12));
      CHECK_THAT(f_sf(x, 3, df), WithinAbs(bm::cdf(bm::complement(bm::fisher_f(3, df), x)), 1e-12));
      CHECK_THAT(normal_sf(x), WithinAbs(bm::cdf(bm::complement(bm::normal(), x)), 1e-14));
    }
  }
  CHECK(t_sf(0.0, 5) == 0.5);
  CHECK(chi_square_sf(0.0, 3) == 1.0);
  CHECK_THROWS_AS(chi_square_sf(1.0, 0), DataError);
  CHECK_THROWS_AS(t_sf(1.0, -1), DataError);
}

TEST_CASE("average ranks with ties") {
  const std::vector<double> v{10, 20, 10, 30, 20, 20};
  CHECK(average_ranks(v) == std::vector<double>{1.5, 4, 1.5, 6, 4, 4});
}

TEST_CASE("Spearman basics") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2, 4, 6, 8, 10};
  const std::vector<double> r{5, 4, 3, 2, 1};
  auto res = spearman(x, y);
  CHECK(res.rho == 1.0);
  CHECK(res.p == 0.0);
  CHECK(res.n == 5);
  CHECK(spearman(x, r).rho == -1.0);

  // Hand example: d = (0, -1, 1, 0, 0) gives 1 - 6*2/(5*24) = 0.9.
  const std::vector<double> z{1, 3, 2, 4, 5};
  res = spearman(x, z);
  CHECK_THAT(res.rho, WithinAbs(0.9, 1e-15));
  const double t = 0.9 * std::sqrt(3.0 / (1 - 0.81));
  CHECK_THAT(res.p, WithinAbs(2 * bm::cdf(bm::complement(bm::students_t(3), t)), 1e-12));

  CHECK_THROWS_AS(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DataError);
  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 1, 1, 1, 1}), DataError);
  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2, 3}), DataError);
  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2, NAN, 4, 5}), DataError);
}

TEST_CASE("exact permutation p for small n") {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{1, 2, 3, 4};
  // Only the identity and the reversal reach |rho| = 1: 2 of 24.
  CHECK_THAT(spearman_permutation_p(x, y), WithinAbs(2.0 / 24.0, 1e-15));
  CHECK_THROWS_AS(spearman_permutation_p(std::vector<double>(11, 1.0), std::vector<double>(11, 1.0)), DataError);
}

// ---------------------------------------------------------------------------

TEST_CASE("saturated 2x2 logit recovers closed-form log-odds") {
  const std::vector<std::uint64_t> s{30, 60};
  const std::vector<std::uint64_t> n{100, 100};
  const std::vector<std::size_t> levels{0, 1};
  const auto fit = fit_binomial_logit(s, n, DesignMatrix::intercept_and_indicators(levels, 2));
  REQUIRE(fit.converged);
  const double b0 = std::log(0.3 / 0.7);
  const double b1 = std::log(0.6 / 0.4) - b0;
  CHECK_THAT(fit.coefficients[0], WithinAbs(b0, 1e-6));
  CHECK_THAT(fit.coefficients[1], WithinAbs(b1, 1e-6));
  CHECK_THAT(fit.std_errors[0], WithinAbs(std::sqrt(1.0 / 30 + 1.0 / 70), 1e-6));
  CHECK_THAT(fit.std_errors[1], WithinAbs(std::sqrt(1.0 / 30 + 1.0 / 70 + 1.0 / 60 + 1.0 / 40), 1e-6));

  // LR statistic by hand: saturated vs pooled p = 0.45.
  const auto ll = [](double k, double m, double p) { return k * std::log(p) + (m - k) * std::log(1 - p); };
  const double lr = 2 * (ll(30, 100, 0.3) + ll(60, 100, 0.6) - ll(90, 200, 0.45));
  CHECK_THAT(fit.lr_stat, WithinAbs(lr, 1e-8));
  CHECK_THAT(fit.lr_p, WithinAbs(bm::cdf(bm::complement(bm::chi_squared(1), lr)), 1e-8));
  CHECK(fit.parameters == 2);
}

TEST_CASE("equal proportions give a flat slope") {
  const std::vector<std::uint64_t> s{20, 40, 60, 80};
  const std::vector<std::uint64_t> n{100, 200, 300, 400};
  const std::vector<double> x{0, 1, 2, 3};
  const auto fit = fit_binomial_logit(s, n, DesignMatrix::intercept_and_slope(x));
  CHECK(std::abs(fit.coefficients[1]) < 1e-8);
  CHECK_THAT(fit.lr_stat, WithinAbs(0.0, 1e-8));
  CHECK_THAT(fit.lr_p, WithinAbs(1.0, 1e-6));
}

TEST_CASE("monotone month trend sign") {
  std::vector<double> x;
  std::vector<std::uint64_t> s;
  std::vector<std::uint64_t> n;
  for (int m = 0; m < 12; ++m) {
    x.push_back(m);
    n.push_back(5000);
    s.push_back(static_cast<std::uint64_t>(600 - 20 * m));
  }
  auto fit = fit_binomial_logit(s, n, DesignMatrix::intercept_and_slope(x));
  CHECK(fit.coefficients[1] < 0);
  CHECK(fit.lr_p < 1e-6);
  for (auto &v : s) v = 1200 - v;
  fit = fit_binomial_logit(s, n, DesignMatrix::intercept_and_slope(x));
  CHECK(fit.coefficients[1] > 0);
}

TEST_CASE("lr_test of nested fits") {
  const std::vector<std::uint64_t> s{10, 25, 40};
  const std::vector<std::uint64_t> n{100, 100, 100};
  const std::vector<std::size_t> levels{0, 1, 2};
  const auto full = fit_binomial_logit(s, n, DesignMatrix::intercept_and_indicators(levels, 3));
  const auto null = fit_binomial_logit(s, n, DesignMatrix::intercept_only(3));
  const auto test = lr_test(full, null, 2);
  CHECK_THAT(test.statistic, WithinAbs(full.lr_stat, 1e-9));
  CHECK_THAT(test.p, WithinAbs(bm::cdf(bm::complement(bm::chi_squared(2), test.statistic)), 1e-12));
  CHECK_THROWS_AS(lr_test(null, full, 2), DataError);
}

TEST_CASE("logit input errors") {
  const std::vector<double> x{1, 1, 1};
  const std::vector<std::uint64_t> s{1, 2, 3};
  const std::vector<std::uint64_t> n{10, 10, 10};
  CHECK_THROWS_AS(fit_binomial_logit(s, n, DesignMatrix::intercept_and_slope(x)), DataError);  // collinear
  const std::vector<std::uint64_t> too_many{11, 2, 3};
  const std::vector<double> x2{0, 1, 2};
  CHECK_THROWS_AS(fit_binomial_logit(too_many, n, DesignMatrix::intercept_and_slope(x2)), DataError);
  CHECK_THROWS_AS(fit_binomial_logit(s, std::vector<std::uint64_t>{10, 10}, DesignMatrix::intercept_and_slope(x2)),
                  DataError);
}

TEST_CASE("separated data terminates") {
  const std::vector<std::uint64_t> s{0, 0, 10, 10};
  const std::vector<std::uint64_t> n{10, 10, 10, 10};
  const std::vector<double> x{0, 1, 2, 3};
  const auto fit = fit_binomial_logit(s, n, DesignMatrix::intercept_and_slope(x));
  CHECK(fit.iterations <= 100);
  CHECK(fit.coefficients[1] > 0);
}

// ---------------------------------------------------------------------------

namespace {

struct Cells {
  std::vector<double> y;
  std::vector<std::string> a;
  std::vector<std::string> b;
};

Cells two_by_two() {
  // cell (a, b): two replicates
  const std::map<std::pair<int, int>, std::pair<double, double>> data = {
      {{0, 0}, {4, 6}}, {{0, 1}, {7, 9}}, {{1, 0}, {10, 12}}, {{1, 1}, {9, 15}}};
  Cells c;
  for (const auto &[k, v] : data) {
    for (double y : {v.first, v.second}) {
      c.y.push_back(y);
      c.a.push_back(k.first == 0 ? "a1" : "a2");
      c.b.push_back(k.second == 0 ? "b1" : "b2");
    }
  }
  return c;
}

}  // namespace

TEST_CASE("balanced 2x2 with replicates matches hand decomposition") {
  const auto c = two_by_two();
  const auto res = two_way_anova(c.y, c.a, c.b);
  // Cell means 5, 8, 11, 12; grand mean 9; level means A 6.5 / 11.5, B 8 / 10.
  const double ss_a = 4 * (2.5 * 2.5 + 2.5 * 2.5);
  const double ss_b = 4 * (1.0 + 1.0);
  const double ss_cells = 2 * (16 + 1 + 4 + 9);
  const double ss_ab = ss_cells - ss_a - ss_b;
  const double ss_e = 2 + 2 + 2 + 18;
  CHECK_THAT(res.factor_a.sum_sq, WithinAbs(ss_a, 1e-8));
  CHECK_THAT(res.factor_b.sum_sq, WithinAbs(ss_b, 1e-8));
  REQUIRE(res.interaction);
  CHECK_THAT(res.interaction->sum_sq, WithinAbs(ss_ab, 1e-8));
  CHECK_THAT(res.residual.sum_sq, WithinAbs(ss_e, 1e-8));
  CHECK(res.factor_a.df == 1);
  CHECK(res.residual.df == 4);
  const double ms_e = ss_e / 4;
  CHECK_THAT(res.factor_a.f, WithinAbs(ss_a / ms_e, 1e-8));
  CHECK_THAT(res.factor_a.p, WithinAbs(bm::cdf(bm::complement(bm::fisher_f(1, 4), ss_a / ms_e)), 1e-10));
  CHECK_THAT(res.factor_a.sum_sq + res.factor_b.sum_sq + res.interaction->sum_sq + res.residual.sum_sq,
             WithinAbs(res.total_sum_sq, 1e-8));
}

TEST_CASE("single replicate gives the additive model") {
  std::vector<double> y;
  std::vector<std::string> a;
  std::vector<std::string> b;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 6; ++j) {
      y.push_back(i * 0.3 + j * 0.1 + ((i * 7 + j * 3) % 5) * 0.01);
      a.push_back("c" + std::to_string(i));
      b.push_back("d" + std::to_string(j));
    }
  }
  const auto res = two_way_anova(y, a, b);
  CHECK_FALSE(res.interaction);
  CHECK(res.factor_a.df == 3);
  CHECK(res.factor_b.df == 5);
  CHECK(res.residual.df == 15);
  CHECK_THAT(res.factor_a.sum_sq + res.factor_b.sum_sq + res.residual.sum_sq, WithinAbs(res.total_sum_sq, 1e-10));
}

TEST_CASE("unbalanced design stays additive") {
  std::mt19937 rng(3);
  std::normal_distribution<double> noise(0, 1);
  std::vector<double> y;
  std::vector<std::string> a;
  std::vector<std::string> b;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int r = 0; r < 1 + (i + j) % 3; ++r) {
        y.push_back(i + 0.5 * j + noise(rng));
        a.push_back(std::to_string(i));
        b.push_back(std::to_string(j));
      }
    }
  }
  const auto res = two_way_anova(y, a, b);
  REQUIRE(res.interaction);
  CHECK_THAT(res.factor_a.sum_sq + res.factor_b.sum_sq + res.interaction->sum_sq + res.residual.sum_sq,
             WithinAbs(res.total_sum_sq, 1e-8));
  CHECK(res.residual.df == static_cast<double>(y.size() - 12));
}

TEST_CASE("ANOVA input errors") {
  const std::vector<double> y{1, 2, 3};
  const std::vector<std::string> one{"a", "a", "a"};
  const std::vector<std::string> three{"x", "y", "z"};
  CHECK_THROWS_AS(two_way_anova(y, one, three), DataError);
  CHECK_THROWS_AS(two_way_anova(y, three, std::vector<std::string>{"a", "b"}), DataError);
}
