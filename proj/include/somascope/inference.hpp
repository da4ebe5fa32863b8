#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace somascope {

// ---------------------------------------------------------------------------
// Distribution kernels. Upper-tail probabilities P(X > x).

/// Regularized lower incomplete gamma P(a, x).
[[nodiscard]] double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
[[nodiscard]] double gamma_q(double a, double x);
/// Regularized incomplete beta I_x(a, b).
[[nodiscard]] double beta_inc(double a, double b, double x);

[[nodiscard]] double chi_square_sf(double x, double df);
/// One-sided upper tail of Student's t.
[[nodiscard]] double t_sf(double x, double df);
[[nodiscard]] double f_sf(double x, double d1, double d2);
[[nodiscard]] double normal_sf(double x);

// ---------------------------------------------------------------------------
// Spearman rank correlation

struct CorrelationResult {
  double rho = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

/// Ranks with ties sharing their average rank (1-based).
[[nodiscard]] std::vector<double> average_ranks(std::span<const double> values);

/// Rank correlation with a two-sided p from the t approximation on n - 2 df.
/// Throws DataError on length mismatch, n < 3, non-finite input or a constant vector.
[[nodiscard]] CorrelationResult spearman(std::span<const double> x, std::span<const double> y);

/// Exact two-sided permutation p-value: the share of all n! pairings whose
/// |rho| reaches the observed |rho|. Limited to n <= 10.
[[nodiscard]] double spearman_permutation_p(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Binomial logistic regression

/// Dense row-major design matrix.
class DesignMatrix {
 public:
  DesignMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  /// Intercept plus one continuous predictor.
  static DesignMatrix intercept_and_slope(std::span<const double> predictor);
  /// Intercept plus treatment-coded indicators for levels 1..k-1 of `levels`.
  static DesignMatrix intercept_and_indicators(std::span<const std::size_t> levels, std::size_t level_count);
  static DesignMatrix intercept_only(std::size_t rows);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct RegressionResult {
  std::vector<double> coefficients;
  std::vector<double> std_errors;  // from the inverse Fisher information
  std::vector<double> wald_p;      // two-sided normal
  double log_likelihood = 0.0;
  double null_log_likelihood = 0.0;  // intercept-only model
  double lr_stat = 0.0;
  double lr_p = 1.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t parameters = 0;
};

struct LogitOptions {
  std::size_t max_iterations = 100;
  double tolerance = 1e-8;  // on max |delta coefficient|
  /// Adds log C(n, s) to the likelihood. Cancels in every likelihood ratio.
  bool include_binomial_constant = false;
};

/// Grouped binomial logit fit by iteratively reweighted least squares with
/// step halving. Column 0 of the design must be the intercept.
/// Throws DataError on shape errors, invalid counts or rank deficiency.
[[nodiscard]] RegressionResult fit_binomial_logit(std::span<const std::uint64_t> successes,
                                                  std::span<const std::uint64_t> totals, const DesignMatrix &design,
                                                  const LogitOptions &options = {});

/// Binomial log-likelihood of fitted probabilities.
[[nodiscard]] double binomial_log_likelihood(std::span<const std::uint64_t> successes,
                                             std::span<const std::uint64_t> totals, std::span<const double> probs,
                                             bool include_constant = false);

struct LrTest {
  double statistic = 0.0;
  double p = 1.0;
};

/// Likelihood-ratio test of nested models. Throws DataError if the full model
/// fits worse than the null by more than 1e-8.
[[nodiscard]] LrTest lr_test(const RegressionResult &full, const RegressionResult &null, std::size_t df);

// ---------------------------------------------------------------------------
// Two-way ANOVA

struct AnovaRow {
  double sum_sq = 0.0;
  double df = 0.0;
  double mean_sq = 0.0;
  double f = 0.0;
  double p = 1.0;
};

struct AnovaResult {
  AnovaRow factor_a;
  AnovaRow factor_b;
  std::optional<AnovaRow> interaction;  // absent without replication in every cell
  AnovaRow residual;
  double total_sum_sq = 0.0;
  std::size_t n = 0;
};

/// Sequential (type I) sums of squares in the order A, B, A x B.
[[nodiscard]] AnovaResult two_way_anova(std::span<const double> values, std::span<const std::string> factor_a,
                                        std::span<const std::string> factor_b);

}  // namespace somascope
