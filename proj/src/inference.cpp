#include "somascope/inference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "somascope/error.hpp"

namespace somascope {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxSeriesTerms = 100000;

double series_gamma_p(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a, x), valid for x >= a + 1.
double cf_gamma_q(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxSeriesTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Continued fraction for the incomplete beta function.
double cf_beta(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxSeriesTerms; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

void require_df(double df, const char *what) {
  if (!(df > 0.0) || !std::isfinite(df)) throw DataError(std::string(what) + ": degrees of freedom must be positive");
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) throw DataError("gamma_p: invalid arguments");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? clamp01(series_gamma_p(a, x)) : clamp01(1.0 - cf_gamma_q(a, x));
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) throw DataError("gamma_q: invalid arguments");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? clamp01(1.0 - series_gamma_p(a, x)) : clamp01(cf_gamma_q(a, x));
}

double beta_inc(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) throw DataError("beta_inc: invalid arguments");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return clamp01(front * cf_beta(a, b, x) / a);
  return clamp01(1.0 - front * cf_beta(b, a, 1.0 - x) / b);
}

double chi_square_sf(double x, double df) {
  require_df(df, "chi_square_sf");
  if (std::isnan(x)) throw DataError("chi_square_sf: x is NaN");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * x);
}

double t_sf(double x, double df) {
  require_df(df, "t_sf");
  if (std::isnan(x)) throw DataError("t_sf: x is NaN");
  if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
  const double tail = 0.5 * beta_inc(0.5 * df, 0.5, df / (df + x * x));
  return x >= 0.0 ? tail : 1.0 - tail;
}

double f_sf(double x, double d1, double d2) {
  require_df(d1, "f_sf");
  require_df(d2, "f_sf");
  if (std::isnan(x)) throw DataError("f_sf: x is NaN");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return beta_inc(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * x));
}

double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// ---------------------------------------------------------------------------
// Spearman

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1 .. j
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

namespace {

void validate_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("spearman: vectors differ in length");
  if (x.size() < 3) throw DataError("spearman: need at least 3 observations");
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(x.begin(), x.end(), finite) || !std::all_of(y.begin(), y.end(), finite)) {
    throw DataError("spearman: non-finite value");
  }
}

std::vector<double> centered(const std::vector<double> &v, double &sum_sq) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  std::vector<double> out(v.size());
  sum_sq = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i] - mean;
    sum_sq += out[i] * out[i];
  }
  return out;
}

}  // namespace

CorrelationResult spearman(std::span<const double> x, std::span<const double> y) {
  validate_pair(x, y);
  double sxx = 0.0;
  double syy = 0.0;
  const auto cx = centered(average_ranks(x), sxx);
  const auto cy = centered(average_ranks(y), syy);
  if (sxx == 0.0 || syy == 0.0) throw DataError("spearman: a vector has zero variance");
  double sxy = 0.0;
  for (std::size_t i = 0; i < cx.size(); ++i) sxy += cx[i] * cy[i];

  CorrelationResult r;
  r.n = x.size();
  r.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double denom = 1.0 - r.rho * r.rho;
  if (denom <= 0.0) {
    r.p = 0.0;
  } else {
    const double df = static_cast<double>(r.n - 2);
    const double t = r.rho * std::sqrt(df / denom);
    r.p = clamp01(2.0 * t_sf(std::fabs(t), df));
  }
  return r;
}

double spearman_permutation_p(std::span<const double> x, std::span<const double> y) {
  validate_pair(x, y);
  if (x.size() > 10) throw DataError("spearman_permutation_p: n must be <= 10");
  double sxx = 0.0;
  double syy = 0.0;
  const auto cx = centered(average_ranks(x), sxx);
  auto cy = centered(average_ranks(y), syy);
  if (sxx == 0.0 || syy == 0.0) throw DataError("spearman: a vector has zero variance");

  double observed = 0.0;
  for (std::size_t i = 0; i < cx.size(); ++i) observed += cx[i] * cy[i];
  const double threshold = std::fabs(observed) - 1e-9;

  std::sort(cy.begin(), cy.end());
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < cx.size(); ++i) s += cx[i] * cy[i];
    ++total;
    if (std::fabs(s) >= threshold) ++hits;
  } while (std::next_permutation(cy.begin(), cy.end()));
  // Tied ranks make next_permutation skip duplicate arrangements; each distinct
  // arrangement stands for the same number of pairings, so the ratio is exact.
  return static_cast<double>(hits) / static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Logistic regression

DesignMatrix DesignMatrix::intercept_and_slope(std::span<const double> predictor) {
  DesignMatrix m(predictor.size(), 2);
  for (std::size_t r = 0; r < predictor.size(); ++r) {
    m(r, 0) = 1.0;
    m(r, 1) = predictor[r];
  }
  return m;
}

DesignMatrix DesignMatrix::intercept_and_indicators(std::span<const std::size_t> levels, std::size_t level_count) {
  if (level_count == 0) throw DataError("design: need at least one level");
  DesignMatrix m(levels.size(), level_count);
  for (std::size_t r = 0; r < levels.size(); ++r) {
    if (levels[r] >= level_count) throw DataError("design: level index out of range");
    m(r, 0) = 1.0;
    if (levels[r] > 0) m(r, levels[r]) = 1.0;
  }
  return m;
}

DesignMatrix DesignMatrix::intercept_only(std::size_t rows) {
  DesignMatrix m(rows, 1);
  for (std::size_t r = 0; r < rows; ++r) m(r, 0) = 1.0;
  return m;
}

namespace {

// log(mu) and log(1 - mu) for mu = logistic(eta), without overflow.
double log_sigmoid(double eta) { return eta >= 0 ? -std::log1p(std::exp(-eta)) : eta - std::log1p(std::exp(eta)); }

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double log_binomial_coefficient(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double loglik_from_eta(std::span<const std::uint64_t> s, std::span<const std::uint64_t> n, const Eigen::VectorXd &eta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto si = static_cast<double>(s[i]);
    const auto fi = static_cast<double>(n[i] - s[i]);
    if (si > 0) ll += si * log_sigmoid(eta[static_cast<Eigen::Index>(i)]);
    if (fi > 0) ll += fi * log_sigmoid(-eta[static_cast<Eigen::Index>(i)]);
  }
  return ll;
}

}  // namespace

double binomial_log_likelihood(std::span<const std::uint64_t> successes, std::span<const std::uint64_t> totals,
                               std::span<const double> probs, bool include_constant) {
  if (successes.size() != totals.size() || probs.size() != totals.size()) {
    throw DataError("binomial_log_likelihood: length mismatch");
  }
  double ll = 0.0;
  for (std::size_t i = 0; i < successes.size(); ++i) {
    const auto s = static_cast<double>(successes[i]);
    const auto f = static_cast<double>(totals[i] - successes[i]);
    if (s > 0) ll += s * std::log(probs[i]);
    if (f > 0) ll += f * std::log1p(-probs[i]);
    if (include_constant) ll += log_binomial_coefficient(totals[i], successes[i]);
  }
  return ll;
}

RegressionResult fit_binomial_logit(std::span<const std::uint64_t> successes, std::span<const std::uint64_t> totals,
                                    const DesignMatrix &design, const LogitOptions &options) {
  const auto rows = design.rows();
  const auto cols = design.cols();
  if (successes.size() != rows || totals.size() != rows) throw DataError("logit: counts and design differ in rows");
  if (cols == 0) throw DataError("logit: empty design");
  std::uint64_t sum_s = 0;
  std::uint64_t sum_n = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (successes[i] > totals[i]) throw DataError("logit: successes exceed totals in row " + std::to_string(i));
    if (design(i, 0) != 1.0) throw DataError("logit: first design column must be the intercept");
    sum_s += successes[i];
    sum_n += totals[i];
  }
  if (sum_n == 0) throw DataError("logit: no trials");

  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = design(r, c);
  }
  {
    // Rank over rows that carry trials.
    std::vector<Eigen::Index> live;
    for (std::size_t r = 0; r < rows; ++r) {
      if (totals[r] > 0) live.push_back(static_cast<Eigen::Index>(r));
    }
    Eigen::MatrixXd Xl(static_cast<Eigen::Index>(live.size()), X.cols());
    for (std::size_t k = 0; k < live.size(); ++k) Xl.row(static_cast<Eigen::Index>(k)) = X.row(live[k]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xl);
    if (static_cast<std::size_t>(qr.rank()) < cols) throw DataError("logit: design matrix is rank deficient");
  }

  Eigen::VectorXd s(static_cast<Eigen::Index>(rows));
  Eigen::VectorXd n(static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    s[static_cast<Eigen::Index>(i)] = static_cast<double>(successes[i]);
    n[static_cast<Eigen::Index>(i)] = static_cast<double>(totals[i]);
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
  beta[0] = std::log((static_cast<double>(sum_s) + 0.5) / (static_cast<double>(sum_n - sum_s) + 0.5));
  Eigen::VectorXd eta = X * beta;
  double ll = loglik_from_eta(successes, totals, eta);

  RegressionResult result;
  result.parameters = cols;
  Eigen::MatrixXd information;
  const auto fisher = [&](const Eigen::VectorXd &e) {
    Eigen::VectorXd w(e.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double mu = sigmoid(e[i]);
      w[i] = n[i] * mu * (1.0 - mu);
    }
    return Eigen::MatrixXd(X.transpose() * w.asDiagonal() * X);
  };

  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    result.iterations = iter;
    Eigen::VectorXd mu(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) mu[i] = sigmoid(eta[i]);
    const Eigen::VectorXd score = X.transpose() * (s - n.cwiseProduct(mu));
    information = fisher(eta);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(information);
    Eigen::VectorXd step = ldlt.solve(score);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) break;

    Eigen::VectorXd candidate = beta + step;
    Eigen::VectorXd cand_eta = X * candidate;
    double cand_ll = loglik_from_eta(successes, totals, cand_eta);
    for (int halvings = 0; halvings < 30 && !(cand_ll >= ll - 1e-12 * std::fabs(ll)); ++halvings) {
      step *= 0.5;
      candidate = beta + step;
      cand_eta = X * candidate;
      cand_ll = loglik_from_eta(successes, totals, cand_eta);
    }
    if (!std::isfinite(cand_ll)) break;
    beta = candidate;
    eta = cand_eta;
    ll = cand_ll;
    if (step.cwiseAbs().maxCoeff() < options.tolerance) {
      result.converged = true;
      break;
    }
  }

  information = fisher(eta);
  result.coefficients.assign(beta.data(), beta.data() + beta.size());
  result.std_errors.assign(cols, std::numeric_limits<double>::quiet_NaN());
  result.wald_p.assign(cols, std::numeric_limits<double>::quiet_NaN());
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(information);
  if (lu.isInvertible()) {
    const Eigen::MatrixXd cov = lu.inverse();
    for (std::size_t c = 0; c < cols; ++c) {
      const double var = cov(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
      if (var > 0.0 && std::isfinite(var)) {
        result.std_errors[c] = std::sqrt(var);
        result.wald_p[c] = clamp01(2.0 * normal_sf(std::fabs(result.coefficients[c]) / result.std_errors[c]));
      }
    }
  }

  // Intercept-only model in closed form.
  const double pbar = static_cast<double>(sum_s) / static_cast<double>(sum_n);
  std::vector<double> null_probs(rows, pbar);
  double constant = 0.0;
  if (options.include_binomial_constant) {
    for (std::size_t i = 0; i < rows; ++i) constant += log_binomial_coefficient(totals[i], successes[i]);
  }
  result.log_likelihood = ll + constant;
  result.null_log_likelihood = binomial_log_likelihood(successes, totals, null_probs, options.include_binomial_constant);
  result.lr_stat = std::max(0.0, 2.0 * (result.log_likelihood - result.null_log_likelihood));
  result.lr_p = cols > 1 ? chi_square_sf(result.lr_stat, static_cast<double>(cols - 1)) : 1.0;
  return result;
}

LrTest lr_test(const RegressionResult &full, const RegressionResult &null, std::size_t df) {
  const double delta = full.log_likelihood - null.log_likelihood;
  if (delta < -1e-8) throw DataError("lr_test: full model fits worse than the null; models are not nested");
  LrTest t;
  t.statistic = std::max(0.0, 2.0 * delta);
  t.p = df > 0 ? chi_square_sf(t.statistic, static_cast<double>(df)) : 1.0;
  return t;
}

// ---------------------------------------------------------------------------
// ANOVA

namespace {

std::vector<std::size_t> encode_levels(std::span<const std::string> labels, std::size_t &count) {
  std::map<std::string, std::size_t, std::less<>> index;
  std::vector<std::size_t> codes;
  codes.reserve(labels.size());
  for (const auto &l : labels) codes.push_back(index.try_emplace(l, index.size()).first->second);
  count = index.size();
  return codes;
}

AnovaRow make_row(double ss, double df, double ms_resid, double df_resid) {
  AnovaRow row;
  row.sum_sq = ss;
  row.df = df;
  row.mean_sq = df > 0 ? ss / df : 0.0;
  if (df <= 0 || row.mean_sq == 0.0) {
    row.f = 0.0;
    row.p = 1.0;
  } else if (ms_resid == 0.0) {
    row.f = std::numeric_limits<double>::infinity();
    row.p = 0.0;
  } else {
    row.f = row.mean_sq / ms_resid;
    row.p = f_sf(row.f, df, df_resid);
  }
  return row;
}

}  // namespace

AnovaResult two_way_anova(std::span<const double> values, std::span<const std::string> factor_a,
                          std::span<const std::string> factor_b) {
  const std::size_t n = values.size();
  if (factor_a.size() != n || factor_b.size() != n) throw DataError("anova: values and factors differ in length");
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
    throw DataError("anova: non-finite value");
  }
  std::size_t na = 0;
  std::size_t nb = 0;
  const auto a = encode_levels(factor_a, na);
  const auto b = encode_levels(factor_b, nb);
  if (na < 2 || nb < 2) throw DataError("anova: each factor needs at least two levels");

  const double grand = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double scale = 0.0;
  for (double v : values) scale += v * v;
  // Sums of squares below this are rounding noise.
  const double noise = 1e-14 * std::max(scale, 1e-300);
  const auto clean = [noise](double ss) { return ss < noise ? 0.0 : ss; };

  std::vector<double> sum_a(na, 0.0);
  std::vector<double> cnt_a(na, 0.0);
  std::vector<double> sum_cell(na * nb, 0.0);
  std::vector<double> cnt_cell(na * nb, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sum_a[a[i]] += values[i];
    cnt_a[a[i]] += 1.0;
    sum_cell[a[i] * nb + b[i]] += values[i];
    cnt_cell[a[i] * nb + b[i]] += 1.0;
  }

  double ss_total = 0.0;
  double rss_a = 0.0;
  double rss_cell = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - grand;
    ss_total += d * d;
    const double da = values[i] - sum_a[a[i]] / cnt_a[a[i]];
    rss_a += da * da;
    const auto cell = a[i] * nb + b[i];
    const double dc = values[i] - sum_cell[cell] / cnt_cell[cell];
    rss_cell += dc * dc;
  }

  // Additive model A + B by least squares on treatment coding.
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(na + nb - 1));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    X(r, 0) = 1.0;
    if (a[i] > 0) X(r, static_cast<Eigen::Index>(a[i])) = 1.0;
    if (b[i] > 0) X(r, static_cast<Eigen::Index>(na - 1 + b[i])) = 1.0;
    y[r] = values[i];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  const Eigen::VectorXd fitted = X * qr.solve(y);
  const double rss_add = (y - fitted).squaredNorm();
  const auto rank_add = static_cast<std::size_t>(qr.rank());

  const std::size_t filled = static_cast<std::size_t>(std::count_if(cnt_cell.begin(), cnt_cell.end(), [](double c) { return c > 0; }));
  const bool with_interaction = filled == na * nb && n > filled;

  AnovaResult res;
  res.n = n;
  res.total_sum_sq = ss_total;
  const double ss_a = clean(ss_total - rss_a);
  const double ss_b = clean(rss_a - rss_add);
  const double df_a = static_cast<double>(na - 1);
  const double df_b = static_cast<double>(rank_add - na);

  if (with_interaction) {
    const double ss_ab = clean(rss_add - rss_cell);
    const double ss_res = clean(rss_cell);
    const double df_ab = static_cast<double>((na - 1) * (nb - 1));
    const double df_res = static_cast<double>(n - filled);
    const double ms_res = ss_res / df_res;
    res.factor_a = make_row(ss_a, df_a, ms_res, df_res);
    res.factor_b = make_row(ss_b, df_b, ms_res, df_res);
    res.interaction = make_row(ss_ab, df_ab, ms_res, df_res);
    res.residual = AnovaRow{ss_res, df_res, ms_res, 0.0, 1.0};
  } else {
    if (n <= rank_add) throw DataError("anova: no residual degrees of freedom");
    const double ss_res = clean(rss_add);
    const double df_res = static_cast<double>(n - rank_add);
    const double ms_res = ss_res / df_res;
    res.factor_a = make_row(ss_a, df_a, ms_res, df_res);
    res.factor_b = make_row(ss_b, df_b, ms_res, df_res);
    res.residual = AnovaRow{ss_res, df_res, ms_res, 0.0, 1.0};
  }
  res.residual.f = 0.0;
  res.residual.p = 1.0;
  return res;
}

}  // namespace somascope
