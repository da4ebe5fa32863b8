#pragma once

// Independent reference implementations used only by the tests. They favour
// obviousness over speed and share no code with the library.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace oracle {

// Ranks by counting: rank = 1 + #smaller + (#equal - 1) / 2.
inline std::vector<double> ranks(const std::vector<double> &v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double smaller = 0;
    double equal = 0;
    for (double w : v) {
      if (w < v[i]) ++smaller;
      if (w == v[i]) ++equal;
    }
    r[i] = 1 + smaller + (equal - 1) / 2;
  }
  return r;
}

inline double pearson(const std::vector<double> &x, const std::vector<double> &y) {
  const double n = static_cast<double>(x.size());
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double spearman_rho(const std::vector<double> &x, const std::vector<double> &y) {
  return pearson(ranks(x), ranks(y));
}

// Two-sided p from the t approximation on n - 2 degrees of freedom.
inline double spearman_p(double rho, std::size_t n) {
  if (std::abs(rho) >= 1.0) return 0.0;
  const double df = static_cast<double>(n) - 2;
  const double t = std::abs(rho) * std::sqrt(df / (1 - rho * rho));
  return 2 * boost::math::cdf(boost::math::complement(boost::math::students_t(df), t));
}

// Exact two-sided permutation p: share of all orderings of y with |rho| >= |observed|.
inline double permutation_p(const std::vector<double> &x, std::vector<double> y) {
  const double observed = std::abs(spearman_rho(x, y));
  std::vector<std::size_t> idx(y.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::size_t hit = 0;
  std::size_t total = 0;
  const auto base = y;
  do {
    for (std::size_t i = 0; i < idx.size(); ++i) y[i] = base[idx[i]];
    if (std::abs(spearman_rho(x, y)) >= observed - 1e-9) ++hit;
    ++total;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return static_cast<double>(hit) / static_cast<double>(total);
}

// Bin of a mean rating on [0, 4] split into `bins` equal-width bins, top edge inclusive.
inline int bin_of(double mean, int bins) {
  const double width = 4.0 / bins;
  int b = 0;
  while (b < bins - 1 && mean >= (b + 1) * width - 1e-12) ++b;
  return b;
}

// Expected split-half match percentage, enumerating every split of every unit.
// Odd rater counts put the extra rater in either half with probability 1/2.
inline double shcmp_exhaustive(const std::vector<std::vector<int>> &units, int bins) {
  double total = 0;
  for (const auto &r : units) {
    const std::size_t k = r.size();
    std::vector<std::size_t> sizes{k / 2};
    if (k % 2 == 1) sizes.push_back(k / 2 + 1);
    double unit_rate = 0;
    for (std::size_t first : sizes) {
      double match = 0;
      double splits = 0;
      for (unsigned mask = 0; mask < (1U << k); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != first) continue;
        double sa = 0;
        double sb = 0;
        for (std::size_t i = 0; i < k; ++i) ((mask >> i) & 1U ? sa : sb) += r[i];
        const double ma = sa / static_cast<double>(first);
        const double mb = sb / static_cast<double>(k - first);
        match += bin_of(ma, bins) == bin_of(mb, bins) ? 1 : 0;
        splits += 1;
      }
      unit_rate += match / splits / static_cast<double>(sizes.size());
    }
    total += unit_rate;
  }
  return 100.0 * total / static_cast<double>(units.size());
}

}  // namespace oracle
