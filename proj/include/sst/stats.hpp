#pragma once

// One-way ANOVA, chi-square test of independence and the Cramer-von Mises
// two-sample test, with the special functions they need.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sst/csv.hpp"
#include "sst/util.hpp"

namespace sst::stats {

struct TestResult {
  double statistic = 0;
  double p_value = 1;
  std::vector<std::int64_t> df;  // empty for rank tests
};

namespace special {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEps = 1e-16;
inline constexpr double kTiny = 1e-300;

/// lgamma(x) - Stirling approximation ((x - 1/2) ln x - x + ln(2 pi)/2).
inline double stirling_correction(double x) {
  if (x >= 10.0) {
    const double r = 1.0 / x;
    const double r2 = r * r;
    return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 / 1188))));
  }
  return std::lgamma(x) - ((x - 0.5) * std::log(x) - x + 0.5 * std::log(2 * kPi));
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
inline double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 1000000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw Error("incomplete beta continued fraction did not converge");
}

// log(x^a y^b / B(a,b)) with y = 1 - x, evaluated without the large-argument
// cancellation of lgamma differences.
inline double log_beta_front(double a, double b, double x, double y) {
  if (a >= 10.0 && b >= 10.0) {
    const double s = a + b;
    const double u = x * b - y * a;  // s*x - a, computed without cancellation
    return a * std::log1p(u / a) + b * std::log1p(-u / b) +
           0.5 * std::log(a * b / (2 * kPi * s)) -
           (stirling_correction(a) + stirling_correction(b) - stirling_correction(s));
  }
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
         b * std::log(y);
}

/// Regularized incomplete beta I_x(a, b); `y` must equal 1 - x and lets
/// callers pass the complement without rounding.
inline double ibeta(double a, double b, double x, double y) {
  if (!(a > 0 && b > 0)) throw Error("ibeta: parameters must be positive");
  if (x <= 0) return 0.0;
  if (y <= 0) return 1.0;
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(log_beta_front(a, b, x, y)) * beta_continued_fraction(a, b, x) / a;
  return 1.0 - std::exp(log_beta_front(b, a, y, x)) * beta_continued_fraction(b, a, y) / b;
}

inline double ibeta(double a, double b, double x) { return ibeta(a, b, x, 1.0 - x); }

// log(x^a e^-x / Gamma(a)).
inline double log_gamma_front(double a, double x) {
  if (a >= 10.0) {
    const double d = x - a;
    return a * std::log1p(d / a) - d + 0.5 * std::log(a / (2 * kPi)) - stirling_correction(a);
  }
  return a * std::log(x) - x - std::lgamma(a);
}

/// Regularized upper incomplete gamma Q(a, x).
inline double gamma_q(double a, double x) {
  if (!(a > 0)) throw Error("gamma_q: shape must be positive");
  if (x <= 0) return 1.0;
  if (x < a + 1.0) {
    double sum = 1.0 / a;
    double del = sum;
    double ap = a;
    for (int n = 0; n < 1000000; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    return 1.0 - sum * std::exp(log_gamma_front(a, x));
  }
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return std::exp(log_gamma_front(a, x)) * h;
  }
  throw Error("incomplete gamma continued fraction did not converge");
}

/// Upper tail of the F(d1, d2) distribution.
inline double f_sf(double f, double d1, double d2) {
  if (f <= 0) return 1.0;
  const double denom = d2 + d1 * f;
  return ibeta(d2 / 2, d1 / 2, d2 / denom, d1 * f / denom);
}

/// Upper tail of the chi-square distribution.
inline double chi2_sf(double x, double df) { return gamma_q(df / 2, x / 2); }

/// Limiting CDF of the one-sample Cramer-von Mises statistic.
inline double cvm_limit_cdf(double x) {
  if (x <= 0) return 0.0;
  double total = 0;
  for (int k = 0; k < 200; ++k) {
    const double u = std::exp(std::lgamma(k + 0.5) - std::lgamma(k + 1.0)) /
                     (std::pow(kPi, 1.5) * std::sqrt(x));
    const double y = 4.0 * k + 1.0;
    const double q = y * y / (16 * x);
    if (q > 700) break;
    const double term = u * std::sqrt(y) * std::exp(-q) * std::cyl_bessel_k(0.25, q);
    total += term;
    if (std::abs(term) < 1e-14 * std::max(total, 1e-300)) break;
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace special

namespace detail {

inline void require_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) throw Error("non-finite observation");
}

}  // namespace detail

/// Classical one-way ANOVA (equal variances).
inline TestResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw Error("ANOVA needs at least two groups");
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw Error("ANOVA needs at least two observations per group");
    detail::require_finite(g);
    total += g.size();
  }
  // Centre on one observation so large offsets do not swamp the sums.
  const double pivot = groups.front().front();
  std::vector<double> means;
  double grand = 0;
  for (const auto& g : groups) {
    double s = 0;
    for (double x : g) s += x - pivot;
    means.push_back(s / static_cast<double>(g.size()));
    grand += s;
  }
  grand /= static_cast<double>(total);
  double ss_between = 0;
  double ss_within = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double dm = means[i] - grand;
    ss_between += static_cast<double>(groups[i].size()) * dm * dm;
    for (double x : groups[i]) {
      const double d = (x - pivot) - means[i];
      ss_within += d * d;
    }
  }
  const auto k = static_cast<std::int64_t>(groups.size());
  const auto n = static_cast<std::int64_t>(total);
  if (!(ss_within > 0)) throw Error("zero within-group variance");
  const double f = (ss_between / static_cast<double>(k - 1)) /
                   (ss_within / static_cast<double>(n - k));
  return {f, std::clamp(special::f_sf(f, static_cast<double>(k - 1), static_cast<double>(n - k)), 0.0, 1.0),
          {k - 1, n - k}};
}

/// Pearson chi-square test of independence on an r x c table of counts.
inline TestResult chi_square_independence(const std::vector<std::vector<double>>& table) {
  const std::size_t r = table.size();
  if (r < 2) throw Error("chi-square needs at least two rows");
  const std::size_t c = table.front().size();
  if (c < 2) throw Error("chi-square needs at least two columns");
  std::vector<double> row(r, 0.0);
  std::vector<double> col(c, 0.0);
  double n = 0;
  for (std::size_t i = 0; i < r; ++i) {
    if (table[i].size() != c) throw Error("chi-square table is ragged");
    for (std::size_t j = 0; j < c; ++j) {
      const double o = table[i][j];
      if (!(o >= 0) || !std::isfinite(o)) throw Error("chi-square counts must be non-negative");
      row[i] += o;
      col[j] += o;
      n += o;
    }
  }
  for (double s : row)
    if (!(s > 0)) throw Error("chi-square table has a zero marginal");
  for (double s : col)
    if (!(s > 0)) throw Error("chi-square table has a zero marginal");
  double chi2 = 0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double e = row[i] * col[j] / n;
      const double d = table[i][j] - e;
      chi2 += d * d / e;
    }
  const auto df = static_cast<std::int64_t>((r - 1) * (c - 1));
  return {chi2, std::clamp(special::chi2_sf(chi2, static_cast<double>(df)), 0.0, 1.0), {df}};
}

/// Pooled sizes up to this use exact enumeration of rank splits.
inline constexpr std::size_t kCvmExactMaxPooled = 20;

struct CvmResult {
  double statistic = 0;  // T
  double p_value = 1;
  bool exact = false;
  std::size_t n = 0;
  std::size_t m = 0;

  TestResult as_test_result() const { return {statistic, p_value, {}}; }
};

/// Midranks of the pooled sample, doubled so they are integers.
inline std::vector<std::int64_t> doubled_midranks(std::span<const double> pooled) {
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
  std::vector<std::int64_t> ranks(pooled.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // positions i..j (0-based) share rank ((i+1) + (j+1)) / 2
    const auto doubled = static_cast<std::int64_t>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = doubled;
    i = j + 1;
  }
  return ranks;
}

namespace detail {

// 4U = n * sum (2r_i - 2i)^2 + m * sum (2s_j - 2j)^2 over sorted doubled
// ranks. Exact in long double for the sizes where it is compared.
template <class Ranks>
long double four_u(Ranks x_ranks, Ranks y_ranks) {
  std::sort(x_ranks.begin(), x_ranks.end());
  std::sort(y_ranks.begin(), y_ranks.end());
  const auto n = static_cast<long double>(x_ranks.size());
  const auto m = static_cast<long double>(y_ranks.size());
  long double sx = 0;
  for (std::size_t i = 0; i < x_ranks.size(); ++i) {
    const long double d = static_cast<long double>(x_ranks[i]) - 2.0L * static_cast<long double>(i + 1);
    sx += d * d;
  }
  long double sy = 0;
  for (std::size_t j = 0; j < y_ranks.size(); ++j) {
    const long double d = static_cast<long double>(y_ranks[j]) - 2.0L * static_cast<long double>(j + 1);
    sy += d * d;
  }
  return n * sx + m * sy;
}

inline double cvm_t_from_four_u(long double four_u, std::size_t n, std::size_t m) {
  const long double nn = static_cast<long double>(n);
  const long double mm = static_cast<long double>(m);
  const long double big_n = nn + mm;
  const long double u = four_u / 4.0L;
  return static_cast<double>(u / (nn * mm * big_n) - (4.0L * mm * nn - 1.0L) / (6.0L * big_n));
}

}  // namespace detail

/// Two-sample Cramer-von Mises test on midranks. Pooled sizes up to
/// kCvmExactMaxPooled get the exact permutation p-value; larger samples use
/// the normalized limiting distribution.
inline CvmResult cvm_two_sample(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || ys.empty()) throw Error("Cramer-von Mises needs two non-empty samples");
  detail::require_finite(xs);
  detail::require_finite(ys);
  const std::size_t n = xs.size();
  const std::size_t m = ys.size();
  const std::size_t total = n + m;
  std::vector<double> pooled(xs.begin(), xs.end());
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const auto ranks = doubled_midranks(pooled);
  const std::vector<std::int64_t> xr(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n));
  const std::vector<std::int64_t> yr(ranks.begin() + static_cast<std::ptrdiff_t>(n), ranks.end());
  const long double observed = detail::four_u(xr, yr);

  CvmResult res;
  res.n = n;
  res.m = m;
  res.statistic = detail::cvm_t_from_four_u(observed, n, m);

  if (total <= kCvmExactMaxPooled) {
    // Enumerate every n-subset of pooled positions as the x sample.
    std::vector<std::size_t> pick(n);
    std::iota(pick.begin(), pick.end(), 0);
    std::uint64_t at_least = 0;
    std::uint64_t count = 0;
    std::vector<std::int64_t> a(n);
    std::vector<std::int64_t> b(m);
    for (;;) {
      std::size_t ia = 0;
      std::size_t ib = 0;
      std::size_t next = 0;
      for (std::size_t pos = 0; pos < total; ++pos) {
        if (next < n && pick[next] == pos) {
          a[ia++] = ranks[pos];
          ++next;
        } else {
          b[ib++] = ranks[pos];
        }
      }
      ++count;
      if (detail::four_u(a, b) >= observed) ++at_least;
      // advance to the next combination in lexicographic order
      std::size_t i = n;
      while (i > 0 && pick[i - 1] == total - n + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
    res.exact = true;
    res.p_value = static_cast<double>(at_least) / static_cast<double>(count);
    return res;
  }

  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  const double big_n = nn + mm;
  const double k = nn * mm;
  const double mean_t = (1.0 + 1.0 / big_n) / 6.0;
  const double var_t = (big_n + 1.0) * (4.0 * k * big_n - 3.0 * (nn * nn + mm * mm) - 2.0 * k) /
                       (45.0 * big_n * big_n * 4.0 * k);
  const double normalized = 1.0 / 6.0 + (res.statistic - mean_t) / std::sqrt(45.0 * var_t);
  res.p_value = normalized < 0.003 ? 1.0
                                   : std::clamp(1.0 - special::cvm_limit_cdf(normalized), 0.0, 1.0);
  return res;
}

/// One row of the statistics report.
struct ReportRow {
  std::string test;
  std::string variable;
  std::string cohort_set;
  TestResult result;
};

inline std::string format_df(const std::vector<std::int64_t>& df) {
  std::string out;
  for (std::size_t i = 0; i < df.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(df[i]);
  }
  return out;
}

/// Columns test, variable, cohort_set, statistic, df, p_value.
inline void write_report(std::ostream& out, const std::vector<ReportRow>& rows) {
  csv::write_row(out, {"test", "variable", "cohort_set", "statistic", "df", "p_value"});
  for (const auto& r : rows)
    csv::write_row(out, {r.test, r.variable, r.cohort_set, format_general(r.result.statistic),
                         format_df(r.result.df), format_general(r.result.p_value)});
}

}  // namespace sst::stats
