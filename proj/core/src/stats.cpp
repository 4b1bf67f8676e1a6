#include "triage/eval/stats.hpp"

#include <cmath>

#include "triage/common.hpp"

namespace triage::eval {

namespace {

double log_gamma(double x) { return std::lgamma(x); }

// Continued fraction for the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
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
  raise(Errc::numeric_failure, "incomplete beta continued fraction did not converge");
}

// Series for the lower regularized gamma P(a, x).
double gamma_p_series(double a, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps)
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  raise(Errc::numeric_failure, "incomplete gamma series did not converge");
}

// Continued fraction for the upper regularized gamma Q(a, x).
double gamma_q_cf(double a, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps)
      return h * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  raise(Errc::numeric_failure, "incomplete gamma continued fraction did not converge");
}

struct SampleStats {
  double mean = 0;
  double var = 0;  // sample variance, n-1 denominator
  std::size_t n = 0;
};

SampleStats describe(std::span<const double> v) {
  SampleStats s;
  s.n = v.size();
  if (s.n == 0) return s;
  double sum = 0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n >= 2) {
    double ss = 0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.var = ss / static_cast<double>(s.n - 1);
  }
  return s;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  require(a > 0 && b > 0, Errc::numeric_failure, "beta parameters must be positive");
  require(x >= 0 && x <= 1, Errc::numeric_failure, "beta argument outside [0,1]");
  if (x == 0) return 0;
  if (x == 1) return 1;
  const double ln_front =
      log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double regularized_gamma_q(double a, double x) {
  require(a > 0, Errc::numeric_failure, "gamma parameter must be positive");
  require(x >= 0, Errc::numeric_failure, "gamma argument must be >= 0");
  if (x == 0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double student_t_sf_two_sided(double t, double df) {
  require(df > 0, Errc::numeric_failure, "degrees of freedom must be positive");
  const double x = df / (df + t * t);
  // P(|T| > t) = I_{df/(df+t^2)}(df/2, 1/2)
  return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

double welch_t(std::span<const double> sample_a, std::span<const double> sample_b) {
  const SampleStats a = describe(sample_a);
  const SampleStats b = describe(sample_b);
  require(a.n >= 2 && b.n >= 2, Errc::degenerate_sample,
          "each sample needs at least 2 observations");
  require(a.var > 0 && b.var > 0, Errc::degenerate_sample,
          "each sample needs nonzero variance");

  const double sa = a.var / static_cast<double>(a.n);
  const double sb = b.var / static_cast<double>(b.n);
  const double t = (a.mean - b.mean) / std::sqrt(sa + sb);
  const double df = (sa + sb) * (sa + sb) /
                    (sa * sa / static_cast<double>(a.n - 1) + sb * sb / static_cast<double>(b.n - 1));
  return student_t_sf_two_sided(t, df);
}

double chi_square(const std::vector<std::vector<double>>& contingency) {
  const std::size_t r = contingency.size();
  require(r >= 2, Errc::length_mismatch, "contingency table needs >= 2 rows");
  const std::size_t k = contingency[0].size();
  require(k >= 2, Errc::length_mismatch, "contingency table needs >= 2 columns");

  std::vector<double> row_sum(r, 0), col_sum(k, 0);
  double total = 0;
  for (std::size_t i = 0; i < r; ++i) {
    require(contingency[i].size() == k, Errc::length_mismatch, "ragged contingency table");
    for (std::size_t j = 0; j < k; ++j) {
      require(contingency[i][j] >= 0, Errc::out_of_range, "negative count");
      row_sum[i] += contingency[i][j];
      col_sum[j] += contingency[i][j];
      total += contingency[i][j];
    }
  }
  require(total > 0, Errc::zero_expected, "empty contingency table");

  double stat = 0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double expected = row_sum[i] * col_sum[j] / total;
      require(expected > 0, Errc::zero_expected,
              "expected count is zero at cell (" + std::to_string(i) + "," + std::to_string(j) + ")");
      const double d = contingency[i][j] - expected;
      stat += d * d / expected;
    }
  }
  const double df = static_cast<double>((r - 1) * (k - 1));
  return regularized_gamma_q(df / 2.0, stat / 2.0);
}

}  // namespace triage::eval
