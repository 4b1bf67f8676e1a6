#include "triage/eval/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "triage/common.hpp"
#include "triage/eval/metrics.hpp"
#include "triage/rng.hpp"

namespace triage::eval {

namespace {

// Linear-interpolation empirical percentile of a sorted vector.
double percentile(const std::vector<double>& sorted, double pct) {
  if (sorted.size() == 1) return sorted[0];
  const double pos = pct / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::uint64_t replicate_stream(std::size_t replicate, int attempt) {
  return (static_cast<std::uint64_t>(replicate) << 8) | static_cast<std::uint64_t>(attempt);
}

}  // namespace

BootstrapCI bootstrap_ci(const MetricFn& metric, std::span<const double> scores,
                         std::span<const int> labels, std::size_t B, std::uint64_t seed) {
  require(scores.size() == labels.size(), Errc::length_mismatch,
          "scores and labels differ in length");
  require(B >= 100, Errc::invalid_config, "bootstrap needs B >= 100");
  require(!scores.empty(), Errc::length_mismatch, "empty sample");

  BootstrapCI ci;
  ci.B = B;
  ci.seed = seed;
  ci.point = metric(scores, labels);

  const std::size_t n = scores.size();
  std::vector<double> values;
  values.reserve(B);
  std::size_t skipped = 0;
  std::vector<double> s(n);
  std::vector<int> l(n);
  for (std::size_t rep = 0; rep < B; ++rep) {
    bool ok = false;
    for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
      Rng rng = Rng::derive(seed, replicate_stream(rep, attempt));
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = rng.below(n);
        s[i] = scores[j];
        l[i] = labels[j];
      }
      try {
        values.push_back(metric(s, l));
        ok = true;
      } catch (const Error&) {
        // undefined on this replicate; redraw
      }
    }
    if (!ok) ++skipped;
  }
  require(skipped * 2 <= B, Errc::too_few_replicates,
          std::to_string(skipped) + " of " + std::to_string(B) +
              " bootstrap replicates were undefined");

  std::sort(values.begin(), values.end());
  ci.lower = percentile(values, ci.lo_percentile);
  ci.upper = percentile(values, ci.hi_percentile);
  return ci;
}

PairedDeltaTest paired_delta_auroc(std::span<const double> scores_a,
                                   std::span<const double> scores_b, std::span<const int> labels,
                                   std::size_t B, std::uint64_t seed) {
  require(scores_a.size() == scores_b.size() && scores_a.size() == labels.size(),
          Errc::length_mismatch, "paired test inputs differ in length");
  require(B >= 100, Errc::invalid_config, "bootstrap needs B >= 100");

  PairedDeltaTest test;
  test.B = B;
  test.seed = seed;
  test.delta = auroc(scores_a, labels) - auroc(scores_b, labels);

  const std::size_t n = labels.size();
  std::vector<double> sa(n), sb(n);
  std::vector<int> l(n);
  std::size_t n_le = 0, n_ge = 0, valid = 0, skipped = 0;
  for (std::size_t rep = 0; rep < B; ++rep) {
    bool ok = false;
    for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
      Rng rng = Rng::derive(seed, replicate_stream(rep, attempt));
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = rng.below(n);
        sa[i] = scores_a[j];
        sb[i] = scores_b[j];
        l[i] = labels[j];
      }
      try {
        const double d = auroc(sa, l) - auroc(sb, l);
        if (d <= 0) ++n_le;
        if (d >= 0) ++n_ge;
        ++valid;
        ok = true;
      } catch (const Error&) {
      }
    }
    if (!ok) ++skipped;
  }
  require(skipped * 2 <= B, Errc::too_few_replicates,
          std::to_string(skipped) + " of " + std::to_string(B) +
              " bootstrap replicates were undefined");

  const double frac_le = static_cast<double>(n_le) / static_cast<double>(valid);
  const double frac_ge = static_cast<double>(n_ge) / static_cast<double>(valid);
  double p = 2.0 * std::min(frac_le, frac_ge);
  p = std::clamp(p, 1.0 / static_cast<double>(B), 1.0);
  test.p_value = p;
  return test;
}

}  // namespace triage::eval
