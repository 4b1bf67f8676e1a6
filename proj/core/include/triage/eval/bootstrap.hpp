#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace triage::eval {

struct BootstrapCI {
  double point = 0;
  double lower = 0;
  double upper = 0;
  std::size_t B = 0;
  std::uint64_t seed = 0;
  double lo_percentile = 2.5;
  double hi_percentile = 97.5;
};

using MetricFn =
    std::function<double(std::span<const double> scores, std::span<const int> labels)>;

// Percentile bootstrap over row resamples. Replicates on which the metric is
// undefined (e.g. single-class) are redrawn up to 10 attempts each; if more
// than half the replicates still fail, the whole call fails. Replicate RNG
// streams derive from (seed, replicate, attempt) so results are order-free.
BootstrapCI bootstrap_ci(const MetricFn& metric, std::span<const double> scores,
                         std::span<const int> labels, std::size_t B, std::uint64_t seed);

struct PairedDeltaTest {
  double delta = 0;    // metric(A) - metric(B) on the original rows
  double p_value = 1;  // two-sided sign-flip fraction, clipped to [1/B, 1]
  std::size_t B = 0;
  std::uint64_t seed = 0;
};

// Paired bootstrap of the AUROC difference: rows are resampled jointly so
// both score vectors see the same replicate.
PairedDeltaTest paired_delta_auroc(std::span<const double> scores_a,
                                   std::span<const double> scores_b, std::span<const int> labels,
                                   std::size_t B, std::uint64_t seed);

}  // namespace triage::eval
