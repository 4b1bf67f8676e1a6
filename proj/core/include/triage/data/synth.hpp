#pragma once

#include <cstdint>

#include "triage/data/cohort.hpp"

namespace triage::data {

// Generator for schema-compatible cohorts driven by a single latent risk
// score. Advanced columns carry low-noise views of the risk, basic columns
// noisy ones, so the cheap/costly information asymmetry is controllable.
struct SynthConfig {
  std::size_t n_total = 1142;
  double advanced_fraction = 0.4824;  // ceil(f*n) advanced-available rows; 551 at the default n
  double basic_noise = 1.5;           // sigma_b
  double advanced_noise = 0.3;        // sigma_a
  double conversion_base_rate = 0.3;
  std::uint64_t seed = 1;
  std::size_t d_b = 9;  // basic columns incl. the two categorical markers
  std::size_t d_a = 329;

  void validate() const;  // InvalidConfig
};

// Schema of generated cohorts: (d_b - 2) numeric basic columns plus a binary
// risk marker and a 4-level stage marker, d_a numeric advanced columns, and
// demographic columns drawn independently of risk (except the planted
// risk_marker, which is both a basic feature and a demographic).
FeatureSchema synth_schema(const SynthConfig& cfg);

CohortTable generate_cohort(const SynthConfig& cfg);

}  // namespace triage::data
