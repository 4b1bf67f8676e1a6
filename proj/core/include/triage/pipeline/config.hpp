#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "triage/cascade/risk_coverage.hpp"
#include "triage/data/synth.hpp"
#include "triage/learners/cv.hpp"

namespace triage::pipeline {

// Everything a full run needs; parsed from a JSON config file. All
// randomness flows from the seeds recorded here.
struct RunConfig {
  std::optional<std::filesystem::path> schema_path;  // required with a cohort file
  std::optional<std::filesystem::path> cohort_path;
  std::optional<data::SynthConfig> synth;

  std::size_t test_n = 100;
  std::uint64_t split_seed = 7;

  int cv_k = 5;
  std::uint64_t cv_seed = 11;
  bool cv_stratified = true;

  std::vector<learners::ParamMap> basic_grid;
  std::vector<learners::ParamMap> advanced_grid;
  std::vector<learners::ParamMap> triage_grid;

  double delta = 0.2;
  cascade::ThresholdStrategy threshold;
  double unit_cost = 4000.0;

  std::size_t bootstrap_B = 1000;
  std::uint64_t bootstrap_seed = 99;
  bool bootstrap_enabled = true;

  std::uint64_t baseline_seed = 23;
  std::size_t background_cap = 100;
  std::uint64_t background_seed = 17;

  std::filesystem::path out_dir = "run";

  void validate() const;
};

RunConfig load_run_config(const std::filesystem::path& path);

// CLI overrides: --out replaces the output directory; --seed N reseeds every
// stage whose seed the config file did not set explicitly.
struct ConfigOverrides {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> master_seed;
};
RunConfig load_run_config(const std::filesystem::path& path, const ConfigOverrides& overrides);

// In-memory defaults for a paper-shaped synthetic run (used by `synth` when
// no config file is given, and by tests).
RunConfig default_synth_config();

}  // namespace triage::pipeline
