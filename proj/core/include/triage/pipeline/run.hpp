#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "triage/cascade/risk_coverage.hpp"
#include "triage/pipeline/config.hpp"

namespace triage::pipeline {

// Each command reads/writes fixed file names inside config.out_dir and
// closes with a manifest. Commands compose: synth -> train -> threshold ->
// evaluate, plus predict/explain against the emitted policy.

struct SynthOutputs {
  std::filesystem::path cohort_csv;
  std::filesystem::path schema_json;
  std::filesystem::path manifest;
  std::size_t n_rows = 0;
  std::size_t n_advanced = 0;
};
SynthOutputs run_synth(const RunConfig& config);

struct TrainOutputs {
  std::filesystem::path split_json;
  std::filesystem::path basic_model;
  std::filesystem::path advanced_model;
  std::filesystem::path triage_model;
  std::filesystem::path predictions_json;
  std::filesystem::path labels_json;
  std::filesystem::path background_json;
  std::filesystem::path report_json;
  std::filesystem::path manifest;
  double triage_cv_auroc = 0;
  std::size_t n_escalation_labels_positive = 0;
};
TrainOutputs run_train(const RunConfig& config);

struct ThresholdOutputs {
  std::filesystem::path curve_csv;
  std::filesystem::path policy_json;
  std::filesystem::path manifest;
  double tau = 0;
  cascade::RiskCoveragePoint chosen;
  bool feasible = true;
};
ThresholdOutputs run_threshold(const RunConfig& config);

struct EvaluateOutputs {
  std::filesystem::path report_json;
  std::filesystem::path roc_csv;
  std::filesystem::path pr_csv;
  std::filesystem::path cost_csv;
  std::filesystem::path manifest;
  double realized_escalation_rate = 0;
};
EvaluateOutputs run_evaluate(const RunConfig& config);

struct PredictOutputs {
  std::filesystem::path decisions_jsonl;
  std::filesystem::path manifest;
  std::size_t n_rows = 0;
  std::size_t n_row_errors = 0;
};
PredictOutputs run_predict(const RunConfig& config, const std::filesystem::path& policy_path,
                           const std::filesystem::path& input_csv);

struct ExplainOutputs {
  std::vector<std::filesystem::path> record_files;
  std::filesystem::path manifest;
};
ExplainOutputs run_explain(const RunConfig& config, const std::filesystem::path& policy_path,
                           const std::filesystem::path& input_csv,
                           const std::optional<std::filesystem::path>& background_path);

}  // namespace triage::pipeline
