#pragma once

#include <optional>
#include <string>
#include <vector>

#include "triage/cascade/policy.hpp"
#include "triage/explain/shapley.hpp"

namespace triage::explain {

struct ExplanationEntry {
  std::string feature;
  std::string raw_value;                    // as recorded for the patient
  std::optional<double> standardized_value; // numeric features only
  double phi = 0;
  std::string direction;  // "pushes toward escalation" / "pushes against escalation"
};

struct ExplanationRecord {
  std::string patient_id;
  double score = 0;
  double tau = 0;
  bool escalate = false;
  double base_value = 0;
  std::vector<ExplanationEntry> entries;  // sorted by |phi| descending
  std::vector<double> std_errors;         // sampled estimator only
};

struct ExplainOptions {
  std::size_t max_exact_groups = 16;  // enumerate up to here, sample beyond
  std::size_t n_samples = 50000;
  std::uint64_t seed = 0;
};

// Builds the feature-group map of a basic-features preprocessor (one group
// per clinical feature, one-hot blocks grouped).
FeatureGroupMap feature_groups_of(const data::Preprocessor& prep);

// Background rows for attribution: the triage training matrix, subsampled to
// `cap` rows with the given seed when larger.
BackgroundSet make_background(const Eigen::MatrixXd& training_rows, std::size_t cap,
                              std::uint64_t seed);

// Shapley attribution of the triage escalation score for one patient,
// evaluated on the calibrated probability output.
ExplanationRecord explain_decision(const cascade::CascadePolicy& policy,
                                   const data::PatientRecord& rec,
                                   const data::FeatureSchema& schema,
                                   const BackgroundSet& background,
                                   const ExplainOptions& options = {});

}  // namespace triage::explain
