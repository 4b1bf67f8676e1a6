#pragma once

#include <optional>
#include <string>

#include "triage/data/cohort.hpp"
#include "triage/data/preprocess.hpp"
#include "triage/learners/cv.hpp"

namespace triage::cascade {

// Distance of a probability from maximal ambiguity: |p - 0.5| in [0, 0.5].
double certainty(double p);

// Per-row escalation supervision: z = 1 iff the advanced model's certainty
// beats the basic model's by more than delta.
struct TriageLabels {
  std::vector<int> z;
  double delta = 0;
  std::size_t n_positive = 0;
};

// Both prediction sets must be out-of-fold; in-sample predictions would leak
// the very signal the triage model is trained to anticipate.
TriageLabels make_triage_labels(const learners::PredictionSet& p_basic,
                                const learners::PredictionSet& p_advanced, double delta);

// A classifier bound to its preprocessing state.
struct FittedClassifier {
  data::Preprocessor prep;
  learners::ClassifierModel model;
  learners::ParamMap params;

  Eigen::VectorXd predict(const data::CohortTable& cohort,
                          std::span<const std::size_t> rows) const;
  double predict_one(const data::PatientRecord& rec, const data::FeatureSchema& schema) const;
};

struct CascadePolicy {
  FittedClassifier basic;
  FittedClassifier advanced;
  FittedClassifier triage;
  double tau = 0.05;
  double delta = 0.2;
};

enum class Route { basic, advanced };

struct EscalationDecision {
  std::string patient_id;
  bool escalate = false;
  double score = 0;  // g(x_b)
  Route route = Route::basic;
  double final_probability = 0;
  double certainty_before = 0;                 // |p_b - 0.5|
  std::optional<double> certainty_after;       // |p_a - 0.5|, escalated rows only
};

// Escalates iff g(x_b) > tau (strict). Throws advanced_features_required
// when escalation is demanded but the record has no advanced block: that is
// the "order the test" signal.
EscalationDecision cascade_predict(const CascadePolicy& policy, const data::PatientRecord& rec,
                                   const data::FeatureSchema& schema);

}  // namespace triage::cascade
