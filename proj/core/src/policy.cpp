#include "triage/cascade/policy.hpp"

#include <cmath>

#include "triage/common.hpp"

namespace triage::cascade {

double certainty(double p) {
  require(p >= 0.0 && p <= 1.0, Errc::out_of_range,
          "probability " + std::to_string(p) + " outside [0,1]");
  return std::abs(p - 0.5);
}

TriageLabels make_triage_labels(const learners::PredictionSet& p_basic,
                                const learners::PredictionSet& p_advanced, double delta) {
  require(delta > 0.0, Errc::non_positive_delta, "certainty margin delta must be > 0");
  require(p_basic.probs.size() == p_advanced.probs.size(), Errc::length_mismatch,
          "basic and advanced prediction vectors differ in length");
  require(p_basic.source == learners::PredictionSource::out_of_fold &&
              p_advanced.source == learners::PredictionSource::out_of_fold,
          Errc::leakage_detected,
          "triage labels require out-of-fold predictions; got in-sample input");

  TriageLabels labels;
  labels.delta = delta;
  labels.z.reserve(p_basic.probs.size());
  for (std::size_t i = 0; i < p_basic.probs.size(); ++i) {
    const double gain = certainty(p_advanced.probs[i]) - certainty(p_basic.probs[i]);
    const int z = gain > delta ? 1 : 0;
    labels.n_positive += static_cast<std::size_t>(z);
    labels.z.push_back(z);
  }
  return labels;
}

Eigen::VectorXd FittedClassifier::predict(const data::CohortTable& cohort,
                                          std::span<const std::size_t> rows) const {
  return model.predict_proba(prep.transform(cohort, rows));
}

double FittedClassifier::predict_one(const data::PatientRecord& rec,
                                     const data::FeatureSchema& schema) const {
  Eigen::MatrixXd X(1, static_cast<Eigen::Index>(prep.width()));
  X.row(0) = prep.transform_row(rec, schema);
  return model.predict_proba(X)[0];
}

EscalationDecision cascade_predict(const CascadePolicy& policy, const data::PatientRecord& rec,
                                   const data::FeatureSchema& schema) {
  EscalationDecision d;
  d.patient_id = rec.id;
  d.score = policy.triage.predict_one(rec, schema);
  d.escalate = d.score > policy.tau;

  const double p_b = policy.basic.predict_one(rec, schema);
  d.certainty_before = certainty(p_b);
  if (!d.escalate) {
    d.route = Route::basic;
    d.final_probability = p_b;
    return d;
  }
  require(rec.advanced_available, Errc::advanced_features_required,
          "patient '" + rec.id + "' needs the advanced feature block (escalation score " +
              std::to_string(d.score) + " > tau)");
  d.route = Route::advanced;
  d.final_probability = policy.advanced.predict_one(rec, schema);
  d.certainty_after = certainty(d.final_probability);
  return d;
}

}  // namespace triage::cascade
