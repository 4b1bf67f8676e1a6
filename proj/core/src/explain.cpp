#include "triage/explain/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "triage/common.hpp"
#include "triage/rng.hpp"

namespace triage::explain {

FeatureGroupMap feature_groups_of(const data::Preprocessor& prep) {
  FeatureGroupMap map;
  for (const auto& g : prep.feature_groups()) {
    map.names.push_back(g.name);
    std::vector<int> cols(static_cast<std::size_t>(g.n_cols));
    for (int c = 0; c < g.n_cols; ++c) cols[static_cast<std::size_t>(c)] = g.first_col + c;
    map.columns.push_back(std::move(cols));
  }
  return map;
}

BackgroundSet make_background(const Eigen::MatrixXd& training_rows, std::size_t cap,
                              std::uint64_t seed) {
  require(training_rows.rows() > 0, Errc::empty_background, "no rows for the background set");
  BackgroundSet bg;
  const auto n = static_cast<std::size_t>(training_rows.rows());
  if (n <= cap) {
    bg.rows = training_rows;
    return bg;
  }
  Rng rng = Rng::derive(seed, 0xb6);
  auto picks = rng.sample_without_replacement(n, cap);
  std::sort(picks.begin(), picks.end());
  bg.rows.resize(static_cast<Eigen::Index>(cap), training_rows.cols());
  for (std::size_t i = 0; i < picks.size(); ++i)
    bg.rows.row(static_cast<Eigen::Index>(i)) = training_rows.row(static_cast<Eigen::Index>(picks[i]));
  return bg;
}

ExplanationRecord explain_decision(const cascade::CascadePolicy& policy,
                                   const data::PatientRecord& rec,
                                   const data::FeatureSchema& schema,
                                   const BackgroundSet& background,
                                   const ExplainOptions& options) {
  const auto& prep = policy.triage.prep;
  const auto groups = feature_groups_of(prep);

  Eigen::RowVectorXd x = prep.transform_row(rec, schema);
  const ScoreFn score_fn = [&policy](const Eigen::MatrixXd& rows) {
    return policy.triage.model.predict_proba(rows);
  };

  const Attribution attr =
      groups.size() <= options.max_exact_groups
          ? exact_shapley(score_fn, background, x, groups)
          : sampled_shapley(score_fn, background, x, groups, options.n_samples, options.seed);

  ExplanationRecord record;
  record.patient_id = rec.id;
  record.score = attr.score;
  record.tau = policy.tau;
  record.escalate = attr.score > policy.tau;
  record.base_value = attr.base_value;
  record.std_errors = attr.std_errors;

  const auto& numeric = prep.numeric_stats();
  for (std::size_t j = 0; j < groups.size(); ++j) {
    ExplanationEntry e;
    e.feature = groups.names[j];
    e.phi = attr.phis[j];
    e.direction = e.phi >= 0 ? "pushes toward escalation" : "pushes against escalation";

    // Raw display value: numerics carry their standardized value alongside.
    bool found = false;
    for (std::size_t k = 0; k < schema.basic_numeric.size() && !found; ++k) {
      if (schema.basic_numeric[k] == e.feature) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.6g", rec.basic_numeric[k]);
        e.raw_value = buf;
        const auto& st = numeric[k];
        e.standardized_value =
            st.stddev > 0 ? (rec.basic_numeric[k] - st.mean) / st.stddev : 0.0;
        found = true;
      }
    }
    for (std::size_t k = 0; k < schema.basic_categorical.size() && !found; ++k) {
      if (schema.basic_categorical[k].name == e.feature) {
        e.raw_value = rec.basic_categorical[k];
        found = true;
      }
    }
    record.entries.push_back(std::move(e));
  }

  std::stable_sort(record.entries.begin(), record.entries.end(),
                   [](const ExplanationEntry& a, const ExplanationEntry& b) {
                     return std::abs(a.phi) > std::abs(b.phi);
                   });
  return record;
}

}  // namespace triage::explain
