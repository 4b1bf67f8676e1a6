#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace triage::explain {

// Reference rows, in the model's preprocessed input space.
struct BackgroundSet {
  Eigen::MatrixXd rows;
};

// Clinical features mapped to the model columns they own; one-hot blocks
// move as a unit so a categorical feature gets a single contribution.
struct FeatureGroupMap {
  std::vector<std::string> names;
  std::vector<std::vector<int>> columns;

  std::size_t size() const { return names.size(); }
};

// Batched model evaluation: one score per input row.
using ScoreFn = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

struct Attribution {
  double base_value = 0;            // mean score over the background set
  std::vector<double> phis;         // one per feature group
  double score = 0;                 // score_fn(x)
  std::vector<double> std_errors;   // sampled estimator only
};

// Exact group Shapley values by full coalition enumeration (2^m subsets);
// coalition value v(S) is the mean score over background rows with the
// grouped columns of S replaced by x. Limited to m <= 16 groups.
Attribution exact_shapley(const ScoreFn& score_fn, const BackgroundSet& background,
                          const Eigen::RowVectorXd& x, const FeatureGroupMap& groups);

// Antithetic permutation-sampling estimate of the same values with
// per-feature standard errors. n_samples counts marginal-contribution
// samples across all features (>= 2m). Deterministic per seed.
Attribution sampled_shapley(const ScoreFn& score_fn, const BackgroundSet& background,
                            const Eigen::RowVectorXd& x, const FeatureGroupMap& groups,
                            std::size_t n_samples, std::uint64_t seed);

}  // namespace triage::explain
