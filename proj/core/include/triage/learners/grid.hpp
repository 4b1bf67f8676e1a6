#pragma once

#include <string>
#include <vector>

#include "triage/learners/cv.hpp"

namespace triage::learners {

enum class Metric { auroc, accuracy };

struct GridSearchResult {
  std::vector<ParamMap> grid;
  std::vector<double> mean_scores;  // -inf where a grid point failed
  std::size_t best_index = 0;
  double best_score = 0.0;
  std::vector<std::string> warnings;

  const ParamMap& best_point() const { return grid[best_index]; }
};

// Mean held-out score over the plan's folds per grid point; ties resolve to
// the earliest grid point. A learner failure inside a fold marks that point
// -inf and records a warning instead of aborting the search.
GridSearchResult grid_search(LearnerKind kind, const std::vector<ParamMap>& grid,
                             const Eigen::MatrixXd& X, std::span<const int> y, const CvPlan& plan,
                             Metric metric = Metric::auroc);

// Shipped defaults. The logreg C ladder and the SVM (C, gamma) grid contain
// the operating points the pipeline settles on for paper-shaped cohorts.
std::vector<ParamMap> default_logreg_grid();
std::vector<ParamMap> default_svm_grid();

}  // namespace triage::learners
