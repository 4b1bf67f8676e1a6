#include "triage/learners/grid.hpp"

#include <limits>

#include "triage/common.hpp"
#include "triage/eval/metrics.hpp"

namespace triage::learners {

namespace {

std::string describe(const ParamMap& p) {
  std::string out = "{";
  for (const auto& [k, v] : p) {
    if (out.size() > 1) out += ", ";
    out += k + "=" + std::to_string(v);
  }
  return out + "}";
}

}  // namespace

GridSearchResult grid_search(LearnerKind kind, const std::vector<ParamMap>& grid,
                             const Eigen::MatrixXd& X, std::span<const int> y, const CvPlan& plan,
                             Metric metric) {
  require(!grid.empty(), Errc::empty_grid, "hyperparameter grid is empty");
  require(plan.size() == static_cast<std::size_t>(X.rows()), Errc::length_mismatch,
          "plan does not cover the rows of X");

  GridSearchResult res;
  res.grid = grid;
  res.mean_scores.assign(grid.size(), 0.0);

  const auto folds = plan.fold_indices();
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    double total = 0;
    int scored = 0;
    bool failed = false;
    for (const auto& held : folds) {
      if (held.empty()) continue;
      std::vector<std::size_t> train_idx;
      std::vector<char> is_held(plan.size(), 0);
      for (auto i : held) is_held[i] = 1;
      for (std::size_t i = 0; i < plan.size(); ++i)
        if (!is_held[i]) train_idx.push_back(i);

      Eigen::MatrixXd Xt(static_cast<Eigen::Index>(train_idx.size()), X.cols());
      std::vector<int> yt(train_idx.size());
      for (std::size_t j = 0; j < train_idx.size(); ++j) {
        Xt.row(static_cast<Eigen::Index>(j)) = X.row(static_cast<Eigen::Index>(train_idx[j]));
        yt[j] = y[train_idx[j]];
      }
      Eigen::MatrixXd Xh(static_cast<Eigen::Index>(held.size()), X.cols());
      std::vector<int> yh(held.size());
      for (std::size_t j = 0; j < held.size(); ++j) {
        Xh.row(static_cast<Eigen::Index>(j)) = X.row(static_cast<Eigen::Index>(held[j]));
        yh[j] = y[held[j]];
      }
      try {
        const ClassifierModel model = fit_classifier(kind, grid[gi], Xt, yt);
        const Eigen::VectorXd p = model.predict_proba(Xh);
        std::vector<double> scores(p.data(), p.data() + p.size());
        double s = 0;
        if (metric == Metric::auroc) {
          s = eval::auroc(scores, yh);
        } else {
          const auto ms = eval::thresholded_metrics(scores, yh, 0.5);
          s = ms.accuracy;
        }
        total += s;
        ++scored;
      } catch (const Error& e) {
        res.warnings.push_back("grid point " + describe(grid[gi]) + ": " + e.what());
        failed = true;
        break;
      }
    }
    res.mean_scores[gi] = failed || scored == 0
                              ? -std::numeric_limits<double>::infinity()
                              : total / scored;
  }

  res.best_index = 0;
  res.best_score = res.mean_scores[0];
  for (std::size_t gi = 1; gi < grid.size(); ++gi) {
    if (res.mean_scores[gi] > res.best_score) {
      res.best_score = res.mean_scores[gi];
      res.best_index = gi;
    }
  }
  return res;
}

std::vector<ParamMap> default_logreg_grid() {
  return {{{"C", 0.01}}, {{"C", 0.1}}, {{"C", 1.0}}, {{"C", 10.0}}};
}

std::vector<ParamMap> default_svm_grid() {
  std::vector<ParamMap> grid;
  for (double C : {0.1, 1.0, 10.0, 100.0}) {
    grid.push_back({{"C", C}});  // gamma absent: auto (1/width)
    grid.push_back({{"C", C}, {"gamma", 0.01}});
    grid.push_back({{"C", C}, {"gamma", 0.1}});
  }
  return grid;
}

}  // namespace triage::learners
