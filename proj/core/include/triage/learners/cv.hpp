#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "triage/learners/logreg.hpp"
#include "triage/learners/svm.hpp"

namespace triage::learners {

struct CvPlan {
  int k = 0;
  std::vector<int> fold_of;  // per-row fold index in [0, k)
  std::uint64_t seed = 0;
  bool stratified = true;

  std::size_t size() const { return fold_of.size(); }
  std::vector<std::vector<std::size_t>> fold_indices() const;
};

// Fold sizes differ by at most one; stratified plans also balance per-fold
// positive counts to within one.
CvPlan make_cv_plan(std::size_t n, int k, std::span<const int> y, std::uint64_t seed,
                    bool stratified);

enum class LearnerKind { logreg, svm_rbf };

// Hyperparameters as a name->value map ("C" always; "gamma" optional for the
// SVM, absent meaning 1/width).
using ParamMap = std::map<std::string, double>;

struct ClassifierModel {
  std::variant<LogRegModel, SvmModel> model;

  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const;
  LearnerKind kind() const;
};

ClassifierModel fit_classifier(LearnerKind kind, const ParamMap& params, const Eigen::MatrixXd& X,
                               std::span<const int> y);

// Predictions tagged with how they were produced. Triage-label construction
// refuses anything but out_of_fold.
enum class PredictionSource { out_of_fold, in_sample };

struct PredictionSet {
  std::vector<double> probs;
  PredictionSource source = PredictionSource::in_sample;
};

// Each row predicted by the model whose training folds excluded it.
PredictionSet cross_val_predict(LearnerKind kind, const ParamMap& params,
                                const Eigen::MatrixXd& X, std::span<const int> y,
                                const CvPlan& plan);

PredictionSet in_sample_predictions(const ClassifierModel& model, const Eigen::MatrixXd& X);

}  // namespace triage::learners
