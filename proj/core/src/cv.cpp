#include "triage/learners/cv.hpp"

#include <numeric>

#include "triage/common.hpp"
#include "triage/rng.hpp"

namespace triage::learners {

std::vector<std::vector<std::size_t>> CvPlan::fold_indices() const {
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    folds[static_cast<std::size_t>(fold_of[i])].push_back(i);
  return folds;
}

CvPlan make_cv_plan(std::size_t n, int k, std::span<const int> y, std::uint64_t seed,
                    bool stratified) {
  require(k >= 2, Errc::bad_k, "k must be >= 2");
  require(static_cast<std::size_t>(k) <= n, Errc::bad_k, "k exceeds the number of rows");
  require(y.size() == n, Errc::length_mismatch, "label count does not match n");

  CvPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.stratified = stratified;
  plan.fold_of.assign(n, 0);

  Rng rng = Rng::derive(seed, 0xcf01);
  if (stratified) {
    // Shuffle within class, then deal classes round-robin with a cursor that
    // continues across classes so overall fold sizes stay within one.
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i) (y[i] > 0 ? pos : neg).push_back(i);
    rng.shuffle(pos);
    rng.shuffle(neg);
    std::size_t cursor = 0;
    for (auto i : pos) plan.fold_of[i] = static_cast<int>(cursor++ % static_cast<std::size_t>(k));
    for (auto i : neg) plan.fold_of[i] = static_cast<int>(cursor++ % static_cast<std::size_t>(k));
  } else {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    rng.shuffle(idx);
    // Contiguous chunks of the shuffle; the first n%k folds take the extra row.
    const std::size_t base = n / static_cast<std::size_t>(k);
    const std::size_t extra = n % static_cast<std::size_t>(k);
    std::size_t at = 0;
    for (int f = 0; f < k; ++f) {
      const std::size_t len = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
      for (std::size_t j = 0; j < len; ++j) plan.fold_of[idx[at++]] = f;
    }
  }
  return plan;
}

Eigen::VectorXd ClassifierModel::predict_proba(const Eigen::MatrixXd& X) const {
  return std::visit([&X](const auto& m) { return learners::predict_proba(m, X); }, model);
}

LearnerKind ClassifierModel::kind() const {
  return std::holds_alternative<LogRegModel>(model) ? LearnerKind::logreg : LearnerKind::svm_rbf;
}

ClassifierModel fit_classifier(LearnerKind kind, const ParamMap& params, const Eigen::MatrixXd& X,
                               std::span<const int> y) {
  const auto it = params.find("C");
  require(it != params.end(), Errc::invalid_config, "hyperparameters must include C");
  const double C = it->second;
  if (kind == LearnerKind::logreg) {
    return {fit_logreg(X, y, C)};
  }
  std::optional<double> gamma;
  if (const auto g = params.find("gamma"); g != params.end()) gamma = g->second;
  return {fit_svm_rbf(X, y, C, gamma)};
}

PredictionSet cross_val_predict(LearnerKind kind, const ParamMap& params, const Eigen::MatrixXd& X,
                                std::span<const int> y, const CvPlan& plan) {
  require(plan.size() == static_cast<std::size_t>(X.rows()), Errc::length_mismatch,
          "plan does not cover the rows of X");
  PredictionSet out;
  out.source = PredictionSource::out_of_fold;
  out.probs.assign(plan.size(), 0.0);

  const auto folds = plan.fold_indices();
  for (const auto& held : folds) {
    if (held.empty()) continue;
    std::vector<std::size_t> train_idx;
    train_idx.reserve(plan.size() - held.size());
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
    const ClassifierModel model = fit_classifier(kind, params, Xt, yt);

    Eigen::MatrixXd Xh(static_cast<Eigen::Index>(held.size()), X.cols());
    for (std::size_t j = 0; j < held.size(); ++j)
      Xh.row(static_cast<Eigen::Index>(j)) = X.row(static_cast<Eigen::Index>(held[j]));
    const Eigen::VectorXd p = model.predict_proba(Xh);
    for (std::size_t j = 0; j < held.size(); ++j) out.probs[held[j]] = p[static_cast<Eigen::Index>(j)];
  }
  return out;
}

PredictionSet in_sample_predictions(const ClassifierModel& model, const Eigen::MatrixXd& X) {
  PredictionSet out;
  out.source = PredictionSource::in_sample;
  const Eigen::VectorXd p = model.predict_proba(X);
  out.probs.assign(p.data(), p.data() + p.size());
  return out;
}

}  // namespace triage::learners
