#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace triage::learners {

// L2-regularized logistic regression fitted by damped Newton iterations on
//   J(w,b) = 0.5*||w||^2 + C * sum_i log(1 + exp(-y~_i * (w.x_i + b)))
// with y~ in {-1,+1} and an unregularized intercept. Deterministic: zero
// start, Armijo backtracking line search.
struct LogRegModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  double C = 1.0;
  bool converged = false;
  double final_gradient_norm = 0.0;
  int iterations = 0;

  Eigen::Index width() const { return weights.size(); }
};

LogRegModel fit_logreg(const Eigen::MatrixXd& X, std::span<const int> y, double C,
                       double tol = 1e-8, int max_iter = 1000);

Eigen::VectorXd predict_proba(const LogRegModel& model, const Eigen::MatrixXd& X);

// Objective and full gradient (weights then intercept); exposed so tests can
// check stationarity, convexity and finite differences.
double logreg_objective(const Eigen::MatrixXd& X, std::span<const int> y, double C,
                        const Eigen::VectorXd& w, double b);
Eigen::VectorXd logreg_gradient(const Eigen::MatrixXd& X, std::span<const int> y, double C,
                                const Eigen::VectorXd& w, double b);

}  // namespace triage::learners
