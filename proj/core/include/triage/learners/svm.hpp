#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace triage::learners {

// Sigmoid map from decision values to probabilities:
//   p = sigmoid(-(A * decision + B));  A < 0 whenever higher decision values
// track the positive class, which keeps p monotone increasing in decision.
struct PlattScale {
  double A = -1.0;
  double B = 0.0;
};

// Soft-margin RBF SVM fitted by pairwise coordinate ascent on the dual
// (maximal-violating-pair selection), followed by Platt calibration on
// 3-fold out-of-fold decision values.
struct SvmModel {
  Eigen::MatrixXd support_vectors;  // one row per SV
  Eigen::VectorXd dual_coeffs;      // alpha_i * y_i per SV
  double bias = 0.0;
  double gamma = 1.0;
  double C = 1.0;
  PlattScale platt;
  int iterations = 0;    // pair updates performed
  double kkt_gap = 0.0;  // final maximal KKT violation (m - M)

  Eigen::Index width() const { return support_vectors.cols(); }
};

// gamma without a value means "auto": 1 / feature width.
SvmModel fit_svm_rbf(const Eigen::MatrixXd& X, std::span<const int> y, double C,
                     std::optional<double> gamma = std::nullopt, double tol = 1e-3,
                     int max_iter = 100000);

Eigen::VectorXd decision_function(const SvmModel& model, const Eigen::MatrixXd& X);
Eigen::VectorXd predict_proba(const SvmModel& model, const Eigen::MatrixXd& X);

// exp(-gamma * ||u - v||^2) for all row pairs.
Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double gamma);

// Dual objective sum(alpha) - 0.5 * sum_ij alpha_i alpha_j y_i y_j K_ij of the
// fitted solution (non-SV terms vanish).
double svm_dual_objective(const SvmModel& model);

// Newton fit of the Platt sigmoid on (decision, label) pairs with the
// standard smoothed targets (N+1)/(N+2) and 1/(N+2).
PlattScale fit_platt(std::span<const double> decisions, std::span<const int> labels);

}  // namespace triage::learners
