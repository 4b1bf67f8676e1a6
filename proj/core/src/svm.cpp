#include "triage/learners/svm.hpp"

#include <cmath>
#include <limits>

#include "triage/common.hpp"

namespace triage::learners {

namespace {

double sigmoid(double t) {
  return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

void check_two_classes(std::span<const int> y) {
  bool pos = false, neg = false;
  for (int v : y) (v > 0 ? pos : neg) = true;
  require(pos && neg, Errc::single_class, "training labels contain a single class");
}

struct SmoResult {
  std::vector<double> alpha;
  double bias = 0;
  int iterations = 0;
  double gap = 0;
};

// Minimizes 0.5*a'Qa - e'a subject to 0 <= a <= C, y'a = 0, with
// Q_ij = y_i y_j K_ij. First-order maximal-violating-pair working set.
SmoResult solve_smo(const Eigen::MatrixXd& K, std::span<const int> y, double C, double tol,
                    int max_iter) {
  const int n = static_cast<int>(K.rows());
  std::vector<double> alpha(n, 0.0);
  std::vector<double> yy(n);
  for (int i = 0; i < n; ++i) yy[i] = y[static_cast<std::size_t>(i)] > 0 ? 1.0 : -1.0;

  // G_i = dObj/dalpha_i = y_i * u_i - 1; starts at -1 with alpha = 0.
  std::vector<double> grad(n, -1.0);

  SmoResult res;
  int iter = 0;
  double m = 0, M = 0;
  while (iter < max_iter) {
    int i_up = -1, i_low = -1;
    m = -std::numeric_limits<double>::infinity();
    M = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      const bool in_up = (yy[k] > 0 && alpha[k] < C) || (yy[k] < 0 && alpha[k] > 0);
      const bool in_low = (yy[k] > 0 && alpha[k] > 0) || (yy[k] < 0 && alpha[k] < C);
      const double v = -yy[k] * grad[k];
      if (in_up && v > m) {
        m = v;
        i_up = k;
      }
      if (in_low && v < M) {
        M = v;
        i_low = k;
      }
    }
    if (i_up < 0 || i_low < 0 || m - M <= tol) break;

    const int i = i_up, j = i_low;
    double kappa = K(i, i) + K(j, j) - 2.0 * K(i, j);
    if (kappa <= 0) kappa = 1e-12;
    double t = (m - M) / kappa;

    // Box limits along the feasible direction d = y_i e_i - y_j e_j.
    double t_max = t;
    t_max = std::min(t_max, yy[i] > 0 ? C - alpha[i] : alpha[i]);
    t_max = std::min(t_max, yy[j] > 0 ? alpha[j] : C - alpha[j]);
    t = std::min(t, t_max);
    if (t <= 0) break;  // numerically stuck at the box boundary

    alpha[i] += yy[i] * t;
    alpha[j] -= yy[j] * t;
    for (int k = 0; k < n; ++k) grad[k] += yy[k] * t * (K(k, i) - K(k, j));
    ++iter;
  }
  res.iterations = iter;
  res.gap = m - M;

  // Bias from free support vectors when any exist, else the midpoint of the
  // feasible interval [m, M].
  double sum = 0;
  int n_free = 0;
  for (int k = 0; k < n; ++k) {
    if (alpha[k] > 1e-12 && alpha[k] < C - 1e-12) {
      sum += -yy[k] * grad[k];
      ++n_free;
    }
  }
  res.bias = n_free > 0 ? sum / n_free : 0.5 * (m + M);
  res.alpha = std::move(alpha);
  return res;
}

// Deterministic 3-fold assignment: positives dealt round-robin first, then
// negatives continue the cycle, so folds stay class-balanced without RNG.
std::vector<int> platt_folds(std::span<const int> y, int k) {
  std::vector<int> fold(y.size(), 0);
  int cursor = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] > 0) fold[i] = cursor++ % k;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] <= 0) fold[i] = cursor++ % k;
  return fold;
}

}  // namespace

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double gamma) {
  const Eigen::VectorXd a2 = A.rowwise().squaredNorm();
  const Eigen::VectorXd b2 = B.rowwise().squaredNorm();
  Eigen::MatrixXd D = -2.0 * (A * B.transpose());
  D.colwise() += a2;
  D.rowwise() += b2.transpose();
  return (-gamma * D.cwiseMax(0.0)).array().exp();
}

PlattScale fit_platt(std::span<const double> decisions, std::span<const int> labels) {
  require(decisions.size() == labels.size(), Errc::length_mismatch,
          "decision and label counts differ");
  const std::size_t n = decisions.size();
  double prior1 = 0, prior0 = 0;
  for (int v : labels) (v > 0 ? prior1 : prior0) += 1.0;

  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = labels[i] > 0 ? hi : lo;

  double A = 0.0;
  double B = std::log((prior0 + 1.0) / (prior1 + 1.0));

  auto fval = [&](double a, double b) {
    double f = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double fApB = decisions[i] * a + b;
      f += fApB >= 0 ? t[i] * fApB + std::log1p(std::exp(-fApB))
                     : (t[i] - 1.0) * fApB + std::log1p(std::exp(fApB));
    }
    return f;
  };

  double f = fval(A, B);
  constexpr int kMaxIter = 100;
  constexpr double kMinStep = 1e-10;
  constexpr double kSigma = 1e-12;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    double h11 = kSigma, h22 = kSigma, h21 = 0, g1 = 0, g2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double fApB = decisions[i] * A + B;
      const double p = fApB >= 0 ? std::exp(-fApB) / (1.0 + std::exp(-fApB))
                                 : 1.0 / (1.0 + std::exp(fApB));
      const double q = 1.0 - p;
      const double d2 = p * q;
      h11 += decisions[i] * decisions[i] * d2;
      h22 += d2;
      h21 += decisions[i] * d2;
      const double d1 = t[i] - p;
      g1 += decisions[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;

    const double det = h11 * h22 - h21 * h21;
    const double dA = -(h22 * g1 - h21 * g2) / det;
    const double dB = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * dA + g2 * dB;

    double stepsize = 1.0;
    while (stepsize >= kMinStep) {
      const double newA = A + stepsize * dA;
      const double newB = B + stepsize * dB;
      const double newf = fval(newA, newB);
      if (newf < f + 1e-4 * stepsize * gd) {
        A = newA;
        B = newB;
        f = newf;
        break;
      }
      stepsize *= 0.5;
    }
    if (stepsize < kMinStep) break;
  }
  return {A, B};
}

SvmModel fit_svm_rbf(const Eigen::MatrixXd& X, std::span<const int> y, double C,
                     std::optional<double> gamma, double tol, int max_iter) {
  require(static_cast<std::size_t>(X.rows()) == y.size(), Errc::length_mismatch,
          "X rows and label count differ");
  require(C > 0, Errc::invalid_config, "C must be positive");
  check_two_classes(y);
  const double g = gamma.value_or(1.0 / static_cast<double>(X.cols()));
  require(g > 0, Errc::invalid_config, "gamma must be positive");

  const Eigen::MatrixXd K = rbf_kernel(X, X, g);
  const SmoResult full = solve_smo(K, y, C, tol, max_iter);

  SvmModel model;
  model.gamma = g;
  model.C = C;
  model.bias = full.bias;
  model.iterations = full.iterations;
  model.kkt_gap = full.gap;

  std::vector<int> sv;
  for (int i = 0; i < static_cast<int>(full.alpha.size()); ++i)
    if (full.alpha[static_cast<std::size_t>(i)] > 1e-12) sv.push_back(i);
  model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), X.cols());
  model.dual_coeffs.resize(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t k = 0; k < sv.size(); ++k) {
    model.support_vectors.row(static_cast<Eigen::Index>(k)) = X.row(sv[k]);
    const double yy = y[static_cast<std::size_t>(sv[k])] > 0 ? 1.0 : -1.0;
    model.dual_coeffs[static_cast<Eigen::Index>(k)] =
        full.alpha[static_cast<std::size_t>(sv[k])] * yy;
  }

  // Calibration decisions: out-of-fold values from 3 refits where the class
  // counts allow it, otherwise in-sample values from the full model.
  const int n = static_cast<int>(X.rows());
  std::vector<double> dec(static_cast<std::size_t>(n), 0.0);
  const auto fold = platt_folds(y, 3);
  bool oof_ok = true;
  for (int f = 0; f < 3 && oof_ok; ++f) {
    int pos = 0, neg = 0, held = 0;
    for (int i = 0; i < n; ++i) {
      if (fold[static_cast<std::size_t>(i)] == f) {
        ++held;
      } else {
        (y[static_cast<std::size_t>(i)] > 0 ? pos : neg) += 1;
      }
    }
    if (held > 0 && (pos == 0 || neg == 0)) oof_ok = false;
  }
  if (oof_ok) {
    for (int f = 0; f < 3; ++f) {
      std::vector<int> train_idx, held_idx;
      for (int i = 0; i < n; ++i)
        (fold[static_cast<std::size_t>(i)] == f ? held_idx : train_idx).push_back(i);
      if (held_idx.empty()) continue;
      Eigen::MatrixXd Xt(static_cast<Eigen::Index>(train_idx.size()), X.cols());
      std::vector<int> yt(train_idx.size());
      for (std::size_t k = 0; k < train_idx.size(); ++k) {
        Xt.row(static_cast<Eigen::Index>(k)) = X.row(train_idx[k]);
        yt[k] = y[static_cast<std::size_t>(train_idx[k])];
      }
      const Eigen::MatrixXd Kt = rbf_kernel(Xt, Xt, g);
      const SmoResult part = solve_smo(Kt, yt, C, tol, max_iter);
      Eigen::MatrixXd Xh(static_cast<Eigen::Index>(held_idx.size()), X.cols());
      for (std::size_t k = 0; k < held_idx.size(); ++k)
        Xh.row(static_cast<Eigen::Index>(k)) = X.row(held_idx[k]);
      const Eigen::MatrixXd Kh = rbf_kernel(Xh, Xt, g);
      for (std::size_t k = 0; k < held_idx.size(); ++k) {
        double u = part.bias;
        for (std::size_t s = 0; s < train_idx.size(); ++s) {
          const double a = part.alpha[s];
          if (a > 0)
            u += a * (yt[s] > 0 ? 1.0 : -1.0) *
                 Kh(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s));
        }
        dec[static_cast<std::size_t>(held_idx[k])] = u;
      }
    }
  } else {
    const Eigen::VectorXd d = decision_function(model, X);
    for (int i = 0; i < n; ++i) dec[static_cast<std::size_t>(i)] = d[i];
  }
  model.platt = fit_platt(dec, y);
  return model;
}

Eigen::VectorXd decision_function(const SvmModel& model, const Eigen::MatrixXd& X) {
  require(X.cols() == model.support_vectors.cols(), Errc::width_mismatch,
          "feature width does not match the fitted model");
  if (model.support_vectors.rows() == 0)
    return Eigen::VectorXd::Constant(X.rows(), model.bias);
  const Eigen::MatrixXd K = rbf_kernel(X, model.support_vectors, model.gamma);
  return (K * model.dual_coeffs).array() + model.bias;
}

Eigen::VectorXd predict_proba(const SvmModel& model, const Eigen::MatrixXd& X) {
  Eigen::VectorXd dec = decision_function(model, X);
  for (Eigen::Index i = 0; i < dec.size(); ++i)
    dec[i] = sigmoid(-(model.platt.A * dec[i] + model.platt.B));
  return dec;
}

double svm_dual_objective(const SvmModel& model) {
  const Eigen::VectorXd& c = model.dual_coeffs;
  const double sum_alpha = c.cwiseAbs().sum();
  const Eigen::MatrixXd K =
      rbf_kernel(model.support_vectors, model.support_vectors, model.gamma);
  return sum_alpha - 0.5 * c.dot(K * c);
}

}  // namespace triage::learners
