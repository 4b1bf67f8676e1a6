#include "triage/learners/logreg.hpp"

#include <cmath>

#include "triage/common.hpp"

namespace triage::learners {

namespace {

// log(1 + exp(s)) without overflow
double log1pexp(double s) { return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

double sigmoid(double t) {
  return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

void check_two_classes(std::span<const int> y) {
  bool pos = false, neg = false;
  for (int v : y) (v > 0 ? pos : neg) = true;
  require(pos && neg, Errc::single_class, "training labels contain a single class");
}

}  // namespace

double logreg_objective(const Eigen::MatrixXd& X, std::span<const int> y, double C,
                        const Eigen::VectorXd& w, double b) {
  const Eigen::VectorXd f = X * w + Eigen::VectorXd::Constant(X.rows(), b);
  double loss = 0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double yy = y[static_cast<std::size_t>(i)] > 0 ? 1.0 : -1.0;
    loss += log1pexp(-yy * f[i]);
  }
  return 0.5 * w.squaredNorm() + C * loss;
}

Eigen::VectorXd logreg_gradient(const Eigen::MatrixXd& X, std::span<const int> y, double C,
                                const Eigen::VectorXd& w, double b) {
  const Eigen::Index d = X.cols();
  const Eigen::VectorXd f = X * w + Eigen::VectorXd::Constant(X.rows(), b);
  Eigen::VectorXd resid(X.rows());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double yy = y[static_cast<std::size_t>(i)] > 0 ? 1.0 : -1.0;
    resid[i] = -yy * sigmoid(-yy * f[i]);
  }
  Eigen::VectorXd g(d + 1);
  g.head(d) = w + C * (X.transpose() * resid);
  g[d] = C * resid.sum();
  return g;
}

LogRegModel fit_logreg(const Eigen::MatrixXd& X, std::span<const int> y, double C, double tol,
                       int max_iter) {
  require(static_cast<std::size_t>(X.rows()) == y.size(), Errc::length_mismatch,
          "X rows and label count differ");
  require(C > 0, Errc::invalid_config, "C must be positive");
  check_two_classes(y);

  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;

  LogRegModel model;
  model.C = C;

  double obj = logreg_objective(X, y, C, w, b);
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd g = logreg_gradient(X, y, C, w, b);
    model.final_gradient_norm = g.norm();
    model.iterations = iter;
    if (model.final_gradient_norm <= tol) {
      model.converged = true;
      break;
    }

    const Eigen::VectorXd f = X * w + Eigen::VectorXd::Constant(n, b);
    Eigen::VectorXd dvec(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = sigmoid(f[i]);
      dvec[i] = std::max(p * (1.0 - p), 1e-12);
    }

    // Hessian over (w, b); the intercept row carries no ridge term.
    Eigen::MatrixXd H(d + 1, d + 1);
    const Eigen::MatrixXd Xd = dvec.asDiagonal() * X;
    H.topLeftCorner(d, d) = C * (X.transpose() * Xd);
    H.topLeftCorner(d, d).diagonal().array() += 1.0;
    const Eigen::VectorXd xd = C * Xd.colwise().sum().transpose();
    H.block(0, d, d, 1) = xd;
    H.block(d, 0, 1, d) = xd.transpose();
    H(d, d) = C * dvec.sum() + 1e-12;

    Eigen::VectorXd step = H.ldlt().solve(-g);
    double slope = g.dot(step);
    if (!(slope < 0)) {
      step = -g;  // fall back to steepest descent if the solve degenerates
      slope = g.dot(step);
    }

    double stepsize = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd w_try = w + stepsize * step.head(d);
      const double b_try = b + stepsize * step[d];
      const double obj_try = logreg_objective(X, y, C, w_try, b_try);
      if (obj_try <= obj + 1e-4 * stepsize * slope) {
        w = w_try;
        b = b_try;
        obj = obj_try;
        moved = true;
        break;
      }
      stepsize *= 0.5;
    }
    if (!moved) break;  // no further progress possible at float precision
  }

  if (!model.converged) {
    const Eigen::VectorXd g = logreg_gradient(X, y, C, w, b);
    model.final_gradient_norm = g.norm();
    model.converged = model.final_gradient_norm <= tol;
  }
  model.weights = std::move(w);
  model.intercept = b;
  return model;
}

Eigen::VectorXd predict_proba(const LogRegModel& model, const Eigen::MatrixXd& X) {
  require(X.cols() == model.weights.size(), Errc::width_mismatch,
          "feature width does not match the fitted model");
  Eigen::VectorXd f = X * model.weights + Eigen::VectorXd::Constant(X.rows(), model.intercept);
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = sigmoid(f[i]);
  return f;
}

}  // namespace triage::learners
