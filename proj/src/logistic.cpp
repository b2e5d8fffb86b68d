#include "qmgm/logistic.hpp"

#include <Eigen/Cholesky>

namespace qmgm {

namespace {

double penalized_loglik(const VecX& eta, const Eigen::Ref<const VecX>& labels, const VecX& beta, double ridge) {
  double ll = 0.0;
  for (Index i = 0; i < eta.size(); ++i) {
    // log(1 + exp(eta)) computed stably
    const double e = eta(i);
    const double softplus = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
    ll += labels(i) * e - softplus;
  }
  return ll - 0.5 * ridge * beta.tail(beta.size() - 1).squaredNorm();
}

}  // namespace

LogisticFit fit_logistic(const MatX& covariates, const Eigen::Ref<const VecX>& labels, const LogisticOptions& options) {
  const Index n = covariates.rows();
  const Index d = covariates.cols() + 1;
  MatX design(n, d);
  design.col(0).setOnes();
  design.rightCols(d - 1) = covariates;

  LogisticFit fit;
  fit.coefficients = VecX::Zero(d);
  const double mean = labels.mean();
  fit.coefficients(0) = std::log(mean) - std::log1p(-mean);

  VecX penalty = VecX::Constant(d, options.ridge);
  penalty(0) = 0.0;

  VecX eta = design * fit.coefficients;
  double current = penalized_loglik(eta, labels, fit.coefficients, options.ridge);
  VecX mu(n), w(n);
  for (int it = 0; it < options.max_iterations; ++it) {
    for (Index i = 0; i < n; ++i) {
      mu(i) = logistic(eta(i));
      w(i) = std::max(mu(i) * (1.0 - mu(i)), 1e-12);
    }
    VecX gradient = design.transpose() * (labels - mu);
    gradient.array() -= penalty.array() * fit.coefficients.array();
    MatX hessian = design.transpose() * (design.array().colwise() * w.array()).matrix();
    hessian.diagonal() += penalty;
    Eigen::LDLT<MatX> solver(hessian);
    VecX step = solver.solve(gradient);
    if (solver.info() != Eigen::Success || !step.allFinite()) {
      hessian.diagonal().array() += 1e-8 * n;
      step = hessian.ldlt().solve(gradient);
    }

    // Step halving keeps the penalized likelihood non-decreasing.
    double scale = 1.0;
    VecX candidate;
    VecX candidate_eta;
    double value = current;
    for (int half = 0; half < 30; ++half) {
      candidate = fit.coefficients + scale * step;
      candidate_eta = design * candidate;
      value = penalized_loglik(candidate_eta, labels, candidate, options.ridge);
      if (value >= current - 1e-12 * std::abs(current)) break;
      scale *= 0.5;
    }
    const double change = (scale * step).cwiseAbs().maxCoeff();
    fit.coefficients = candidate;
    eta = candidate_eta;
    current = value;
    fit.iterations = it + 1;
    if (change < options.tolerance) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

}  // namespace qmgm
