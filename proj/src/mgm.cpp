#include "qmgm/mgm.hpp"

#include <algorithm>
#include <cmath>

#include "qmgm/logistic.hpp"
#include "qmgm/parallel.hpp"
#include "qmgm/quantile_loss.hpp"

namespace qmgm {

GlmFamily family_for(VariableKind kind) {
  switch (kind) {
    case VariableKind::continuous: return GlmFamily::gaussian;
    case VariableKind::binary: return GlmFamily::binomial;
    case VariableKind::count: return GlmFamily::poisson;
  }
  return GlmFamily::gaussian;
}

const char* to_string(GlmFamily family) {
  switch (family) {
    case GlmFamily::gaussian: return "gaussian";
    case GlmFamily::binomial: return "binomial";
    case GlmFamily::poisson: return "poisson";
  }
  return "?";
}

namespace {

constexpr double kMaxEta = 50.0;

double mean_of(GlmFamily family, double eta) {
  switch (family) {
    case GlmFamily::gaussian: return eta;
    case GlmFamily::binomial: return logistic(eta);
    case GlmFamily::poisson: return std::exp(std::min(eta, kMaxEta));
  }
  return eta;
}

double softplus(double e) { return e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e)); }

double loss(GlmFamily family, const Eigen::Ref<const VecX>& y, const VecX& eta) {
  const double n = static_cast<double>(y.size());
  double sum = 0.0;
  switch (family) {
    case GlmFamily::gaussian: return 0.5 * (y - eta).squaredNorm() / n;
    case GlmFamily::binomial:
      for (Index i = 0; i < y.size(); ++i) sum += softplus(eta(i)) - y(i) * eta(i);
      return sum / n;
    case GlmFamily::poisson:
      for (Index i = 0; i < y.size(); ++i) sum += std::exp(std::min(eta(i), kMaxEta)) - y(i) * eta(i);
      return sum / n;
  }
  return sum;
}

// Coordinate descent on (1/2n) sum_i w_i (z_i - b0 - x_i'beta)^2 + lambda ||beta||_1.
// Returns the number of sweeps.
int weighted_lasso_cd(const MatX& x, const VecX& z, const VecX& w, double lambda, double& b0, VecX& beta,
                      const GlmOptions& options, std::vector<double>* trace, bool* converged) {
  const Index n = x.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double w_sum = w.sum() * inv_n;
  VecX curvature(x.cols());
  for (Index c = 0; c < x.cols(); ++c) curvature(c) = w.dot(x.col(c).cwiseAbs2()) * inv_n;

  VecX residual = z - x * beta;
  residual.array() -= b0;
  auto record = [&] {
    if (trace != nullptr) {
      trace->push_back(0.5 * inv_n * w.dot(residual.cwiseAbs2()) + lambda * beta.cwiseAbs().sum());
    }
  };
  record();
  *converged = false;
  int sweep = 0;
  for (; sweep < options.max_sweeps; ++sweep) {
    double change = 0.0;
    if (w_sum > 0.0) {
      const double delta = w.dot(residual) * inv_n / w_sum;
      b0 += delta;
      residual.array() -= delta;
      change = std::max(change, std::abs(delta));
    }
    for (Index c = 0; c < x.cols(); ++c) {
      if (curvature(c) <= 0.0) continue;
      const double old = beta(c);
      const double rho = x.col(c).cwiseProduct(w).dot(residual) * inv_n + curvature(c) * old;
      const double updated = soft_threshold(rho, lambda) / curvature(c);
      if (updated != old) {
        residual -= (updated - old) * x.col(c);
        beta(c) = updated;
        change = std::max(change, std::abs(updated - old));
      }
    }
    record();
    if (change < options.tolerance) {
      *converged = true;
      ++sweep;
      break;
    }
  }
  return sweep;
}

}  // namespace

double glm_objective(const MatX& x, const Eigen::Ref<const VecX>& y, GlmFamily family, double intercept,
                     const Eigen::Ref<const VecX>& beta, double lambda) {
  VecX eta = x * beta;
  eta.array() += intercept;
  return loss(family, y, eta) + lambda * beta.cwiseAbs().sum();
}

double glm_lambda_max(const MatX& x, const Eigen::Ref<const VecX>& y, GlmFamily family) {
  (void)family;
  const VecX centered = y.array() - y.mean();
  return (x.transpose() * centered).cwiseAbs().maxCoeff() / static_cast<double>(y.size());
}

GlmFit fit_glm_lasso(const MatX& x, const Eigen::Ref<const VecX>& y, GlmFamily family, double lambda,
                     const GlmOptions& options, const GlmFit* warm) {
  GlmFit fit;
  const Index n = x.rows();
  if (warm != nullptr) {
    fit.intercept = warm->intercept;
    fit.beta = warm->beta;
  } else {
    fit.beta = VecX::Zero(x.cols());
    const double mean = y.mean();
    switch (family) {
      case GlmFamily::gaussian: fit.intercept = mean; break;
      case GlmFamily::binomial: fit.intercept = std::log(mean) - std::log1p(-mean); break;
      case GlmFamily::poisson: fit.intercept = std::log(mean); break;
    }
  }
  std::vector<double>* trace = options.record_trace ? &fit.objective_trace : nullptr;

  // At or above lambda_max the intercept-only model is the exact solution;
  // returning it directly avoids rounding leaving a 1e-17 slope behind.
  if (lambda >= glm_lambda_max(x, y, family)) {
    const double mean = y.mean();
    fit.beta = VecX::Zero(x.cols());
    fit.intercept = family == GlmFamily::gaussian ? mean
                    : family == GlmFamily::binomial ? std::log(mean) - std::log1p(-mean)
                                                    : std::log(mean);
    fit.converged = true;
    fit.objective = glm_objective(x, y, family, fit.intercept, fit.beta, lambda);
    if (trace != nullptr) trace->push_back(fit.objective);
    return fit;
  }

  if (family == GlmFamily::gaussian) {
    bool converged = false;
    fit.iterations = weighted_lasso_cd(x, y, VecX::Ones(n), lambda, fit.intercept, fit.beta, options, trace, &converged);
    fit.converged = converged;
    fit.objective = glm_objective(x, y, family, fit.intercept, fit.beta, lambda);
    return fit;
  }

  // Proximal Newton: quadratic approximation, penalized weighted least
  // squares by coordinate descent, then a backtracking step on the true
  // penalized objective.
  double current = glm_objective(x, y, family, fit.intercept, fit.beta, lambda);
  if (trace != nullptr) trace->push_back(current);
  VecX eta(n), w(n), z(n);
  for (int outer = 0; outer < options.max_outer_iterations; ++outer) {
    eta = x * fit.beta;
    eta.array() += fit.intercept;
    for (Index i = 0; i < n; ++i) {
      const double mu = mean_of(family, eta(i));
      const double variance = family == GlmFamily::binomial ? mu * (1.0 - mu) : mu;
      w(i) = std::max(variance, 1e-5);
      z(i) = eta(i) + (y(i) - mu) / w(i);
    }
    double b0 = fit.intercept;
    VecX beta = fit.beta;
    bool inner_converged = false;
    GlmOptions inner = options;
    inner.record_trace = false;
    weighted_lasso_cd(x, z, w, lambda, b0, beta, inner, nullptr, &inner_converged);

    const double d0 = b0 - fit.intercept;
    const VecX d = beta - fit.beta;
    double t = 1.0;
    double candidate = current;
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      candidate = glm_objective(x, y, family, fit.intercept + t * d0, fit.beta + t * d, lambda);
      if (candidate <= current) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    fit.iterations = outer + 1;
    if (!accepted) {
      fit.converged = true;
      break;
    }
    const double change = std::max(std::abs(t * d0), d.size() ? (t * d).cwiseAbs().maxCoeff() : 0.0);
    fit.intercept += t * d0;
    fit.beta += t * d;
    current = candidate;
    if (trace != nullptr) trace->push_back(current);
    if (change < options.tolerance) {
      fit.converged = true;
      break;
    }
  }
  fit.objective = current;
  return fit;
}

std::vector<GlmFit> fit_glm_lasso_path(const MatX& x, const Eigen::Ref<const VecX>& y, GlmFamily family,
                                       const std::vector<double>& lambdas, const GlmOptions& options) {
  for (std::size_t m = 1; m < lambdas.size(); ++m) {
    if (!(lambdas[m] < lambdas[m - 1])) throw std::invalid_argument("lambda grid must be strictly decreasing");
  }
  std::vector<GlmFit> path;
  path.reserve(lambdas.size());
  for (std::size_t m = 0; m < lambdas.size(); ++m) {
    path.push_back(fit_glm_lasso(x, y, family, lambdas[m], options, m == 0 ? nullptr : &path.back()));
  }
  return path;
}

double glm_deviance(GlmFamily family, const Eigen::Ref<const VecX>& y, const Eigen::Ref<const VecX>& linear_predictor) {
  double sum = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    const double mu = mean_of(family, linear_predictor(i));
    switch (family) {
      case GlmFamily::gaussian: sum += (y(i) - mu) * (y(i) - mu); break;
      case GlmFamily::binomial: {
        const double eta = linear_predictor(i);
        // -2 log-likelihood; the saturated binomial model has likelihood 1.
        sum += 2.0 * (softplus(eta) - y(i) * eta);
        break;
      }
      case GlmFamily::poisson:
        sum += 2.0 * ((y(i) > 0 ? y(i) * std::log(y(i) / mu) : 0.0) - (y(i) - mu));
        break;
    }
  }
  return sum;
}

double glm_deviance(const GlmFit& fit, GlmFamily family, const MatX& x, const Eigen::Ref<const VecX>& y) {
  VecX eta = x * fit.beta;
  eta.array() += fit.intercept;
  return glm_deviance(family, y, eta);
}

CoefficientCube fit_mgm(const Dataset& data, const std::vector<double>& lambdas, const GlmOptions& options,
                        int threads) {
  require_complete(data);
  const Index p = data.cols();
  CoefficientCube cube(p, {0.5}, lambdas, CubeModel::glm);
  parallel_for(static_cast<int>(p), threads, [&](int j) {
    const GlmFamily family = family_for(data.schema[static_cast<std::size_t>(j)].kind);
    const MatX x = covariates_without(data.values, j);
    const VecX y = data.values.col(j);
    const auto path = fit_glm_lasso_path(x, y, family, lambdas, options);
    for (int m = 0; m < static_cast<int>(path.size()); ++m) {
      const auto& fit = path[static_cast<std::size_t>(m)];
      cube.intercept(j, 0, m) = fit.intercept;
      cube.beta(j, 0, m) = fit.beta;
      cube.meta(j, 0, m) = FitMeta{fit.objective, fit.iterations, fit.converged};
    }
  });
  return cube;
}

}  // namespace qmgm
