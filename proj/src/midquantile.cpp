#include "qmgm/midquantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmgm/quantile_loss.hpp"

namespace qmgm {

NodeProblem make_node_problem(const Dataset& data, const NodeMidCdf& midcdf, Extrapolation extrapolation) {
  require_complete(data);
  NodeProblem problem;
  problem.node = midcdf.logits.node;
  problem.link = data.schema.at(static_cast<std::size_t>(problem.node)).link;
  problem.extrapolation = extrapolation;
  problem.covariates = covariates_without(data.values, problem.node);
  problem.thresholds = midcdf.logits.thresholds;
  problem.pi = midcdf.pi;
  problem.response = data.values.col(problem.node);
  return problem;
}

void check_config(const NodeFitConfig& config, Index dimension) {
  if (!(config.tau > 0.0 && config.tau < 1.0)) throw std::invalid_argument("tau outside (0,1)");
  if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda)) throw std::invalid_argument("lambda must be >= 0");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (config.weights.size() != 0) {
    if (config.weights.size() != dimension) throw std::invalid_argument("weight vector has the wrong length");
    if (!config.weights.allFinite() || (config.weights.array() < 0.0).any()) {
      throw std::invalid_argument("weights must be finite and nonnegative");
    }
  }
}

namespace {

VecX weights_or_ones(const NodeFitConfig& config, Index dimension) {
  return config.weights.size() == 0 ? VecX::Ones(dimension) : config.weights;
}

double penalty(const Eigen::Ref<const VecX>& beta, const VecX& weights, double lambda) {
  if (lambda == 0.0) return 0.0;
  return lambda * weights.cwiseProduct(beta.cwiseAbs()).sum();
}

// Per-row pieces of the smooth term: r_i = Gc(eta_i) - tau and the chain-rule
// factor s_i = slope_i * (g^{-1})'(linear_i), so that d r_i / d theta = s_i (1, x_i).
double evaluate_rows(const NodeProblem& problem, double intercept, const Eigen::Ref<const VecX>& beta, double tau,
                     VecX* residual, VecX* factor) {
  const Index n = problem.rows();
  const int k = static_cast<int>(problem.thresholds.size());
  const double* z = problem.thresholds.data();
  VecX linear = problem.covariates * beta;
  linear.array() += intercept;

  double sum = 0.0;
  if (residual != nullptr) {
    residual->resize(n);
    factor->resize(n);
  }
  for (Index i = 0; i < n; ++i) {
    const double eta = link_inverse(problem.link, linear(i));
    const InterpolantValue g = evaluate_interpolant(z, problem.pi.row(i).data(), k, eta, problem.extrapolation);
    const double diff = g.value - tau;
    sum += diff * diff;
    if (residual != nullptr) {
      (*residual)(i) = diff;
      (*factor)(i) = g.slope == 0.0 ? 0.0 : g.slope * link_inverse_derivative(problem.link, linear(i));
    }
  }
  return sum / static_cast<double>(n);
}

VecX gradient_from_rows(const NodeProblem& problem, const VecX& residual, const VecX& factor) {
  const double scale = 2.0 / static_cast<double>(problem.rows());
  const VecX weight = residual.cwiseProduct(factor);
  VecX gradient(problem.dimension() + 1);
  gradient(0) = scale * weight.sum();
  gradient.tail(problem.dimension()) = scale * (problem.covariates.transpose() * weight);
  return gradient;
}

double evaluate(const NodeProblem& problem, double intercept, const Eigen::Ref<const VecX>& beta, double tau,
                VecX* gradient) {
  if (gradient == nullptr) return evaluate_rows(problem, intercept, beta, tau, nullptr, nullptr);
  VecX residual, factor;
  const double value = evaluate_rows(problem, intercept, beta, tau, &residual, &factor);
  *gradient = gradient_from_rows(problem, residual, factor);
  return value;
}

struct Iterate {
  double intercept = 0.0;
  VecX beta;
};

bool slopes_screened(const VecX& beta, const VecX& gradient, const VecX& weights, double lambda) {
  if (!beta.isZero(0.0)) return false;
  for (Index c = 0; c < beta.size(); ++c) {
    if (std::abs(gradient(c + 1)) > lambda * weights(c)) return false;
  }
  return true;
}

// Proximal gradient with halving backtracking. The intercept is never
// thresholded; when `slopes_free` is false only the intercept moves.
void run_proximal_gradient(const NodeProblem& problem, const NodeFitConfig& config, const VecX& weights,
                           bool slopes_free, Iterate& x, NodeFitResult& result) {
  const double lambda = slopes_free ? config.lambda : 0.0;
  VecX gradient;
  double smooth = evaluate(problem, x.intercept, x.beta, config.tau, &gradient);
  double full = smooth + penalty(x.beta, weights, lambda);
  if (config.record_trace && result.objective_trace.empty()) result.objective_trace.push_back(full);

  double step = config.initial_step;
  VecX candidate_beta(x.beta.size());
  for (int it = 0; it < config.max_iterations; ++it) {
    bool accepted = false;
    double candidate_intercept = x.intercept;
    double candidate_smooth = smooth;
    double candidate_full = full;
    while (step >= config.min_step) {
      candidate_intercept = x.intercept - step * gradient(0);
      if (slopes_free) {
        for (Index c = 0; c < x.beta.size(); ++c) {
          candidate_beta(c) = soft_threshold(x.beta(c) - step * gradient(c + 1), step * lambda * weights(c));
        }
      } else {
        candidate_beta = x.beta;
      }
      const double d0 = candidate_intercept - x.intercept;
      const VecX d = candidate_beta - x.beta;
      candidate_smooth = evaluate(problem, candidate_intercept, candidate_beta, config.tau, nullptr);
      const double model = smooth + gradient(0) * d0 + gradient.tail(d.size()).dot(d) +
                           (d0 * d0 + d.squaredNorm()) / (2.0 * step);
      candidate_full = candidate_smooth + penalty(candidate_beta, weights, lambda);
      const double slack = 1e-12 * std::max(1.0, std::abs(smooth));
      if (candidate_smooth <= model + slack && candidate_full < full) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++result.iterations;
    if (!accepted) {
      // No step size decreases the objective: stationary up to the kinks of
      // the interpolant.
      result.converged = true;
      return;
    }
    const double change = std::max(std::abs(candidate_intercept - x.intercept),
                                   x.beta.size() ? (candidate_beta - x.beta).cwiseAbs().maxCoeff() : 0.0);
    x.intercept = candidate_intercept;
    x.beta = candidate_beta;
    smooth = candidate_smooth;
    full = candidate_full;
    if (config.record_trace) result.objective_trace.push_back(full);
    if (change < config.tolerance) {
      result.converged = true;
      return;
    }
    step = std::min(2.0 * step, config.max_step);
    smooth = evaluate(problem, x.intercept, x.beta, config.tau, &gradient);
  }
  result.converged = false;
}

// Minimizes g'd + d'Hd/2 + lambda * sum_c w_c |beta_c + d_c| over d by cyclic
// coordinate descent; coordinate 0 is the unpenalized intercept.
VecX solve_prox_model(const MatX& hessian, const VecX& gradient, const VecX& beta, const VecX& weights, double lambda,
                      bool slopes_free) {
  const Index dim = gradient.size();
  VecX d = VecX::Zero(dim);
  VecX hd = VecX::Zero(dim);  // H d, kept current
  const Index last = slopes_free ? dim : 1;
  for (int sweep = 0; sweep < 1000; ++sweep) {
    double biggest = 0.0;
    for (Index c = 0; c < last; ++c) {
      const double h = hessian(c, c);
      if (!(h > 0.0)) continue;
      const double partial = gradient(c) + hd(c) - h * d(c);  // gradient of the model w.r.t. d_c at d_c = 0
      double updated;
      if (c == 0) {
        updated = -partial / h;
      } else {
        const double b = beta(c - 1);
        updated = soft_threshold(b - partial / h, lambda * weights(c - 1) / h) - b;
      }
      const double delta = updated - d(c);
      if (delta == 0.0) continue;
      d(c) = updated;
      hd += hessian.col(c) * delta;
      biggest = std::max(biggest, std::abs(delta) * std::sqrt(h));
    }
    if (biggest < 1e-12) break;
  }
  return d;
}

// Damped Gauss-Newton proximal steps: the smooth term is a sum of squares, so
// J'J gives a curvature model whose penalized minimizer (found by coordinate
// descent with soft-thresholding) is searched along with halving until the
// objective decreases. Falls back to a proximal gradient step when
// the model direction fails.
void run_gauss_newton(const NodeProblem& problem, const NodeFitConfig& config, const VecX& weights, bool slopes_free,
                      Iterate& x, NodeFitResult& result) {
  const double lambda = slopes_free ? config.lambda : 0.0;
  const Index n = problem.rows();
  const Index dim = problem.dimension() + 1;
  const double scale = 2.0 / static_cast<double>(n);

  VecX residual, factor;
  double smooth = evaluate_rows(problem, x.intercept, x.beta, config.tau, &residual, &factor);
  double full = smooth + penalty(x.beta, weights, lambda);
  if (config.record_trace && result.objective_trace.empty()) result.objective_trace.push_back(full);

  MatX design(n, dim);
  design.col(0).setOnes();
  design.rightCols(dim - 1) = problem.covariates;
  MatX jacobian(n, dim);
  VecX candidate_beta(x.beta.size());

  for (int it = 0; it < config.max_iterations; ++it) {
    const VecX gradient = gradient_from_rows(problem, residual, factor);
    const bool screened = slopes_free && slopes_screened(x.beta, gradient, weights, lambda);
    jacobian = factor.asDiagonal() * design;
    MatX hessian = scale * (jacobian.transpose() * jacobian);
    const double base = std::max(hessian.diagonal().maxCoeff(), 1e-12);

    bool accepted = false;
    double candidate_intercept = x.intercept;
    double candidate_smooth = smooth;
    double candidate_full = full;
    for (double damping = 1e-8; damping <= 1e8 && !accepted; damping *= 100.0) {
      MatX damped = hessian;
      damped.diagonal().array() += damping * base;
      const VecX d = solve_prox_model(damped, gradient, x.beta, weights, lambda, slopes_free && !screened);
      if (d.cwiseAbs().maxCoeff() == 0.0) break;
      for (double t = 1.0; t >= 1e-6; t *= 0.5) {
        candidate_intercept = x.intercept + t * d(0);
        candidate_beta = x.beta + t * d.tail(dim - 1);
        candidate_smooth = evaluate_rows(problem, candidate_intercept, candidate_beta, config.tau, nullptr, nullptr);
        candidate_full = candidate_smooth + penalty(candidate_beta, weights, lambda);
        // Strict decrease only: equal values mean a plateau of the
        // interpolant, where drifting would leave the knot range.
        if (candidate_full < full) {
          accepted = true;
          break;
        }
      }
    }
    ++result.iterations;
    if (!accepted) {
      // Let the gradient method try a single step from here.
      NodeFitConfig single = config;
      single.max_iterations = 1;
      Iterate probe = x;
      NodeFitResult scratch;
      run_proximal_gradient(problem, single, weights, slopes_free && !screened, probe, scratch);
      const double probe_full = evaluate(problem, probe.intercept, probe.beta, config.tau, nullptr) +
                                penalty(probe.beta, weights, lambda);
      if (!(probe_full < full)) {
        result.converged = true;
        return;
      }
      candidate_intercept = probe.intercept;
      candidate_beta = probe.beta;
      candidate_full = probe_full;
    }
    const double change = std::max(std::abs(candidate_intercept - x.intercept),
                                   x.beta.size() ? (candidate_beta - x.beta).cwiseAbs().maxCoeff() : 0.0);
    x.intercept = candidate_intercept;
    x.beta = candidate_beta;
    full = candidate_full;
    if (config.record_trace) result.objective_trace.push_back(full);
    smooth = evaluate_rows(problem, x.intercept, x.beta, config.tau, &residual, &factor);
    if (change < config.tolerance) {
      result.converged = true;
      return;
    }
  }
  result.converged = false;
}

void run_solver(const NodeProblem& problem, const NodeFitConfig& config, const VecX& weights, bool slopes_free,
                Iterate& x, NodeFitResult& result) {
  if (config.solver == NodeSolver::gauss_newton) {
    run_gauss_newton(problem, config, weights, slopes_free, x, result);
  } else {
    run_proximal_gradient(problem, config, weights, slopes_free, x, result);
  }
}

NodeFitResult finish(const NodeProblem& problem, const NodeFitConfig& config, const VecX& weights, const Iterate& x,
                     NodeFitResult result) {
  result.intercept = x.intercept;
  result.beta = x.beta;
  result.objective = smooth_objective(problem, x.intercept, x.beta, config.tau) + penalty(x.beta, weights, config.lambda);
  result.active_set.clear();
  for (Index c = 0; c < x.beta.size(); ++c) {
    if (std::abs(x.beta(c)) > config.active_tolerance) result.active_set.push_back(c);
  }
  if (!std::isfinite(result.objective)) throw NumericalError("mid-quantile objective is not finite");
  return result;
}

Iterate intercept_only_start(const NodeProblem& problem, const NodeFitConfig& config, const VecX& weights,
                             NodeFitResult& result) {
  Iterate x{cold_start_intercept(problem, config.tau), VecX::Zero(problem.dimension())};
  run_solver(problem, config, weights, false, x, result);
  return x;
}

}  // namespace

double smooth_objective(const NodeProblem& problem, double intercept, const Eigen::Ref<const VecX>& beta, double tau) {
  return evaluate(problem, intercept, beta, tau, nullptr);
}

double objective(const NodeProblem& problem, double intercept, const Eigen::Ref<const VecX>& beta,
                 const NodeFitConfig& config) {
  check_config(config, problem.dimension());
  return evaluate(problem, intercept, beta, config.tau, nullptr) +
         penalty(beta, weights_or_ones(config, problem.dimension()), config.lambda);
}

VecX smooth_gradient(const NodeProblem& problem, double intercept, const Eigen::Ref<const VecX>& beta, double tau) {
  VecX gradient;
  evaluate(problem, intercept, beta, tau, &gradient);
  return gradient;
}

double cold_start_intercept(const NodeProblem& problem, double tau) {
  std::vector<double> sample(problem.response.data(), problem.response.data() + problem.response.size());
  double q = marginal_mid_quantile(std::move(sample), tau);
  switch (problem.link) {
    case Link::identity: break;
    case Link::log: {
      if (q <= 0.0) {
        double floor = 1e-3;
        for (double z : problem.thresholds) {
          if (z > 0.0) {
            floor = 0.5 * z;
            break;
          }
        }
        q = floor;
      }
      break;
    }
    case Link::logit: q = std::clamp(q, 0.01, 0.99); break;
  }
  return link_apply(problem.link, q);
}

double lambda_max(const NodeProblem& problem, const NodeFitConfig& config) {
  check_config(config, problem.dimension());
  const VecX weights = weights_or_ones(config, problem.dimension());
  NodeFitResult scratch;
  const Iterate x = intercept_only_start(problem, config, weights, scratch);
  const VecX gradient = smooth_gradient(problem, x.intercept, x.beta, config.tau);
  double out = 0.0;
  for (Index c = 0; c < problem.dimension(); ++c) {
    if (weights(c) > 0.0) out = std::max(out, std::abs(gradient(c + 1)) / weights(c));
  }
  return out;
}

NodeFitResult fit_node_quantile(const NodeProblem& problem, const NodeFitConfig& config,
                                const std::optional<NodeFitResult>& init) {
  check_config(config, problem.dimension());
  const VecX weights = weights_or_ones(config, problem.dimension());
  NodeFitResult result;
  Iterate x;
  if (init) {
    if (init->beta.size() != problem.dimension()) throw std::invalid_argument("warm start has the wrong dimension");
    x = Iterate{init->intercept, init->beta};
  } else {
    x = intercept_only_start(problem, config, weights, result);
  }
  result.converged = false;
  run_solver(problem, config, weights, true, x, result);
  return finish(problem, config, weights, x, std::move(result));
}

std::vector<NodeFitResult> fit_lambda_path(const NodeProblem& problem, const std::vector<double>& lambdas,
                                           const NodeFitConfig& config) {
  for (std::size_t m = 1; m < lambdas.size(); ++m) {
    if (!(lambdas[m] < lambdas[m - 1])) throw std::invalid_argument("lambda grid must be strictly decreasing");
  }
  std::vector<NodeFitResult> path;
  path.reserve(lambdas.size());
  NodeFitConfig local = config;
  for (std::size_t m = 0; m < lambdas.size(); ++m) {
    local.lambda = lambdas[m];
    if (m == 0) {
      path.push_back(fit_node_quantile(problem, local));
    } else {
      path.push_back(fit_node_quantile(problem, local, path.back()));
    }
  }
  return path;
}

}  // namespace qmgm
