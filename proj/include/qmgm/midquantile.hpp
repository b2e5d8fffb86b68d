#pragma once

#include <optional>
#include <vector>

#include "qmgm/dataset.hpp"
#include "qmgm/midcdf.hpp"
#include "qmgm/types.hpp"
#include "qmgm/variable.hpp"

namespace qmgm {

// Everything the penalized mid-quantile objective needs for one node:
// response-side interpolation data and the covariate matrix.
struct NodeProblem {
  Index node = 0;
  Link link = Link::identity;
  Extrapolation extrapolation = Extrapolation::constant;
  MatX covariates;                 // n x (p-1)
  std::vector<double> thresholds;  // z_1 < ... < z_k
  RowMatX pi;                      // n x k mid-CDF values per row
  VecX response;                   // observed y_j (for initialization)

  Index rows() const { return covariates.rows(); }
  Index dimension() const { return covariates.cols(); }
};

NodeProblem make_node_problem(const Dataset& data, const NodeMidCdf& midcdf,
                              Extrapolation extrapolation = Extrapolation::constant);

// gradient: proximal gradient with halving backtracking.
// gauss_newton: proximal steps on the J'J curvature model of the squared
// residuals, with a gradient step as fallback.
enum class NodeSolver { gauss_newton, gradient };

struct NodeFitConfig {
  double tau = 0.5;
  double lambda = 0.0;
  VecX weights;  // empty means all ones
  int max_iterations = 500;
  double initial_step = 1.0;
  double min_step = 1e-14;
  double max_step = 1e6;
  double tolerance = 1e-7;
  double active_tolerance = 1e-6;
  bool record_trace = false;
  NodeSolver solver = NodeSolver::gauss_newton;
};

void check_config(const NodeFitConfig& config, Index dimension);

struct NodeFitResult {
  double intercept = 0.0;
  VecX beta;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<Index> active_set;
  std::vector<double> objective_trace;  // only when record_trace is set
};

// (1/n) sum_i (tau - Gc(eta_i | row i))^2 + lambda * sum_k w_k |beta_k|.
double objective(const NodeProblem& problem, double intercept, const Eigen::Ref<const VecX>& beta,
                 const NodeFitConfig& config);
double smooth_objective(const NodeProblem& problem, double intercept, const Eigen::Ref<const VecX>& beta,
                        double tau);

// Gradient of the smooth term w.r.t. (intercept, beta), length p.
VecX smooth_gradient(const NodeProblem& problem, double intercept, const Eigen::Ref<const VecX>& beta,
                     double tau);

// g(marginal mid-quantile of y_j at tau), pulled inside the link's domain.
double cold_start_intercept(const NodeProblem& problem, double tau);

// Smallest lambda for which the zero-slope model is a fixed point.
double lambda_max(const NodeProblem& problem, const NodeFitConfig& config);

NodeFitResult fit_node_quantile(const NodeProblem& problem, const NodeFitConfig& config,
                                const std::optional<NodeFitResult>& init = std::nullopt);

// Warm-started fits along a strictly decreasing lambda grid.
std::vector<NodeFitResult> fit_lambda_path(const NodeProblem& problem, const std::vector<double>& lambdas,
                                           const NodeFitConfig& config);

}  // namespace qmgm
