#pragma once

#include <vector>

#include "qmgm/coefficient_cube.hpp"
#include "qmgm/dataset.hpp"
#include "qmgm/types.hpp"

namespace qmgm {

enum class GlmFamily { gaussian, binomial, poisson };

GlmFamily family_for(VariableKind kind);
const char* to_string(GlmFamily family);

struct GlmOptions {
  int max_outer_iterations = 100;
  int max_sweeps = 1000;
  double tolerance = 1e-7;
  bool record_trace = false;
};

struct GlmFit {
  double intercept = 0.0;
  VecX beta;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // penalized objective after each sweep / outer step
};

// Penalized negative mean log-likelihood (gaussian: half mean squared error)
// plus lambda * ||beta||_1.
double glm_objective(const MatX& x, const Eigen::Ref<const VecX>& y, GlmFamily family, double intercept,
                     const Eigen::Ref<const VecX>& beta, double lambda);

double glm_lambda_max(const MatX& x, const Eigen::Ref<const VecX>& y, GlmFamily family);

GlmFit fit_glm_lasso(const MatX& x, const Eigen::Ref<const VecX>& y, GlmFamily family, double lambda,
                     const GlmOptions& options = {}, const GlmFit* warm = nullptr);

std::vector<GlmFit> fit_glm_lasso_path(const MatX& x, const Eigen::Ref<const VecX>& y, GlmFamily family,
                                       const std::vector<double>& lambdas, const GlmOptions& options = {});

// Family deviance of a fitted linear predictor.
double glm_deviance(GlmFamily family, const Eigen::Ref<const VecX>& y, const Eigen::Ref<const VecX>& linear_predictor);
double glm_deviance(const GlmFit& fit, GlmFamily family, const MatX& x, const Eigen::Ref<const VecX>& y);

// Per-node LASSO GLM paths stored as a single-level cube.
CoefficientCube fit_mgm(const Dataset& data, const std::vector<double>& lambdas, const GlmOptions& options = {},
                        int threads = 1);

}  // namespace qmgm
