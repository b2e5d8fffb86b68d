#pragma once

#include <vector>

#include "qmgm/coefficient_cube.hpp"
#include "qmgm/dataset.hpp"
#include "qmgm/graph.hpp"
#include "qmgm/midcdf.hpp"
#include "qmgm/midquantile.hpp"
#include "qmgm/quantile_grid.hpp"

namespace qmgm {

struct SelectionCriterion {
  enum class Kind { aic, bic };
  Kind kind = Kind::bic;
  double cn = 1.0;

  static SelectionCriterion aic() { return {Kind::aic, 1.0}; }
  static SelectionCriterion bic(double cn = 1.0);
  // Presets with C_n = log(p-1) / divisor (BICp, BIC2p, BIC3p).
  static SelectionCriterion bic_p(Index p, double divisor = 1.0);
  // Accepts aic, bic, bicp, bic2p, bic3p.
  static SelectionCriterion parse(const std::string& name, Index p);
};

// Whether the quantile-loss residuals use the linear predictor as printed
// (y - b0 - x'b) or the response scale (y - g^{-1}(b0 + x'b)).
enum class ResidualScale { linear_predictor, response };

struct QmgmOptions {
  VecX weights;  // empty means all ones
  int max_iterations = 500;
  double tolerance = 1e-7;
  double active_tolerance = 1e-6;
  Extrapolation extrapolation = Extrapolation::constant;
  NodeSolver solver = NodeSolver::gauss_newton;
  LogisticOptions logistic;
  int threads = 1;
};

// Step one for every node.
std::vector<NodeMidCdf> estimate_midcdfs(const Dataset& data, const QmgmOptions& options = {});

CoefficientCube fit_qmgm(const Dataset& data, const QuantileGrid& grid, const std::vector<double>& lambdas,
                         const QmgmOptions& options = {});
// Same, reusing precomputed step-one models.
CoefficientCube fit_qmgm(const Dataset& data, const std::vector<NodeMidCdf>& midcdfs, const QuantileGrid& grid,
                         const std::vector<double>& lambdas, const QmgmOptions& options = {});

// OR-rule edge set at lambda index m: an edge iff the largest |beta| over
// levels and both directions exceeds `tolerance`.
EstimatedGraph estimate_edge_set(const CoefficientCube& cube, int lambda_index, double tolerance = 1e-6);

struct ScoreOptions {
  ResidualScale residual_scale = ResidualScale::linear_predictor;
  double active_tolerance = 1e-6;
  double log_guard = 1e-12;
};

// Per-(node, level) loss blocks at lambda index m: quantile-loss sums for a
// mid-quantile cube, GLM deviances for a glm cube. Returned as p x L.
MatX block_losses(const CoefficientCube& cube, int lambda_index, const Dataset& data, const ScoreOptions& options = {});
// Number of active slopes per (node, level), p x L.
Eigen::ArrayXXi active_counts(const CoefficientCube& cube, int lambda_index, double tolerance);

double information_score(const CoefficientCube& cube, int lambda_index, const Dataset& data,
                         const SelectionCriterion& criterion, const ScoreOptions& options = {});
double bic_score(const CoefficientCube& cube, int lambda_index, const Dataset& data,
                 const SelectionCriterion& criterion, const ScoreOptions& options = {});
double aic_score(const CoefficientCube& cube, int lambda_index, const Dataset& data,
                 const ScoreOptions& options = {});

// Index of the minimum score; ties go to the larger lambda.
int select_lambda(const std::vector<double>& scores, const std::vector<double>& lambdas);

struct Selection {
  int lambda_index = 0;
  double lambda = 0.0;
  std::vector<double> scores;
  EstimatedGraph graph;
};

Selection select_graph(const CoefficientCube& cube, const Dataset& data, const SelectionCriterion& criterion,
                       double edge_tolerance = 1e-6, const ScoreOptions& options = {});

}  // namespace qmgm
