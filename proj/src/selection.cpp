#include "qmgm/selection.hpp"

#include <algorithm>
#include <cmath>

#include "qmgm/mgm.hpp"
#include "qmgm/midquantile.hpp"
#include "qmgm/parallel.hpp"
#include "qmgm/quantile_loss.hpp"

namespace qmgm {

SelectionCriterion SelectionCriterion::bic(double cn) {
  if (!(cn > 0.0)) throw std::invalid_argument("BIC constant C_n must be positive");
  return {Kind::bic, cn};
}

SelectionCriterion SelectionCriterion::bic_p(Index p, double divisor) {
  if (p < 3) throw std::invalid_argument("log(p-1) presets need p >= 3");
  return bic(std::log(static_cast<double>(p - 1)) / divisor);
}

SelectionCriterion SelectionCriterion::parse(const std::string& name, Index p) {
  if (name == "aic") return aic();
  if (name == "bic") return bic(1.0);
  if (name == "bicp") return bic_p(p, 1.0);
  if (name == "bic2p") return bic_p(p, 2.0);
  if (name == "bic3p") return bic_p(p, 3.0);
  throw std::invalid_argument("unknown criterion '" + name + "'");
}

std::vector<NodeMidCdf> estimate_midcdfs(const Dataset& data, const QmgmOptions& options) {
  require_complete(data);
  std::vector<NodeMidCdf> out(static_cast<std::size_t>(data.cols()));
  parallel_for(static_cast<int>(data.cols()), options.threads, [&](int j) {
    out[static_cast<std::size_t>(j)] = estimate_node_midcdf(data, j, options.logistic);
  });
  return out;
}

CoefficientCube fit_qmgm(const Dataset& data, const QuantileGrid& grid, const std::vector<double>& lambdas,
                         const QmgmOptions& options) {
  return fit_qmgm(data, estimate_midcdfs(data, options), grid, lambdas, options);
}

CoefficientCube fit_qmgm(const Dataset& data, const std::vector<NodeMidCdf>& midcdfs, const QuantileGrid& grid,
                         const std::vector<double>& lambdas, const QmgmOptions& options) {
  require_complete(data);
  const Index p = data.cols();
  if (static_cast<Index>(midcdfs.size()) != p) throw std::invalid_argument("one mid-CDF model per node is required");
  CoefficientCube cube(p, grid.levels(), lambdas, CubeModel::mid_quantile);
  const int L = grid.size();

  parallel_for(static_cast<int>(p) * L, options.threads, [&](int task) {
    const Index j = task / L;
    const int l = task % L;
    const NodeProblem problem = make_node_problem(data, midcdfs[static_cast<std::size_t>(j)], options.extrapolation);
    NodeFitConfig config;
    config.tau = grid[l];
    config.weights = options.weights;
    config.max_iterations = options.max_iterations;
    config.tolerance = options.tolerance;
    config.active_tolerance = options.active_tolerance;
    config.solver = options.solver;
    const auto path = fit_lambda_path(problem, lambdas, config);
    for (int m = 0; m < static_cast<int>(path.size()); ++m) {
      const auto& fit = path[static_cast<std::size_t>(m)];
      cube.intercept(j, l, m) = fit.intercept;
      cube.beta(j, l, m) = fit.beta;
      cube.meta(j, l, m) = FitMeta{fit.objective, fit.iterations, fit.converged};
    }
  });
  return cube;
}

EstimatedGraph estimate_edge_set(const CoefficientCube& cube, int lambda_index, double tolerance) {
  const Index p = cube.nodes();
  EstimatedGraph graph(p);
  for (Index j = 0; j < p; ++j) {
    for (Index k = j + 1; k < p; ++k) {
      // Largest |coefficient| per direction and where it was attained.
      double best[2] = {0.0, 0.0};
      double value[2] = {0.0, 0.0};
      int level[2] = {-1, -1};
      const Index from[2] = {j, k};
      const Index to[2] = {k, j};
      for (int dir = 0; dir < 2; ++dir) {
        for (int l = 0; l < cube.level_count(); ++l) {
          const double b = cube.beta(from[dir], l, lambda_index)(covariate_position(from[dir], to[dir]));
          if (std::abs(b) > best[dir]) {
            best[dir] = std::abs(b);
            value[dir] = b;
            level[dir] = l;
          }
        }
      }
      const int winner = best[1] > best[0] ? 1 : 0;
      if (!(best[winner] > tolerance)) continue;
      EdgeSign sign = value[winner] > 0 ? EdgeSign::positive : EdgeSign::negative;
      if (best[0] > tolerance && best[1] > tolerance && (value[0] > 0) != (value[1] > 0)) sign = EdgeSign::undefined;
      graph.set_edge(j, k, best[winner], sign, EdgeProvenance{level[winner], static_cast<int>(from[winner])});
    }
  }
  return graph;
}

MatX block_losses(const CoefficientCube& cube, int lambda_index, const Dataset& data, const ScoreOptions& options) {
  const Index p = cube.nodes();
  if (data.cols() != p) throw std::invalid_argument("cube and dataset disagree on p");
  MatX losses(p, cube.level_count());
  for (Index j = 0; j < p; ++j) {
    const MatX x = covariates_without(data.values, j);
    const VecX y = data.values.col(j);
    for (int l = 0; l < cube.level_count(); ++l) {
      VecX linear = x * cube.beta(j, l, lambda_index);
      linear.array() += cube.intercept(j, l, lambda_index);
      if (cube.model() == CubeModel::glm) {
        losses(j, l) = glm_deviance(family_for(data.schema[static_cast<std::size_t>(j)].kind), y, linear);
        continue;
      }
      const double tau = cube.levels()[static_cast<std::size_t>(l)];
      const Link link = data.schema[static_cast<std::size_t>(j)].link;
      double sum = 0.0;
      for (Index i = 0; i < y.size(); ++i) {
        const double fitted =
            options.residual_scale == ResidualScale::response ? link_inverse(link, linear(i)) : linear(i);
        sum += quantile_loss(y(i) - fitted, tau);
      }
      losses(j, l) = sum;
    }
  }
  return losses;
}

Eigen::ArrayXXi active_counts(const CoefficientCube& cube, int lambda_index, double tolerance) {
  Eigen::ArrayXXi counts(cube.nodes(), cube.level_count());
  for (Index j = 0; j < cube.nodes(); ++j) {
    for (int l = 0; l < cube.level_count(); ++l) {
      counts(j, l) = static_cast<int>((cube.beta(j, l, lambda_index).array().abs() > tolerance).count());
    }
  }
  return counts;
}

double information_score(const CoefficientCube& cube, int lambda_index, const Dataset& data,
                         const SelectionCriterion& criterion, const ScoreOptions& options) {
  const double n = static_cast<double>(data.rows());
  const double p = static_cast<double>(data.cols());
  const double per_coefficient = criterion.kind == SelectionCriterion::Kind::aic
                                     ? 2.0 / (2.0 * n)
                                     : std::log(n) * std::log(p - 1.0) / (2.0 * n) * criterion.cn;
  const MatX losses = block_losses(cube, lambda_index, data, options);
  const Eigen::ArrayXXi nu = active_counts(cube, lambda_index, options.active_tolerance);
  double score = 0.0;
  for (Index j = 0; j < losses.rows(); ++j) {
    for (Index l = 0; l < losses.cols(); ++l) {
      score += std::log(losses(j, l) + options.log_guard) + nu(j, l) * per_coefficient;
    }
  }
  return score;
}

double bic_score(const CoefficientCube& cube, int lambda_index, const Dataset& data,
                 const SelectionCriterion& criterion, const ScoreOptions& options) {
  if (criterion.kind != SelectionCriterion::Kind::bic) throw std::invalid_argument("bic_score needs a BIC criterion");
  return information_score(cube, lambda_index, data, criterion, options);
}

double aic_score(const CoefficientCube& cube, int lambda_index, const Dataset& data, const ScoreOptions& options) {
  return information_score(cube, lambda_index, data, SelectionCriterion::aic(), options);
}

int select_lambda(const std::vector<double>& scores, const std::vector<double>& lambdas) {
  if (scores.empty() || scores.size() != lambdas.size()) throw std::invalid_argument("scores and lambdas must align");
  std::size_t best = 0;
  for (std::size_t m = 1; m < scores.size(); ++m) {
    if (scores[m] < scores[best] || (scores[m] == scores[best] && lambdas[m] > lambdas[best])) best = m;
  }
  return static_cast<int>(best);
}

Selection select_graph(const CoefficientCube& cube, const Dataset& data, const SelectionCriterion& criterion,
                       double edge_tolerance, const ScoreOptions& options) {
  Selection out;
  out.scores.resize(static_cast<std::size_t>(cube.lambda_count()));
  for (int m = 0; m < cube.lambda_count(); ++m) {
    out.scores[static_cast<std::size_t>(m)] = information_score(cube, m, data, criterion, options);
  }
  out.lambda_index = select_lambda(out.scores, cube.lambdas());
  out.lambda = cube.lambdas()[static_cast<std::size_t>(out.lambda_index)];
  out.graph = estimate_edge_set(cube, out.lambda_index, edge_tolerance);
  return out;
}

}  // namespace qmgm
