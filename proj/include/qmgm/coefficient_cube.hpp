#pragma once

#include <vector>

#include "qmgm/types.hpp"

namespace qmgm {

enum class CubeModel { mid_quantile, glm };

struct FitMeta {
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Coefficients indexed by (node j, level l, lambda index m). For a glm cube
// the level axis has a single pseudo-level.
class CoefficientCube {
 public:
  CoefficientCube() = default;
  CoefficientCube(Index p, std::vector<double> levels, std::vector<double> lambdas, CubeModel model);

  Index nodes() const { return p_; }
  int level_count() const { return static_cast<int>(levels_.size()); }
  int lambda_count() const { return static_cast<int>(lambdas_.size()); }
  const std::vector<double>& levels() const { return levels_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  CubeModel model() const { return model_; }

  double& intercept(Index j, int l, int m) { return intercepts_[slot(j, l, m)]; }
  double intercept(Index j, int l, int m) const { return intercepts_[slot(j, l, m)]; }
  auto beta(Index j, int l, int m) { return betas_.col(static_cast<Index>(slot(j, l, m))); }
  auto beta(Index j, int l, int m) const { return betas_.col(static_cast<Index>(slot(j, l, m))); }
  FitMeta& meta(Index j, int l, int m) { return meta_[slot(j, l, m)]; }
  const FitMeta& meta(Index j, int l, int m) const { return meta_[slot(j, l, m)]; }

  // Cube restricted to the given level indices (used to share one fit across
  // nested quantile grids).
  CoefficientCube select_levels(const std::vector<int>& level_indices) const;

  int nonconverged_count() const;

 private:
  std::size_t slot(Index j, int l, int m) const {
    return static_cast<std::size_t>((j * level_count() + l) * lambda_count() + m);
  }

  Index p_ = 0;
  std::vector<double> levels_;
  std::vector<double> lambdas_;
  CubeModel model_ = CubeModel::mid_quantile;
  std::vector<double> intercepts_;
  MatX betas_;
  std::vector<FitMeta> meta_;
};

}  // namespace qmgm
