#include "qmgm/coefficient_cube.hpp"

namespace qmgm {

CoefficientCube::CoefficientCube(Index p, std::vector<double> levels, std::vector<double> lambdas, CubeModel model)
    : p_(p), levels_(std::move(levels)), lambdas_(std::move(lambdas)), model_(model) {
  const auto slots = static_cast<std::size_t>(p_) * levels_.size() * lambdas_.size();
  intercepts_.assign(slots, 0.0);
  betas_ = MatX::Zero(p_ - 1, static_cast<Index>(slots));
  meta_.assign(slots, FitMeta{});
}

CoefficientCube CoefficientCube::select_levels(const std::vector<int>& level_indices) const {
  std::vector<double> levels;
  for (int l : level_indices) levels.push_back(levels_.at(static_cast<std::size_t>(l)));
  CoefficientCube out(p_, std::move(levels), lambdas_, model_);
  for (Index j = 0; j < p_; ++j) {
    for (std::size_t t = 0; t < level_indices.size(); ++t) {
      const int l = level_indices[t];
      for (int m = 0; m < lambda_count(); ++m) {
        out.intercept(j, static_cast<int>(t), m) = intercept(j, l, m);
        out.beta(j, static_cast<int>(t), m) = beta(j, l, m);
        out.meta(j, static_cast<int>(t), m) = meta(j, l, m);
      }
    }
  }
  return out;
}

int CoefficientCube::nonconverged_count() const {
  int count = 0;
  for (const auto& m : meta_) count += m.converged ? 0 : 1;
  return count;
}

}  // namespace qmgm
