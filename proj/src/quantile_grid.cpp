#include "qmgm/quantile_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qmgm {

QuantileGrid::QuantileGrid(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw std::invalid_argument("quantile grid is empty");
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    if (!(levels_[l] > 0.0 && levels_[l] < 1.0)) {
      throw std::invalid_argument("quantile level " + std::to_string(levels_[l]) + " outside (0,1)");
    }
    if (l > 0 && !(levels_[l] > levels_[l - 1])) {
      throw std::invalid_argument("quantile levels must be strictly increasing");
    }
  }
}

QuantileGrid QuantileGrid::standard(int count) {
  switch (count) {
    case 1: return QuantileGrid({0.5});
    case 3: return QuantileGrid({0.25, 0.5, 0.75});
    case 7: {
      std::vector<double> levels;
      for (int l = 1; l <= 7; ++l) levels.push_back(l / 8.0);
      return QuantileGrid(std::move(levels));
    }
    case 17: {
      std::vector<double> levels;
      for (int l = 0; l < 17; ++l) levels.push_back((10 + 5 * l) / 100.0);
      return QuantileGrid(std::move(levels));
    }
    default: break;
  }
  throw std::invalid_argument("no standard quantile grid with " + std::to_string(count) + " levels");
}

QuantileGrid QuantileGrid::deciles() {
  std::vector<double> levels;
  for (int l = 1; l <= 9; ++l) levels.push_back(l / 10.0);
  return QuantileGrid(std::move(levels));
}

std::vector<double> log_lambda_grid(double lambda_min, double lambda_max, int count) {
  if (!(lambda_min > 0.0) || !(lambda_max >= lambda_min) || count < 1) {
    throw std::invalid_argument("invalid lambda grid specification");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = lambda_max;
    return grid;
  }
  const double hi = std::log(lambda_max);
  const double lo = std::log(lambda_min);
  for (int m = 0; m < count; ++m) {
    grid[static_cast<std::size_t>(m)] = std::exp(hi + (lo - hi) * m / (count - 1));
  }
  grid.front() = lambda_max;
  grid.back() = lambda_min;
  return grid;
}

}  // namespace qmgm
