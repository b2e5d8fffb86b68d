#pragma once

#include <vector>

namespace qmgm {

// Strictly increasing quantile levels inside (0,1).
class QuantileGrid {
 public:
  explicit QuantileGrid(std::vector<double> levels);

  // The equally spaced grids used in the benchmark: L = 1 (median),
  // 3 (quartiles), 7 (octiles), 17 (0.10, 0.15, ..., 0.90).
  static QuantileGrid standard(int count);
  // The L = 9 deciles 0.1, ..., 0.9.
  static QuantileGrid deciles();

  const std::vector<double>& levels() const { return levels_; }
  int size() const { return static_cast<int>(levels_.size()); }
  double operator[](int l) const { return levels_[static_cast<std::size_t>(l)]; }

 private:
  std::vector<double> levels_;
};

// exp of `count` equispaced points between log(max) and log(min), returned
// in decreasing order.
std::vector<double> log_lambda_grid(double lambda_min, double lambda_max, int count);

}  // namespace qmgm
