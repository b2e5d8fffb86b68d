#pragma once

#include <cmath>

#include "qmgm/types.hpp"

namespace qmgm {

struct LogisticOptions {
  int max_iterations = 100;
  double tolerance = 1e-8;
  // Added to the slope diagonal of X'WX; keeps separated fits finite.
  double ridge = 1e-6;
};

struct LogisticFit {
  VecX coefficients;  // intercept first
  int iterations = 0;
  bool converged = false;
};

// Logistic regression of binary `labels` on `covariates` (intercept added)
// by iteratively reweighted least squares.
LogisticFit fit_logistic(const MatX& covariates, const Eigen::Ref<const VecX>& labels,
                         const LogisticOptions& options = {});

inline double logistic(double x) {
  if (x >= 0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace qmgm
