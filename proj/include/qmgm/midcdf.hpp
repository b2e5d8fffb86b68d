#pragma once

#include <algorithm>
#include <vector>

#include "qmgm/dataset.hpp"
#include "qmgm/logistic.hpp"
#include "qmgm/types.hpp"

namespace qmgm {

struct ThresholdFitDiagnostics {
  int iterations = 0;
  bool converged = true;
  // P(Y <= z) = 1 identically; no regression was fitted.
  bool constant_one = false;
};

// One logistic model of 1{Y_j <= z_h} on the other columns per threshold.
struct ThresholdLogitSet {
  Index node = 0;
  std::vector<double> thresholds;
  MatX coefficients;  // k x p: intercept then p-1 slopes, one row per threshold
  std::vector<ThresholdFitDiagnostics> diagnostics;

  int threshold_count() const { return static_cast<int>(thresholds.size()); }
  int flagged_count() const;
};

// Conditional CDF, point masses and mid-CDF values at every threshold for a
// single covariate vector.
struct MidCdfAtPoint {
  std::vector<double> pi;
  std::vector<double> cdf;
  std::vector<double> mass;
};

ThresholdLogitSet fit_threshold_logits(const Dataset& data, Index node, const LogisticOptions& options = {});

// Increasing rearrangement of a sequence (sorting).
template <typename Derived>
void rearrange_monotone_inplace(Eigen::DenseBase<Derived>& values) {
  std::sort(values.derived().data(), values.derived().data() + values.size());
}
std::vector<double> rearrange_monotone(std::vector<double> values);

MidCdfAtPoint conditional_mid_cdf(const ThresholdLogitSet& logits, const Eigen::Ref<const VecX>& covariates);

enum class Extrapolation {
  // Outside [z_1, z_k] the interpolant is held at pi_1 / pi_k.
  constant,
  // Boundary segment slope continued, output clamped to [1e-6, 1 - 1e-6].
  linear,
};

struct InterpolantValue {
  double value = 0.0;
  double slope = 0.0;  // right-hand derivative in eta
};

// Piecewise-linear interpolant through (z_h, pi_h). At a knot the slope of
// the segment to its right is reported.
InterpolantValue evaluate_interpolant(const double* thresholds, const double* pi, int k, double eta,
                                      Extrapolation mode);

double interpolate_midcdf(const MidCdfAtPoint& point, const std::vector<double>& thresholds, double eta,
                          Extrapolation mode = Extrapolation::constant);

// Parzen marginal mid-quantile: linear interpolation of (pi_h, z_h), held at
// the extreme distinct values outside [pi_1, pi_k].
double marginal_mid_quantile(std::vector<double> sample, double tau);

// Empirical marginal mid-CDF values at the distinct sample points.
struct MarginalMidCdf {
  std::vector<double> support;
  std::vector<double> pi;
};
MarginalMidCdf marginal_mid_cdf(std::vector<double> sample);

// Step-one output for a node: the logits plus the mid-CDF values evaluated
// at every training row (row-major n x k).
struct NodeMidCdf {
  ThresholdLogitSet logits;
  RowMatX pi;
};

NodeMidCdf estimate_node_midcdf(const Dataset& data, Index node, const LogisticOptions& options = {});

}  // namespace qmgm
