#include "qmgm/midcdf.hpp"

#include <algorithm>
#include <cmath>

namespace qmgm {

int ThresholdLogitSet::flagged_count() const {
  int count = 0;
  for (const auto& d : diagnostics) count += (!d.constant_one && !d.converged) ? 1 : 0;
  return count;
}

ThresholdLogitSet fit_threshold_logits(const Dataset& data, Index node, const LogisticOptions& options) {
  require_complete(data);
  const auto& spec = data.schema.at(static_cast<std::size_t>(node));
  if (spec.threshold_grid.size() < 2) {
    throw DataError("node '" + spec.name + "' needs at least two thresholds");
  }
  const VecX y = data.values.col(node);
  const MatX x = covariates_without(data.values, node);

  ThresholdLogitSet set;
  set.node = node;
  set.thresholds = spec.threshold_grid;
  const auto k = static_cast<Index>(set.thresholds.size());
  set.coefficients = MatX::Zero(k, data.cols());
  set.diagnostics.resize(static_cast<std::size_t>(k));

  VecX labels(y.size());
  for (Index h = 0; h < k; ++h) {
    const double z = set.thresholds[static_cast<std::size_t>(h)];
    labels = (y.array() <= z).cast<double>();
    const double positives = labels.sum();
    auto& diag = set.diagnostics[static_cast<std::size_t>(h)];
    if (positives == static_cast<double>(y.size())) {
      diag.constant_one = true;
      continue;
    }
    if (positives == 0.0) {
      throw DataError("threshold below every observation of '" + spec.name + "'");
    }
    const LogisticFit fit = fit_logistic(x, labels, options);
    set.coefficients.row(h) = fit.coefficients.transpose();
    diag.iterations = fit.iterations;
    diag.converged = fit.converged;
  }
  return set;
}

std::vector<double> rearrange_monotone(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return values;
}

namespace {

// cdf (sorted in place) -> mass, pi
void mid_cdf_from_cdf(double* cdf, double* pi, double* mass, Index k) {
  std::sort(cdf, cdf + k);
  double previous = 0.0;
  for (Index h = 0; h < k; ++h) {
    const double m = cdf[h] - previous;
    if (mass != nullptr) mass[h] = m;
    pi[h] = cdf[h] - 0.5 * m;
    previous = cdf[h];
  }
}

}  // namespace

MidCdfAtPoint conditional_mid_cdf(const ThresholdLogitSet& logits, const Eigen::Ref<const VecX>& covariates) {
  const Index k = logits.threshold_count();
  MidCdfAtPoint out;
  out.cdf.resize(static_cast<std::size_t>(k));
  out.pi.resize(static_cast<std::size_t>(k));
  out.mass.resize(static_cast<std::size_t>(k));
  for (Index h = 0; h < k; ++h) {
    if (logits.diagnostics[static_cast<std::size_t>(h)].constant_one) {
      out.cdf[static_cast<std::size_t>(h)] = 1.0;
      continue;
    }
    const auto row = logits.coefficients.row(h);
    const double eta = row(0) + row.tail(row.size() - 1).dot(covariates.transpose());
    out.cdf[static_cast<std::size_t>(h)] = logistic(eta);
  }
  mid_cdf_from_cdf(out.cdf.data(), out.pi.data(), out.mass.data(), k);
  return out;
}

InterpolantValue evaluate_interpolant(const double* z, const double* pi, int k, double eta, Extrapolation mode) {
  constexpr double kClamp = 1e-6;
  if (k == 1) return {pi[0], 0.0};
  if (eta < z[0]) {
    if (mode == Extrapolation::constant) return {pi[0], 0.0};
    const double b = (pi[1] - pi[0]) / (z[1] - z[0]);
    const double v = pi[0] + b * (eta - z[0]);
    if (v <= kClamp) return {kClamp, 0.0};
    return {std::min(v, 1.0 - kClamp), b};
  }
  if (eta >= z[k - 1]) {
    if (mode == Extrapolation::constant) return {pi[k - 1], 0.0};
    const double b = (pi[k - 1] - pi[k - 2]) / (z[k - 1] - z[k - 2]);
    const double v = pi[k - 1] + b * (eta - z[k - 1]);
    if (v >= 1.0 - kClamp) return {1.0 - kClamp, 0.0};
    return {std::max(v, kClamp), b};
  }
  // z[h] <= eta < z[h+1]
  const int h = static_cast<int>(std::upper_bound(z, z + k, eta) - z) - 1;
  const double b = (pi[h + 1] - pi[h]) / (z[h + 1] - z[h]);
  return {pi[h] + b * (eta - z[h]), b};
}

double interpolate_midcdf(const MidCdfAtPoint& point, const std::vector<double>& thresholds, double eta,
                          Extrapolation mode) {
  if (point.pi.size() != thresholds.size() || thresholds.empty()) {
    throw std::invalid_argument("thresholds and mid-CDF values are misaligned");
  }
  return evaluate_interpolant(thresholds.data(), point.pi.data(), static_cast<int>(thresholds.size()), eta, mode).value;
}

MarginalMidCdf marginal_mid_cdf(std::vector<double> sample) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::sort(sample.begin(), sample.end());
  MarginalMidCdf out;
  const double n = static_cast<double>(sample.size());
  std::size_t i = 0;
  std::size_t below = 0;
  while (i < sample.size()) {
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    const double mass = static_cast<double>(j - i) / n;
    const double cdf = static_cast<double>(below + (j - i)) / n;
    out.support.push_back(sample[i]);
    out.pi.push_back(cdf - 0.5 * mass);
    below += j - i;
    i = j;
  }
  return out;
}

double marginal_mid_quantile(std::vector<double> sample, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau outside (0,1)");
  const MarginalMidCdf g = marginal_mid_cdf(std::move(sample));
  const std::size_t k = g.support.size();
  if (tau <= g.pi.front()) return g.support.front();
  if (tau >= g.pi.back()) return g.support.back();
  const std::size_t h = static_cast<std::size_t>(std::upper_bound(g.pi.begin(), g.pi.end(), tau) - g.pi.begin()) - 1;
  if (h + 1 >= k) return g.support.back();
  const double w = (tau - g.pi[h]) / (g.pi[h + 1] - g.pi[h]);
  return g.support[h] + w * (g.support[h + 1] - g.support[h]);
}

NodeMidCdf estimate_node_midcdf(const Dataset& data, Index node, const LogisticOptions& options) {
  NodeMidCdf out;
  out.logits = fit_threshold_logits(data, node, options);
  const auto& set = out.logits;
  const Index n = data.rows();
  const Index k = set.threshold_count();
  const MatX x = covariates_without(data.values, node);

  // n x k linear predictors
  MatX eta = (x * set.coefficients.rightCols(x.cols()).transpose()).rowwise() +
             set.coefficients.col(0).transpose();
  RowMatX cdf(n, k);
  for (Index i = 0; i < n; ++i) {
    for (Index h = 0; h < k; ++h) {
      cdf(i, h) = set.diagnostics[static_cast<std::size_t>(h)].constant_one ? 1.0 : logistic(eta(i, h));
    }
  }
  out.pi.resize(n, k);
  for (Index i = 0; i < n; ++i) {
    mid_cdf_from_cdf(cdf.row(i).data(), out.pi.row(i).data(), nullptr, k);
  }
  return out;
}

}  // namespace qmgm
