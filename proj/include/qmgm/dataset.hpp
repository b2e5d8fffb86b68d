#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmgm/types.hpp"
#include "qmgm/variable.hpp"

namespace qmgm {

struct ColumnScaling {
  double center = 0.0;
  double scale = 1.0;
};

// Column-major n x p table. Missing cells are flagged in `missing`; their
// value slot holds NaN.
struct Dataset {
  MatX values;
  std::vector<VariableSpec> schema;
  BoolMat missing;
  std::vector<std::optional<ColumnScaling>> standardization;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
  bool has_missing() const { return missing.size() > 0 && missing.any(); }
  Index column_index(const std::string& name) const;
};

inline constexpr int kMaxThresholds = 100;

// Builds a Dataset from values + schema with an all-false mask.
Dataset make_dataset(MatX values, std::vector<VariableSpec> schema);

// Centers/scales continuous columns, leaves discrete ones untouched and
// derives every threshold grid from the observed values.
Dataset validate_and_standardize(const Dataset& raw, int max_thresholds = kMaxThresholds);

// Distinct observed values, or max_thresholds order statistics at equally
// spaced empirical percentiles when there are more.
std::vector<double> threshold_grid_from(const Eigen::Ref<const VecX>& column, int max_thresholds = kMaxThresholds);

// Throws DataError if any cell is missing; fitting code calls this first.
void require_complete(const Dataset& data);

// n x (p-1) matrix of every column except `node`.
MatX covariates_without(const MatX& values, Index node);

// Maps a position in the (p-1)-vector beta_j back to a node index.
inline Index covariate_node(Index node, Index position) { return position < node ? position : position + 1; }
inline Index covariate_position(Index node, Index other) { return other < node ? other : other - 1; }

}  // namespace qmgm
