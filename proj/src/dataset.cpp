#include "qmgm/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace qmgm {

Index Dataset::column_index(const std::string& name) const {
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (schema[c].name == name) return static_cast<Index>(c);
  }
  throw DataError("no column named '" + name + "'");
}

Dataset make_dataset(MatX values, std::vector<VariableSpec> schema) {
  Dataset data;
  data.missing = BoolMat::Constant(values.rows(), values.cols(), false);
  data.values = std::move(values);
  data.schema = std::move(schema);
  data.standardization.assign(data.schema.size(), std::nullopt);
  return data;
}

std::vector<double> threshold_grid_from(const Eigen::Ref<const VecX>& column, int max_thresholds) {
  std::vector<double> sorted(column.data(), column.data() + column.size());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (max_thresholds < 2 || static_cast<int>(distinct.size()) <= max_thresholds) return distinct;

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(max_thresholds));
  const double last = static_cast<double>(sorted.size() - 1);
  for (int h = 0; h < max_thresholds; ++h) {
    const auto pos = static_cast<std::size_t>(std::lround(last * h / (max_thresholds - 1)));
    grid.push_back(sorted[pos]);
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

namespace {

VecX observed(const Dataset& data, Index c) {
  VecX out(data.rows());
  Index m = 0;
  for (Index i = 0; i < data.rows(); ++i) {
    if (!data.missing(i, c)) out(m++) = data.values(i, c);
  }
  out.conservativeResize(m);
  return out;
}

}  // namespace

Dataset validate_and_standardize(const Dataset& raw, int max_thresholds) {
  const Index n = raw.rows();
  const Index p = raw.cols();
  if (n < 2 || p < 2) throw DataError("dataset needs at least 2 rows and 2 columns");
  if (static_cast<Index>(raw.schema.size()) != p) throw DataError("schema length does not match column count");

  Dataset out = raw;
  if (out.missing.rows() != n || out.missing.cols() != p) out.missing = BoolMat::Constant(n, p, false);
  if (out.standardization.size() != static_cast<std::size_t>(p)) out.standardization.assign(p, std::nullopt);

  for (Index c = 0; c < p; ++c) {
    auto& spec = out.schema[static_cast<std::size_t>(c)];
    const VecX column = observed(out, c);
    if (column.size() < 2) throw DataError("column '" + spec.name + "' has fewer than 2 observed values");
    for (Index i = 0; i < column.size(); ++i) {
      if (!std::isfinite(column(i))) throw DataError("column '" + spec.name + "' contains non-finite values");
    }
    if (column.maxCoeff() == column.minCoeff()) throw DataError("constant column '" + spec.name + "'");

    if (spec.kind == VariableKind::binary) {
      for (Index i = 0; i < column.size(); ++i) {
        if (column(i) != 0.0 && column(i) != 1.0) {
          throw DataError("binary column '" + spec.name + "' has values outside {0,1}");
        }
      }
    }
    if (spec.kind == VariableKind::count && column.minCoeff() < 0.0) {
      throw DataError("count column '" + spec.name + "' has negative values");
    }

    if (spec.kind == VariableKind::continuous) {
      const double mean = column.mean();
      const double sd = std::sqrt((column.array() - mean).square().sum() / static_cast<double>(column.size() - 1));
      for (Index i = 0; i < n; ++i) {
        if (!out.missing(i, c)) out.values(i, c) = (out.values(i, c) - mean) / sd;
      }
      auto& record = out.standardization[static_cast<std::size_t>(c)];
      if (record) {
        record->center += record->scale * mean;
        record->scale *= sd;
      } else {
        record = ColumnScaling{mean, sd};
      }
    }

    spec.threshold_grid = threshold_grid_from(observed(out, c), max_thresholds);
    if (spec.kind == VariableKind::binary) spec.threshold_grid = {0.0, 1.0};
    check_invariants(spec);
  }
  return out;
}

void require_complete(const Dataset& data) {
  if (data.has_missing()) throw DataError("dataset has missing values; impute before fitting");
}

MatX covariates_without(const MatX& values, Index node) {
  const Index p = values.cols();
  MatX out(values.rows(), p - 1);
  if (node > 0) out.leftCols(node) = values.leftCols(node);
  if (node < p - 1) out.rightCols(p - 1 - node) = values.rightCols(p - 1 - node);
  return out;
}

}  // namespace qmgm
