#include "qmgm/impute.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace qmgm {

double gower_distance(const Dataset& data, Index a, Index b, const VecX& ranges) {
  const bool masked = data.missing.size() > 0;
  double total = 0.0;
  int used = 0;
  for (Index c = 0; c < data.cols(); ++c) {
    if (masked && (data.missing(a, c) || data.missing(b, c))) continue;
    const double x = data.values(a, c);
    const double y = data.values(b, c);
    if (data.schema[static_cast<std::size_t>(c)].kind == VariableKind::binary) {
      total += x != y ? 1.0 : 0.0;
    } else if (ranges(c) > 0.0) {
      total += std::abs(x - y) / ranges(c);
    }
    ++used;
  }
  return used == 0 ? 1.0 : total / used;
}

namespace {

double column_mode(const Dataset& data, const std::vector<Index>& rows, Index c) {
  int ones = 0;
  for (Index r : rows) ones += data.values(r, c) == 1.0 ? 1 : 0;
  return 2 * ones > static_cast<int>(rows.size()) ? 1.0 : 0.0;
}

}  // namespace

Dataset knn_impute(const Dataset& data, int k) {
  if (k < 1) throw DataError("imputation needs k >= 1");
  if (!data.has_missing()) return data;

  const Index n = data.rows();
  const Index p = data.cols();
  VecX ranges(p);
  for (Index c = 0; c < p; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Index i = 0; i < n; ++i) {
      if (data.missing(i, c)) continue;
      lo = std::min(lo, data.values(i, c));
      hi = std::max(hi, data.values(i, c));
    }
    if (!(hi >= lo)) throw DataError("column '" + data.schema[static_cast<std::size_t>(c)].name + "' has no observed values");
    ranges(c) = hi - lo;
  }

  std::vector<Index> complete;
  for (Index i = 0; i < n; ++i) {
    if (!data.missing.row(i).any()) complete.push_back(i);
  }
  if (complete.size() < static_cast<std::size_t>(k)) {
    throw DataError("imputation needs at least " + std::to_string(k) + " complete rows, found " +
                    std::to_string(complete.size()));
  }

  Dataset out = data;
  std::vector<std::pair<double, Index>> order(complete.size());
  std::vector<double> pool;
  for (Index i = 0; i < n; ++i) {
    if (!data.missing.row(i).any()) continue;
    for (std::size_t r = 0; r < complete.size(); ++r) {
      order[r] = {gower_distance(data, i, complete[r], ranges), complete[r]};
    }
    const auto take = static_cast<std::size_t>(k);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end());

    for (Index c = 0; c < p; ++c) {
      if (!data.missing(i, c)) continue;
      pool.clear();
      for (std::size_t r = 0; r < take; ++r) pool.push_back(data.values(order[r].second, c));
      std::sort(pool.begin(), pool.end());
      const std::size_t m = pool.size();
      double value = m % 2 == 1 ? pool[m / 2] : 0.5 * (pool[m / 2 - 1] + pool[m / 2]);
      const auto kind = data.schema[static_cast<std::size_t>(c)].kind;
      if (kind == VariableKind::binary && value == 0.5) {
        value = column_mode(data, complete, c);
      } else if (kind == VariableKind::count) {
        value = std::floor(value + 0.5);
      }
      out.values(i, c) = value;
      out.missing(i, c) = false;
    }
  }
  return out;
}

}  // namespace qmgm
