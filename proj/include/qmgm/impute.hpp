#pragma once

#include "qmgm/dataset.hpp"

namespace qmgm {

inline constexpr int kDefaultImputeNeighbours = 13;

// Gower distance between two rows over the columns observed in both:
// range-normalized absolute difference for numeric columns, mismatch for
// binary ones. `ranges` holds each column's observed range.
double gower_distance(const Dataset& data, Index a, Index b, const VecX& ranges);

// Replaces each missing cell by the median of that column over the k nearest
// complete rows (ties in distance broken by row index). An even binary split
// resolves to the column's mode over all complete rows; a count median
// falling between two integers rounds half up. Throws with fewer than k
// complete rows.
Dataset knn_impute(const Dataset& data, int k = kDefaultImputeNeighbours);

}  // namespace qmgm
