#pragma once

#include <vector>

#include "qmgm/graph.hpp"

namespace qmgm {

struct CentralityReport {
  std::vector<int> degree;
  std::vector<double> betweenness;
  std::vector<double> closeness;
};

// Unweighted: breadth-first shortest paths. Weighted: Dijkstra with edge
// length 1/strength. Betweenness is unnormalized (each unordered pair counted
// once); closeness is (r - 1) / (sum of distances to the r - 1 reachable
// nodes), and 0 for isolated nodes.
CentralityReport centrality(const EstimatedGraph& graph, bool weighted = false);

// Fraction of unordered node pairs whose edge indicators differ.
double hamming_distance(const BoolMat& a, const BoolMat& b);
double hamming_distance(const EstimatedGraph& a, const EstimatedGraph& b);

}  // namespace qmgm
