#pragma once

#include <string>
#include <vector>

#include "qmgm/types.hpp"

namespace qmgm {

enum class EdgeSign { absent, positive, negative, undefined };

const char* to_string(EdgeSign sign);
EdgeSign parse_edge_sign(const std::string& text);

// Which quantile level and regression direction produced an edge's strength.
// `from_node` is the node whose regression carried the maximal coefficient.
struct EdgeProvenance {
  int level = -1;
  int from_node = -1;
};

// Undirected graph with per-edge strength/sign. All matrices are p x p and
// kept symmetric; the diagonal is never an edge.
class EstimatedGraph {
 public:
  EstimatedGraph() = default;
  explicit EstimatedGraph(Index p);

  Index size() const { return adjacency_.rows(); }
  bool has_edge(Index a, Index b) const { return adjacency_(a, b); }
  double strength(Index a, Index b) const { return strength_(a, b); }
  EdgeSign sign(Index a, Index b) const { return sign_[flat(a, b)]; }
  const EdgeProvenance& provenance(Index a, Index b) const { return provenance_[flat(a, b)]; }
  Index edge_count() const;

  const BoolMat& adjacency() const { return adjacency_; }
  const MatX& strengths() const { return strength_; }

  // Strength must be > 0 and sign must not be `absent`.
  void set_edge(Index a, Index b, double strength, EdgeSign sign, EdgeProvenance provenance = {});
  void clear_edge(Index a, Index b);

  static EstimatedGraph from_adjacency(const BoolMat& adjacency);

 private:
  std::size_t flat(Index a, Index b) const { return static_cast<std::size_t>(a * adjacency_.rows() + b); }

  BoolMat adjacency_;
  MatX strength_;
  std::vector<EdgeSign> sign_;
  std::vector<EdgeProvenance> provenance_;
};

bool operator==(const EstimatedGraph& a, const EstimatedGraph& b);

}  // namespace qmgm
