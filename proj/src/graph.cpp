#include "qmgm/graph.hpp"

namespace qmgm {

const char* to_string(EdgeSign sign) {
  switch (sign) {
    case EdgeSign::absent: return "absent";
    case EdgeSign::positive: return "positive";
    case EdgeSign::negative: return "negative";
    case EdgeSign::undefined: return "undefined";
  }
  return "?";
}

EdgeSign parse_edge_sign(const std::string& text) {
  if (text == "positive") return EdgeSign::positive;
  if (text == "negative") return EdgeSign::negative;
  if (text == "undefined") return EdgeSign::undefined;
  if (text == "absent") return EdgeSign::absent;
  throw DataError("unknown edge sign '" + text + "'");
}

EstimatedGraph::EstimatedGraph(Index p)
    : adjacency_(BoolMat::Constant(p, p, false)),
      strength_(MatX::Zero(p, p)),
      sign_(static_cast<std::size_t>(p * p), EdgeSign::absent),
      provenance_(static_cast<std::size_t>(p * p)) {}

Index EstimatedGraph::edge_count() const {
  Index count = 0;
  for (Index a = 0; a < size(); ++a) {
    for (Index b = a + 1; b < size(); ++b) count += adjacency_(a, b) ? 1 : 0;
  }
  return count;
}

void EstimatedGraph::set_edge(Index a, Index b, double strength, EdgeSign sign, EdgeProvenance provenance) {
  if (a == b) throw std::invalid_argument("self loops are not allowed");
  if (!(strength > 0.0) || sign == EdgeSign::absent) throw std::invalid_argument("edge needs positive strength and a sign");
  adjacency_(a, b) = adjacency_(b, a) = true;
  strength_(a, b) = strength_(b, a) = strength;
  sign_[flat(a, b)] = sign_[flat(b, a)] = sign;
  provenance_[flat(a, b)] = provenance_[flat(b, a)] = provenance;
}

void EstimatedGraph::clear_edge(Index a, Index b) {
  adjacency_(a, b) = adjacency_(b, a) = false;
  strength_(a, b) = strength_(b, a) = 0.0;
  sign_[flat(a, b)] = sign_[flat(b, a)] = EdgeSign::absent;
  provenance_[flat(a, b)] = provenance_[flat(b, a)] = EdgeProvenance{};
}

EstimatedGraph EstimatedGraph::from_adjacency(const BoolMat& adjacency) {
  EstimatedGraph graph(adjacency.rows());
  for (Index a = 0; a < adjacency.rows(); ++a) {
    for (Index b = a + 1; b < adjacency.cols(); ++b) {
      if (adjacency(a, b) || adjacency(b, a)) graph.set_edge(a, b, 1.0, EdgeSign::positive);
    }
  }
  return graph;
}

bool operator==(const EstimatedGraph& a, const EstimatedGraph& b) {
  if (a.size() != b.size()) return false;
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < a.size(); ++j) {
      if (a.has_edge(i, j) != b.has_edge(i, j) || a.strength(i, j) != b.strength(i, j) || a.sign(i, j) != b.sign(i, j)) {
        return false;
      }
      const auto& pa = a.provenance(i, j);
      const auto& pb = b.provenance(i, j);
      if (pa.level != pb.level || pa.from_node != pb.from_node) return false;
    }
  }
  return true;
}

}  // namespace qmgm
