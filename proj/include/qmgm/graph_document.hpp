#pragma once

#include <string>
#include <vector>

#include "qmgm/graph.hpp"
#include "qmgm/variable.hpp"

namespace qmgm {

struct DocumentNode {
  std::string name;
  std::string kind;
  std::string domain;
};

struct DocumentEdge {
  int source = 0;
  int target = 0;
  double strength = 0.0;
  EdgeSign sign = EdgeSign::positive;
  int level = -1;      // index into tau_levels, -1 if unknown
  int from_node = -1;  // regression that attained the strength
};

struct FitMetadata {
  std::string learner;
  std::vector<double> tau_levels;
  double lambda = 0.0;
  std::string criterion;
  double cn = 0.0;
  double edge_tolerance = 1e-6;
};

struct GraphDocument {
  static constexpr int kVersion = 1;
  std::vector<DocumentNode> nodes;
  std::vector<DocumentEdge> edges;  // source < target, sorted
  FitMetadata metadata;

  EstimatedGraph graph() const;
};

bool operator==(const GraphDocument& a, const GraphDocument& b);

GraphDocument make_document(const EstimatedGraph& graph, const std::vector<VariableSpec>& schema,
                            FitMetadata metadata = {});

std::string to_json(const GraphDocument& doc);
GraphDocument graph_document_from_json(const std::string& text);

// Graphviz output: node shape by kind, fill colour by domain, edge pen width
// proportional to strength and colour by sign (green, red, grey).
std::string to_dot(const GraphDocument& doc);

enum class ExportFormat { json_doc, dot };
void export_graph(const GraphDocument& doc, ExportFormat format, const std::string& path);

}  // namespace qmgm
