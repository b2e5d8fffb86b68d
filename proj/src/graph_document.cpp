#include "qmgm/graph_document.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "qmgm/csv_io.hpp"

namespace qmgm {

using nlohmann::json;

EstimatedGraph GraphDocument::graph() const {
  const auto p = static_cast<Index>(nodes.size());
  EstimatedGraph g(p);
  for (const auto& e : edges) {
    if (e.source < 0 || e.target < 0 || e.source >= p || e.target >= p || e.source == e.target) {
      throw DataError("graph document edge " + std::to_string(e.source) + "-" + std::to_string(e.target) +
                      " is out of range");
    }
    g.set_edge(e.source, e.target, e.strength, e.sign, {e.level, e.from_node});
  }
  return g;
}

namespace {

auto edge_tuple(const DocumentEdge& e) {
  return std::tie(e.source, e.target, e.strength, e.sign, e.level, e.from_node);
}

auto node_tuple(const DocumentNode& n) { return std::tie(n.name, n.kind, n.domain); }

auto meta_tuple(const FitMetadata& m) {
  return std::tie(m.learner, m.tau_levels, m.lambda, m.criterion, m.cn, m.edge_tolerance);
}

}  // namespace

bool operator==(const GraphDocument& a, const GraphDocument& b) {
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    if (node_tuple(a.nodes[i]) != node_tuple(b.nodes[i])) return false;
  }
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    if (edge_tuple(a.edges[i]) != edge_tuple(b.edges[i])) return false;
  }
  return meta_tuple(a.metadata) == meta_tuple(b.metadata);
}

GraphDocument make_document(const EstimatedGraph& graph, const std::vector<VariableSpec>& schema,
                            FitMetadata metadata) {
  if (static_cast<Index>(schema.size()) != graph.size()) {
    throw DataError("schema has " + std::to_string(schema.size()) + " columns but the graph has " +
                    std::to_string(graph.size()) + " nodes");
  }
  GraphDocument doc;
  for (const auto& spec : schema) doc.nodes.push_back({spec.name, std::string(to_string(spec.kind)), spec.domain});
  for (Index a = 0; a < graph.size(); ++a) {
    for (Index b = a + 1; b < graph.size(); ++b) {
      if (!graph.has_edge(a, b)) continue;
      const auto& prov = graph.provenance(a, b);
      doc.edges.push_back({static_cast<int>(a), static_cast<int>(b), graph.strength(a, b), graph.sign(a, b),
                           prov.level, prov.from_node});
    }
  }
  doc.metadata = std::move(metadata);
  return doc;
}

std::string to_json(const GraphDocument& doc) {
  json j;
  j["version"] = GraphDocument::kVersion;
  j["nodes"] = json::array();
  for (const auto& n : doc.nodes) j["nodes"].push_back({{"name", n.name}, {"kind", n.kind}, {"domain", n.domain}});
  j["edges"] = json::array();
  for (const auto& e : doc.edges) {
    j["edges"].push_back({{"source", e.source},
                          {"target", e.target},
                          {"strength", e.strength},
                          {"sign", to_string(e.sign)},
                          {"level", e.level},
                          {"from_node", e.from_node}});
  }
  const auto& m = doc.metadata;
  j["metadata"] = {{"learner", m.learner},       {"tau_levels", m.tau_levels}, {"lambda", m.lambda},
                   {"criterion", m.criterion},   {"cn", m.cn},                 {"edge_tolerance", m.edge_tolerance}};
  return j.dump(2) + "\n";
}

GraphDocument graph_document_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("graph document is not valid JSON: ") + e.what());
  }
  try {
    const int version = j.at("version").get<int>();
    if (version != GraphDocument::kVersion) {
      throw DataError("unsupported graph document version " + std::to_string(version));
    }
    GraphDocument doc;
    for (const auto& n : j.at("nodes")) {
      doc.nodes.push_back({n.at("name").get<std::string>(), n.at("kind").get<std::string>(),
                           n.value("domain", std::string{})});
    }
    for (const auto& e : j.at("edges")) {
      DocumentEdge edge;
      edge.source = e.at("source").get<int>();
      edge.target = e.at("target").get<int>();
      edge.strength = e.at("strength").get<double>();
      edge.sign = parse_edge_sign(e.at("sign").get<std::string>());
      edge.level = e.value("level", -1);
      edge.from_node = e.value("from_node", -1);
      if (edge.source > edge.target) std::swap(edge.source, edge.target);
      doc.edges.push_back(edge);
    }
    std::sort(doc.edges.begin(), doc.edges.end(), [](const DocumentEdge& a, const DocumentEdge& b) {
      return std::tie(a.source, a.target) < std::tie(b.source, b.target);
    });
    const auto& m = j.at("metadata");
    doc.metadata.learner = m.value("learner", std::string{});
    doc.metadata.tau_levels = m.value("tau_levels", std::vector<double>{});
    doc.metadata.lambda = m.value("lambda", 0.0);
    doc.metadata.criterion = m.value("criterion", std::string{});
    doc.metadata.cn = m.value("cn", 0.0);
    doc.metadata.edge_tolerance = m.value("edge_tolerance", 1e-6);
    doc.graph();  // validates endpoints, strengths and signs
    return doc;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed graph document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed graph document: ") + e.what());
  }
}

namespace {

const char* sign_colour(EdgeSign sign) {
  switch (sign) {
    case EdgeSign::positive: return "green";
    case EdgeSign::negative: return "red";
    default: return "grey";
  }
}

const char* kind_shape(const std::string& kind) {
  if (kind == "count") return "box";
  if (kind == "binary") return "diamond";
  return "ellipse";
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string to_dot(const GraphDocument& doc) {
  static const char* palette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3",
                                  "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd"};
  std::vector<std::string> domains;
  double max_strength = 0.0;
  for (const auto& e : doc.edges) max_strength = std::max(max_strength, e.strength);

  std::ostringstream os;
  os << "graph qmgm {\n  node [style=filled];\n";
  for (std::size_t i = 0; i < doc.nodes.size(); ++i) {
    const auto& n = doc.nodes[i];
    std::string fill = "white";
    if (!n.domain.empty()) {
      auto it = std::find(domains.begin(), domains.end(), n.domain);
      if (it == domains.end()) it = domains.insert(domains.end(), n.domain);
      fill = palette[static_cast<std::size_t>(it - domains.begin()) % std::size(palette)];
    }
    os << "  n" << i << " [label=\"" << dot_escape(n.name) << "\", shape=" << kind_shape(n.kind)
       << ", fillcolor=\"" << fill << "\"];\n";
  }
  char width[32];
  for (const auto& e : doc.edges) {
    const double w = max_strength > 0.0 ? 0.5 + 4.5 * e.strength / max_strength : 1.0;
    std::snprintf(width, sizeof width, "%.3f", w);
    os << "  n" << e.source << " -- n" << e.target << " [color=" << sign_colour(e.sign) << ", penwidth=" << width
       << "];\n";
  }
  os << "}\n";
  return os.str();
}

void export_graph(const GraphDocument& doc, ExportFormat format, const std::string& path) {
  write_text_file(path, format == ExportFormat::dot ? to_dot(doc) : to_json(doc));
}

}  // namespace qmgm
