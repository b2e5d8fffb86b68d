#include "qmgm/centrality.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace qmgm {

// Brandes' accumulation over single-source shortest paths.
CentralityReport centrality(const EstimatedGraph& graph, bool weighted) {
  const Index p = graph.size();
  const auto np = static_cast<std::size_t>(p);
  CentralityReport report;
  report.degree.assign(np, 0);
  report.betweenness.assign(np, 0.0);
  report.closeness.assign(np, 0.0);

  std::vector<std::vector<std::pair<Index, double>>> adjacent(np);
  for (Index a = 0; a < p; ++a) {
    for (Index b = 0; b < p; ++b) {
      if (a == b || !graph.has_edge(a, b)) continue;
      adjacent[static_cast<std::size_t>(a)].push_back({b, weighted ? 1.0 / graph.strength(a, b) : 1.0});
      ++report.degree[static_cast<std::size_t>(a)];
    }
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double eps = 1e-12;
  std::vector<double> dist(np);
  std::vector<double> sigma(np);
  std::vector<double> delta(np);
  std::vector<std::vector<Index>> preds(np);
  std::vector<Index> stack;

  for (Index s = 0; s < p; ++s) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& v : preds) v.clear();
    stack.clear();
    dist[static_cast<std::size_t>(s)] = 0.0;
    sigma[static_cast<std::size_t>(s)] = 1.0;

    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.push({0.0, s});
    std::vector<bool> settled(np, false);
    while (!queue.empty()) {
      const auto [d, v] = queue.top();
      queue.pop();
      const auto uv = static_cast<std::size_t>(v);
      if (settled[uv]) continue;
      settled[uv] = true;
      stack.push_back(v);
      for (const auto& [w, len] : adjacent[uv]) {
        const auto uw = static_cast<std::size_t>(w);
        const double candidate = d + len;
        if (candidate < dist[uw] - eps) {
          dist[uw] = candidate;
          sigma[uw] = sigma[uv];
          preds[uw].assign(1, v);
          queue.push({candidate, w});
        } else if (std::abs(candidate - dist[uw]) <= eps && !settled[uw]) {
          sigma[uw] += sigma[uv];
          preds[uw].push_back(v);
        }
      }
    }

    double total = 0.0;
    int reached = 0;
    for (std::size_t v = 0; v < np; ++v) {
      if (static_cast<Index>(v) != s && dist[v] < inf) {
        total += dist[v];
        ++reached;
      }
    }
    report.closeness[static_cast<std::size_t>(s)] = reached > 0 ? reached / total : 0.0;

    while (!stack.empty()) {
      const Index w = stack.back();
      stack.pop_back();
      const auto uw = static_cast<std::size_t>(w);
      for (Index v : preds[uw]) {
        const auto uv = static_cast<std::size_t>(v);
        delta[uv] += sigma[uv] / sigma[uw] * (1.0 + delta[uw]);
      }
      if (w != s) report.betweenness[uw] += delta[uw];
    }
  }
  // Every unordered pair was visited from both ends.
  for (auto& b : report.betweenness) b *= 0.5;
  return report;
}

double hamming_distance(const BoolMat& a, const BoolMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw std::invalid_argument("hamming_distance: adjacency matrices must be square and the same size");
  }
  const Index p = a.rows();
  if (p < 2) return 0.0;
  Index differ = 0;
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) differ += a(i, j) != b(i, j) ? 1 : 0;
  }
  return static_cast<double>(differ) / static_cast<double>(p * (p - 1) / 2);
}

double hamming_distance(const EstimatedGraph& a, const EstimatedGraph& b) {
  return hamming_distance(a.adjacency(), b.adjacency());
}

}  // namespace qmgm
