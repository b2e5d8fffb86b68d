#pragma once

#include <cstdint>

#include "qmgm/dataset.hpp"
#include "qmgm/graph.hpp"

namespace qmgm {

enum class DgpKind {
  // Ten-node mixed graph: five continuous, five count nodes, 12 edges.
  main,
  // As `main` with Y7 and Y10 replaced by Bernoulli nodes.
  binary,
  // Six mutually independent columns (three continuous, three counts).
  null,
};

const char* to_string(DgpKind kind);
DgpKind parse_dgp_kind(const std::string& text);

struct DgpVariant {
  DgpKind kind = DgpKind::main;
  Index n = 500;
  std::uint64_t seed = 1;
};

struct SyntheticSample {
  Dataset data;  // raw scale, not standardized
  BoolMat truth;
};

SyntheticSample generate_sample(const DgpVariant& variant);

// Adjacency of the generating structure (empty for the null variant).
BoolMat true_graph(DgpKind kind);

// Inverse CDFs by direct CDF search.
long poisson_quantile(double u, double rate);
int bernoulli_quantile(double u, double probability);

}  // namespace qmgm
