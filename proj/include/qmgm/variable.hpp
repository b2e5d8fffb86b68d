#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmgm/types.hpp"

namespace qmgm {

enum class VariableKind { continuous, count, binary };
enum class Link { identity, log, logit };

std::string_view to_string(VariableKind kind);
std::string_view to_string(Link link);
VariableKind parse_kind(std::string_view text);
Link parse_link(std::string_view text);

Link default_link(VariableKind kind);

struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::continuous;
  Link link = Link::identity;
  // Ordered thresholds z_1 < ... < z_k used by the conditional CDF fits.
  std::vector<double> threshold_grid;
  std::optional<std::vector<double>> support_hint;
  // Free-form grouping tag, used only for export colouring.
  std::string domain;

  static VariableSpec make(std::string name, VariableKind kind);
};

// Throws DataError when the spec breaks a kind/link/grid invariant.
void check_invariants(const VariableSpec& spec);

// Link function g and its inverse. The inverse clamps its argument so that
// exp() never overflows.
double link_apply(Link link, double mu);
double link_inverse(Link link, double linear_predictor);
double link_inverse_derivative(Link link, double linear_predictor);

}  // namespace qmgm
