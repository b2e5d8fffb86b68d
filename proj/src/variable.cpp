#include "qmgm/variable.hpp"

#include <algorithm>
#include <cmath>

#include "qmgm/logistic.hpp"

namespace qmgm {

std::string_view to_string(VariableKind kind) {
  switch (kind) {
    case VariableKind::continuous: return "continuous";
    case VariableKind::count: return "count";
    case VariableKind::binary: return "binary";
  }
  return "?";
}

std::string_view to_string(Link link) {
  switch (link) {
    case Link::identity: return "identity";
    case Link::log: return "log";
    case Link::logit: return "logit";
  }
  return "?";
}

VariableKind parse_kind(std::string_view text) {
  if (text == "continuous") return VariableKind::continuous;
  if (text == "count") return VariableKind::count;
  if (text == "binary") return VariableKind::binary;
  throw DataError("unknown variable kind '" + std::string(text) + "'");
}

Link parse_link(std::string_view text) {
  if (text == "identity") return Link::identity;
  if (text == "log") return Link::log;
  if (text == "logit") return Link::logit;
  throw DataError("unknown link '" + std::string(text) + "'");
}

Link default_link(VariableKind kind) {
  switch (kind) {
    case VariableKind::continuous: return Link::identity;
    case VariableKind::count: return Link::log;
    case VariableKind::binary: return Link::logit;
  }
  return Link::identity;
}

VariableSpec VariableSpec::make(std::string name, VariableKind kind) {
  VariableSpec spec;
  spec.name = std::move(name);
  spec.kind = kind;
  spec.link = default_link(kind);
  return spec;
}

void check_invariants(const VariableSpec& spec) {
  const auto& grid = spec.threshold_grid;
  for (std::size_t h = 1; h < grid.size(); ++h) {
    if (!(grid[h] > grid[h - 1])) {
      throw DataError("threshold grid of '" + spec.name + "' is not strictly increasing");
    }
  }
  if (spec.kind == VariableKind::binary) {
    if (spec.link != Link::logit) {
      throw DataError("binary variable '" + spec.name + "' requires the logit link");
    }
    for (double z : grid) {
      if (z != 0.0 && z != 1.0) throw DataError("binary variable '" + spec.name + "' has a threshold outside {0,1}");
    }
  }
  if (spec.kind == VariableKind::count) {
    for (double z : grid) {
      if (z < 0.0) throw DataError("count variable '" + spec.name + "' has a negative threshold");
    }
  }
}

namespace {
constexpr double kMaxExponent = 700.0;
}

double link_apply(Link link, double mu) {
  switch (link) {
    case Link::identity: return mu;
    case Link::log: return std::log(mu);
    case Link::logit: return std::log(mu) - std::log1p(-mu);
  }
  return mu;
}

double link_inverse(Link link, double linear_predictor) {
  switch (link) {
    case Link::identity: return linear_predictor;
    case Link::log: return std::exp(std::min(linear_predictor, kMaxExponent));
    case Link::logit: return logistic(linear_predictor);
  }
  return linear_predictor;
}

double link_inverse_derivative(Link link, double linear_predictor) {
  switch (link) {
    case Link::identity: return 1.0;
    case Link::log: return std::exp(std::min(linear_predictor, kMaxExponent));
    case Link::logit: {
      const double s = logistic(linear_predictor);
      return s * (1.0 - s);
    }
  }
  return 1.0;
}

}  // namespace qmgm
