#include "qmgm/dgp.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace qmgm {

const char* to_string(DgpKind kind) {
  switch (kind) {
    case DgpKind::main: return "main";
    case DgpKind::binary: return "binary";
    case DgpKind::null: return "null";
  }
  return "?";
}

DgpKind parse_dgp_kind(const std::string& text) {
  if (text == "main") return DgpKind::main;
  if (text == "binary") return DgpKind::binary;
  if (text == "null") return DgpKind::null;
  throw std::invalid_argument("unknown variant '" + text + "'");
}

long poisson_quantile(double u, double rate) {
  if (!(rate > 0.0)) return 0;
  const double log_rate = std::log(rate);
  double cdf = 0.0;
  for (long k = 0;; ++k) {
    cdf += std::exp(-rate + static_cast<double>(k) * log_rate - std::lgamma(static_cast<double>(k) + 1.0));
    if (cdf >= u) return k;
    // Past the bulk the remaining mass is below double resolution.
    if (static_cast<double>(k) > rate + 50.0 * std::sqrt(rate) + 50.0) return k;
  }
}

int bernoulli_quantile(double u, double probability) { return u <= 1.0 - probability ? 0 : 1; }

namespace {

// Uniform draws built directly on the engine output so samples do not depend
// on the standard library's distribution implementations.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  // Open interval (0,1).
  double open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  // Discrete uniform on {a, ..., b}.
  int discrete(int a, int b) {
    const auto width = static_cast<std::uint64_t>(b - a + 1);
    return a + static_cast<int>(engine_() % width);
  }

 private:
  std::mt19937_64 engine_;
};

double t3_quantile(double u) {
  static const boost::math::students_t dist(3.0);
  return boost::math::quantile(dist, u);
}

double gamma_quantile(double u, double shape, double rate) {
  const boost::math::gamma_distribution<> dist(shape, 1.0 / rate);
  return boost::math::quantile(dist, u);
}

double normal_quantile(double u, double sd) {
  if (!(sd > 0.0)) return 0.0;
  const boost::math::normal dist(0.0, sd);
  return boost::math::quantile(dist, u);
}

std::vector<VariableSpec> schema_for(DgpKind kind) {
  std::vector<VariableSpec> schema;
  if (kind == DgpKind::null) {
    for (int c = 1; c <= 6; ++c) {
      schema.push_back(VariableSpec::make("Y" + std::to_string(c), c <= 3 ? VariableKind::continuous : VariableKind::count));
    }
    return schema;
  }
  for (int c = 1; c <= 10; ++c) {
    VariableKind vk = c <= 5 ? VariableKind::continuous : VariableKind::count;
    if (kind == DgpKind::binary && (c == 7 || c == 10)) vk = VariableKind::binary;
    schema.push_back(VariableSpec::make("Y" + std::to_string(c), vk));
  }
  return schema;
}

}  // namespace

BoolMat true_graph(DgpKind kind) {
  if (kind == DgpKind::null) return BoolMat::Constant(6, 6, false);
  BoolMat truth = BoolMat::Constant(10, 10, false);
  // child <- parents, 1-based as in the generating formulas
  const int edges[12][2] = {{2, 1}, {3, 1}, {4, 3}, {5, 1}, {6, 1}, {7, 3},
                            {7, 5}, {8, 7}, {8, 2}, {8, 5}, {9, 8}, {10, 9}};
  for (const auto& e : edges) {
    truth(e[0] - 1, e[1] - 1) = truth(e[1] - 1, e[0] - 1) = true;
  }
  return truth;
}

SyntheticSample generate_sample(const DgpVariant& variant) {
  if (variant.n < 10) throw std::invalid_argument("synthetic samples need n >= 10");
  UniformSource rng(variant.seed);
  const Index n = variant.n;
  const bool binary = variant.kind == DgpKind::binary;

  if (variant.kind == DgpKind::null) {
    MatX values(n, 6);
    for (Index i = 0; i < n; ++i) {
      values(i, 0) = normal_quantile(rng.open(), 1.0);
      values(i, 1) = t3_quantile(rng.open());
      values(i, 2) = gamma_quantile(rng.open(), 2.0, 1.0);
      values(i, 3) = static_cast<double>(poisson_quantile(rng.open(), 2.0));
      values(i, 4) = static_cast<double>(poisson_quantile(rng.open(), 5.0));
      values(i, 5) = static_cast<double>(rng.discrete(1, 3) + poisson_quantile(rng.open(), 1.0));
    }
    return {make_dataset(std::move(values), schema_for(variant.kind)), true_graph(variant.kind)};
  }

  constexpr double kMaxRate = 1e6;
  MatX values(n, 10);
  for (Index i = 0; i < n; ++i) {
    double u[11];
    for (int c = 1; c <= 10; ++c) u[c] = rng.open();
    const int du8 = rng.discrete(1, 3);
    const int du6 = rng.discrete(1, 3);
    const int du9 = rng.discrete(1, 5);

    const double y1 = t3_quantile(u[1]);
    const double y2 = -0.5 * u[2] * u[2] * (y1 + 3.0);
    const double sigma3 = std::abs(y1) + 0.1;
    const double y3 = y1 + gamma_quantile(u[3], sigma3, 2.0);
    const double sigma4 = std::sqrt(std::abs(y3 + 5.0));
    const double y4 = 0.1 * (y3 + 5.0) * (y3 + 5.0) * normal_quantile(u[4], sigma4);
    const double sigma5 = 0.1 + 0.1 * std::abs(y1);
    const double y5 = 2.0 * std::cos(std::numbers::pi * y1 / 4.0) * (u[5] - 0.5) * (y1 + 2.0) +
                      normal_quantile(u[5], sigma5);
    const double y6 = std::floor((u[6] + 0.5) * std::abs(y1)) + du6;

    const double inv_root3 = std::pow(std::abs(y3 + 5.0), -0.5);
    const double log5 = std::abs(std::log(std::abs(y5) + 1.0));
    double y7 = 0.0;
    if (binary) {
      y7 = bernoulli_quantile(u[7], 1.0 / (1.0 + std::exp(-2.0 - inv_root3 + log5)));
    } else {
      y7 = static_cast<double>(poisson_quantile(u[7], std::min(inv_root3 + log5, kMaxRate)));
    }
    const double y8 = std::floor(u[8] * y7 + std::pow(std::abs(y2 + 0.5), 1.3)) +
                      du8 * std::floor(1.0 + std::abs(y5));
    const double y9 = std::floor(1.0 + u[9] * y8) + du9;
    const double log9 = std::log(std::abs(y9 + 0.1));
    double y10 = 0.0;
    if (binary) {
      y10 = bernoulli_quantile(u[10], 1.0 / (1.0 + std::exp(-3.0 - 0.8 * u[10] * log9)));
    } else {
      y10 = static_cast<double>(poisson_quantile(u[10], std::exp(0.8 * u[10] * log9)));
    }
    const double row[10] = {y1, y2, y3, y4, y5, y6, y7, y8, y9, y10};
    for (int c = 0; c < 10; ++c) values(i, c) = row[c];
  }
  return {make_dataset(std::move(values), schema_for(variant.kind)), true_graph(variant.kind)};
}

}  // namespace qmgm
