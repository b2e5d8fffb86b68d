#include <cmath>
#include <random>

#include "doctest.h"
#include "qmgm/dgp.hpp"
#include "qmgm/logistic.hpp"
#include "qmgm/mgm.hpp"
#include "qmgm/quantile_grid.hpp"
#include "qmgm/quantile_loss.hpp"
#include "qmgm/selection.hpp"

using namespace qmgm;

namespace {

// Gradient of the smooth part (mean negative log-likelihood, gaussian: half MSE).
VecX smooth_grad(const MatX& x, const VecX& y, GlmFamily family, double b0, const VecX& beta) {
  const Index n = x.rows();
  VecX eta = (x * beta).array() + b0;
  VecX mu = eta;
  if (family == GlmFamily::binomial) mu = eta.unaryExpr([](double e) { return 1.0 / (1.0 + std::exp(-e)); });
  if (family == GlmFamily::poisson) mu = eta.array().exp();
  const VecX r = (mu - y) / static_cast<double>(n);
  VecX g(beta.size() + 1);
  g(0) = r.sum();
  g.tail(beta.size()) = x.transpose() * r;
  return g;
}

void check_kkt(const MatX& x, const VecX& y, GlmFamily family, double lambda, const GlmFit& fit, double tol) {
  const VecX g = smooth_grad(x, y, family, fit.intercept, fit.beta);
  CHECK(std::abs(g(0)) < tol);
  for (Index k = 0; k < fit.beta.size(); ++k) {
    if (fit.beta(k) == 0.0) {
      CHECK(std::abs(g(k + 1)) <= lambda + tol);
    } else {
      CHECK(g(k + 1) == doctest::Approx(-lambda * (fit.beta(k) > 0 ? 1.0 : -1.0)).epsilon(tol / std::max(lambda, 1e-12)));
    }
  }
}

struct Problem {
  MatX x;
  VecX y;
};

Problem simulate(std::mt19937_64& rng, GlmFamily family, Index n, Index d) {
  std::normal_distribution<double> nrm;
  std::uniform_real_distribution<double> u;
  Problem pr{MatX(n, d), VecX(n)};
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < d; ++c) pr.x(i, c) = nrm(rng);
    const double eta = 0.2 + 0.6 * pr.x(i, 0) - 0.4 * pr.x(i, 1);
    if (family == GlmFamily::gaussian) pr.y(i) = eta + nrm(rng);
    if (family == GlmFamily::binomial) pr.y(i) = u(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
    if (family == GlmFamily::poisson) pr.y(i) = std::poisson_distribution<int>(std::exp(0.5 * eta))(rng);
  }
  return pr;
}

}  // namespace

TEST_SUITE("mgm") {

TEST_CASE("family follows the variable kind") {
  CHECK(family_for(VariableKind::continuous) == GlmFamily::gaussian);
  CHECK(family_for(VariableKind::binary) == GlmFamily::binomial);
  CHECK(family_for(VariableKind::count) == GlmFamily::poisson);
}

TEST_CASE("orthonormal gaussian design: soft-thresholded least squares") {
  // Columns of a Hadamard matrix: centered, orthogonal, X'X = n I.
  MatX h(8, 3);
  h << 1, 1, 1, -1, 1, 1, 1, -1, 1, -1, -1, 1, 1, 1, -1, -1, 1, -1, 1, -1, -1, -1, -1, -1;
  REQUIRE((h.transpose() * h - 8.0 * MatX::Identity(3, 3)).norm() < 1e-12);
  REQUIRE(h.colwise().sum().norm() < 1e-12);
  VecX y(8);
  y << 3.0, -1.0, 0.5, 2.0, 1.5, -0.5, 0.2, 1.0;
  const VecX ols = h.transpose() * y / 8.0;
  for (double lambda : {0.0, 0.1, 0.3, 0.6, 2.0}) {
    GlmOptions options;
    options.tolerance = 1e-12;
    const auto fit = fit_glm_lasso(h, y, GlmFamily::gaussian, lambda, options);
    CHECK(fit.intercept == doctest::Approx(y.mean()));
    for (Index k = 0; k < 3; ++k) CHECK(fit.beta(k) == doctest::Approx(soft_threshold(ols(k), lambda)).epsilon(1e-9));
  }
}

TEST_CASE("penalized fits satisfy the KKT conditions") {
  std::mt19937_64 rng(5);
  for (GlmFamily family : {GlmFamily::gaussian, GlmFamily::binomial, GlmFamily::poisson}) {
    const auto pr = simulate(rng, family, 300, 6);
    const double top = glm_lambda_max(pr.x, pr.y, family);
    for (double frac : {0.5, 0.1, 0.02}) {
      GlmOptions options;
      options.tolerance = 1e-10;
      const auto fit = fit_glm_lasso(pr.x, pr.y, family, frac * top, options);
      CHECK(fit.converged);
      check_kkt(pr.x, pr.y, family, frac * top, fit, 1e-5);
    }
  }
}

TEST_CASE("unpenalized binomial fit matches an independent logistic regression") {
  std::mt19937_64 rng(6);
  const auto pr = simulate(rng, GlmFamily::binomial, 400, 3);
  GlmOptions options;
  options.tolerance = 1e-12;
  const auto fit = fit_glm_lasso(pr.x, pr.y, GlmFamily::binomial, 0.0, options);
  LogisticOptions lo;
  lo.ridge = 0.0;
  lo.tolerance = 1e-12;
  const auto reference = fit_logistic(pr.x, pr.y, lo);
  CHECK(fit.intercept == doctest::Approx(reference.coefficients(0)).epsilon(1e-6));
  for (Index k = 0; k < 3; ++k) CHECK(fit.beta(k) == doctest::Approx(reference.coefficients(k + 1)).epsilon(1e-6));
}

TEST_CASE("unpenalized poisson fit solves the score equations") {
  std::mt19937_64 rng(7);
  const auto pr = simulate(rng, GlmFamily::poisson, 400, 3);
  GlmOptions options;
  options.tolerance = 1e-12;
  const auto fit = fit_glm_lasso(pr.x, pr.y, GlmFamily::poisson, 0.0, options);
  CHECK(smooth_grad(pr.x, pr.y, GlmFamily::poisson, fit.intercept, fit.beta).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("lambda_max gives the null model") {
  std::mt19937_64 rng(8);
  for (GlmFamily family : {GlmFamily::gaussian, GlmFamily::binomial, GlmFamily::poisson}) {
    const auto pr = simulate(rng, family, 200, 5);
    const double top = glm_lambda_max(pr.x, pr.y, family);
    CHECK(fit_glm_lasso(pr.x, pr.y, family, top).beta.isZero(0.0));
    CHECK(fit_glm_lasso(pr.x, pr.y, family, 3.0 * top).beta.isZero(0.0));
    CHECK_FALSE(fit_glm_lasso(pr.x, pr.y, family, 0.8 * top).beta.isZero(0.0));
  }
  const auto data = validate_and_standardize(generate_sample({DgpKind::main, 300, 2}).data);
  const auto cube = fit_mgm(data, {1e4});
  CHECK(cube.model() == CubeModel::glm);
  CHECK(cube.level_count() == 1);
  CHECK(estimate_edge_set(cube, 0).edge_count() == 0);
}

TEST_CASE("objective does not increase across sweeps") {
  std::mt19937_64 rng(9);
  for (GlmFamily family : {GlmFamily::gaussian, GlmFamily::binomial, GlmFamily::poisson}) {
    const auto pr = simulate(rng, family, 250, 8);
    GlmOptions options;
    options.record_trace = true;
    const double lambda = 0.05 * glm_lambda_max(pr.x, pr.y, family);
    const auto fit = fit_glm_lasso(pr.x, pr.y, family, lambda, options);
    REQUIRE(fit.objective_trace.size() >= 2);
    for (std::size_t t = 1; t < fit.objective_trace.size(); ++t)
      CHECK(fit.objective_trace[t] <= fit.objective_trace[t - 1] + 1e-13);
    CHECK(fit.objective == doctest::Approx(glm_objective(pr.x, pr.y, family, fit.intercept, fit.beta, lambda)));
  }
}

TEST_CASE("deviance examples") {
  VecX y(4);
  y << 1.0, 2.0, -1.0, 0.5;
  CHECK(glm_deviance(GlmFamily::gaussian, y, y) == 0.0);
  VecX labels(6);
  labels << 1, 0, 1, 0, 1, 0;
  CHECK(glm_deviance(GlmFamily::binomial, labels, VecX::Zero(6)) == doctest::Approx(12.0 * std::log(2.0)));
  std::mt19937_64 rng(1);
  std::poisson_distribution<int> pois(2.0);
  std::normal_distribution<double> nrm;
  for (int rep = 0; rep < 100; ++rep) {
    VecX counts(10), eta(10);
    for (Index i = 0; i < 10; ++i) {
      counts(i) = pois(rng);
      eta(i) = nrm(rng);
    }
    CHECK(glm_deviance(GlmFamily::poisson, counts, eta) >= 0.0);
    // The saturated predictor log(y) reaches zero on positive counts.
    VecX positive = counts.array() + 1.0;
    CHECK(glm_deviance(GlmFamily::poisson, positive, positive.array().log().matrix()) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("path warm starts agree with cold fits") {
  std::mt19937_64 rng(10);
  const auto pr = simulate(rng, GlmFamily::poisson, 200, 5);
  const auto lambdas = log_lambda_grid(0.005, 0.5, 6);
  GlmOptions options;
  options.tolerance = 1e-12;
  const auto path = fit_glm_lasso_path(pr.x, pr.y, GlmFamily::poisson, lambdas, options);
  REQUIRE(path.size() == 6);
  for (std::size_t m = 0; m < 6; ++m) {
    const auto cold = fit_glm_lasso(pr.x, pr.y, GlmFamily::poisson, lambdas[m], options);
    CHECK((path[m].beta - cold.beta).norm() < 1e-6);
  }
}

TEST_CASE("mgm cube uses deviance blocks and the shared edge rule") {
  const auto data = validate_and_standardize(generate_sample({DgpKind::binary, 300, 4}).data);
  const auto lambdas = log_lambda_grid(0.01, 1.0, 5);
  const auto cube = fit_mgm(data, lambdas);
  REQUIRE(cube.nodes() == 10);
  const MatX blocks = block_losses(cube, 2, data);
  for (Index j = 0; j < 10; ++j) {
    const MatX x = covariates_without(data.values, j);
    const VecX y = data.values.col(j);
    const VecX eta = (x * cube.beta(j, 0, 2)).array() + cube.intercept(j, 0, 2);
    CHECK(blocks(j, 0) == doctest::Approx(glm_deviance(family_for(data.schema[static_cast<std::size_t>(j)].kind), y, eta)));
  }
  const auto selection = select_graph(cube, data, SelectionCriterion::bic_p(10));
  CHECK(selection.graph.edge_count() > 0);
  CHECK(fit_mgm(data, lambdas, {}, 3).beta(4, 0, 3) == cube.beta(4, 0, 3));
}

}  // TEST_SUITE
