// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qmgm/centrality.hpp"
#include "qmgm/dgp.hpp"
#include "qmgm/graph_document.hpp"
#include "qmgm/metrics.hpp"
#include "qmgm/midquantile.hpp"
#include "qmgm/quantile_loss.hpp"
#include "qmgm/replications.hpp"
#include "qmgm/selection.hpp"

using namespace qmgm;

namespace {

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

std::string fmt(const char* pattern, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, pattern, a, b, c, d);
  return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median_of(const BenchmarkSummary& s, const std::string& learner, const std::string& criterion,
                 const std::string& metric) {
  const auto* row = find_row(s, learner, criterion, metric);
  return row != nullptr ? row->median : std::nan("");
}

// ---------------------------------------------------------------- AC1-AC3

void simulation_criteria() {
  BenchmarkConfig config;
  config.variant = DgpKind::main;
  config.n = 500;
  config.replications = 20;
  config.base_seed = 1;
  config.learners = {Learner::parse("mgm"), Learner::parse("qmgm1"), Learner::parse("qmgm3"), Learner::parse("qmgm7")};
  config.criteria = {"aic", "bicp"};
  config.lambda_min = 0.001;
  config.lambda_max = 5.0;
  config.lambda_count = 50;
  const auto start = std::chrono::steady_clock::now();
  const auto summary = run_replications(config);
  const double elapsed = seconds_since(start);

  const double mgm = median_of(summary, "mgm", "path", "auc");
  const double q1 = median_of(summary, "qmgm1", "path", "auc");
  const double q3 = median_of(summary, "qmgm3", "path", "auc");
  const double q7 = median_of(summary, "qmgm7", "path", "auc");
  std::printf("  median AUC  mgm %.3f  qmgm1 %.3f  qmgm3 %.3f  qmgm7 %.3f  (%d failed replications, %.0f s)\n", mgm,
              q1, q3, q7, summary.failed, elapsed);

  const bool bands = std::abs(q7 - 0.86) <= 0.06 && std::abs(q1 - 0.79) <= 0.06 && std::abs(mgm - 0.71) <= 0.06;
  const bool order = mgm + 0.02 <= q1 && q1 + 0.02 <= q7;
  report("AC1 path AUC levels and ordering", bands && order && elapsed <= 1800.0,
         fmt("qmgm7 %.3f (0.86+-0.06), qmgm1 %.3f (0.79+-0.06), mgm %.3f (0.71+-0.06)", q7, q1, mgm) +
             (order ? ", ordering ok" : ", ordering mgm < qmgm1 < qmgm7 with gaps >= 0.02 violated") +
             fmt(", %.0f s", elapsed));

  report("AC2 AUC nondecreasing in L", q3 >= q1 - 0.02 && q7 >= q3 - 0.02,
         fmt("L=1 %.3f, L=3 %.3f, L=7 %.3f (tolerance 0.02)", q1, q3, q7));

  const double aic1 = median_of(summary, "qmgm1", "aic", "fpr");
  const double bic1 = median_of(summary, "qmgm1", "bicp", "fpr");
  const double aic7 = median_of(summary, "qmgm7", "aic", "fpr");
  const double bic7 = median_of(summary, "qmgm7", "bicp", "fpr");
  report("AC3 AIC overfits relative to BICp", aic1 >= bic1 && aic7 >= bic7,
         fmt("median FPR qmgm1 aic %.3f vs bicp %.3f, qmgm7 aic %.3f vs bicp %.3f", aic1, bic1, aic7, bic7));
}

// ---------------------------------------------------------------- AC4

void null_structure() {
  BenchmarkConfig config;
  config.variant = DgpKind::null;
  config.n = 1000;
  config.replications = 20;
  config.base_seed = 101;
  config.learners = {Learner::parse("qmgm7")};
  config.criteria = {"bicp"};
  config.lambda_count = 50;
  const auto summary = run_replications(config);
  const double edges = median_of(summary, "qmgm7", "bicp", "edges");
  const auto* row = find_row(summary, "qmgm7", "bicp", "edges");
  report("AC4 null structure", edges <= 1.0,
         fmt("qmgm7 BICp median edges %.1f (p90 %.1f) over 20 replications of 6 independent columns", edges,
             row ? row->p90 : std::nan("")));
}

// ---------------------------------------------------------------- AC5

// Parzen mid-quantile computed from scratch: mid-CDF at the distinct values,
// linear interpolation between them, held flat outside.
double parzen_mid_quantile(std::vector<double> sample, double tau) {
  std::sort(sample.begin(), sample.end());
  std::vector<double> z, pi;
  const double n = static_cast<double>(sample.size());
  double below = 0.0;
  for (std::size_t i = 0; i < sample.size();) {
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    z.push_back(sample[i]);
    pi.push_back((below + 0.5 * static_cast<double>(j - i)) / n);
    below += static_cast<double>(j - i);
    i = j;
  }
  if (tau <= pi.front()) return z.front();
  if (tau >= pi.back()) return z.back();
  std::size_t h = 0;
  while (pi[h + 1] < tau) ++h;
  return z[h] + (tau - pi[h]) / (pi[h + 1] - pi[h]) * (z[h + 1] - z[h]);
}

void mid_quantile_oracle() {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<int> size(8, 250);
  std::uniform_real_distribution<double> rate(0.3, 12.0);
  std::uniform_int_distribution<int> spread(1, 6);
  double worst = 0.0;
  int comparisons = 0;
  for (int sample_index = 0; sample_index < 100; ++sample_index) {
    const Index n = size(rng);
    // Alternate nonnegative counts on the identity scale and strictly
    // positive counts under the log link.
    const bool log_link = sample_index % 2 == 1;
    std::poisson_distribution<int> pois(rate(rng));
    const int width = spread(rng);
    MatX values(n, 1);
    for (Index i = 0; i < n; ++i) values(i, 0) = width * pois(rng) + (log_link ? 1 : 0);
    if ((values.array() == values(0, 0)).all()) values(0, 0) += 1.0;
    // Step one without covariates: one intercept-only logit per threshold.
    ThresholdLogitSet logits;
    logits.thresholds = threshold_grid_from(values.col(0));
    const Index k = static_cast<Index>(logits.thresholds.size());
    logits.coefficients = MatX::Zero(k, 1);
    logits.diagnostics.resize(static_cast<std::size_t>(k));
    for (Index h = 0; h < k; ++h) {
      const VecX labels = (values.col(0).array() <= logits.thresholds[static_cast<std::size_t>(h)]).cast<double>();
      if (labels.sum() == static_cast<double>(n)) logits.diagnostics[static_cast<std::size_t>(h)].constant_one = true;
      else logits.coefficients(h, 0) = fit_logistic(MatX(n, 0), labels).coefficients(0);
    }
    const auto point = conditional_mid_cdf(logits, VecX(0));
    NodeProblem problem;
    problem.link = log_link ? Link::log : Link::identity;
    problem.covariates = MatX(n, 0);
    problem.thresholds = logits.thresholds;
    problem.pi = RowMatX(n, k);
    for (Index i = 0; i < n; ++i)
      for (Index h = 0; h < k; ++h) problem.pi(i, h) = point.pi[static_cast<std::size_t>(h)];
    problem.response = values.col(0);
    const std::vector<double> sample(values.data(), values.data() + n);
    for (int t = 1; t <= 9; ++t) {
      NodeFitConfig config;
      config.tau = t / 10.0;
      config.tolerance = 1e-12;
      const auto fit = fit_node_quantile(problem, config);
      const double fitted = link_inverse(problem.link, fit.intercept);
      const double reference = parzen_mid_quantile(sample, config.tau);
      worst = std::max(worst, std::abs(fitted - reference));
      ++comparisons;
    }
  }
  report("AC5 intercept-only fit equals Parzen mid-quantile", worst <= 1e-6,
         fmt("max |fit - oracle| %.3g over %.0f (sample, tau) pairs", worst, comparisons));
}

// ---------------------------------------------------------------- AC6

void optimizer_properties() {
  std::mt19937_64 rng(99);
  int trace_violations = 0, traces = 0;
  double worst_fd = 0.0;
  int fd_checks = 0;
  int nonzero_at_max = 0, max_checks = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto data = validate_and_standardize(generate_sample({DgpKind::main, 250, seed}).data);
    for (Index node = 0; node < data.cols(); node += 3) {
      const auto problem = make_node_problem(data, estimate_node_midcdf(data, node));
      for (double tau : {0.2, 0.5, 0.8}) {
        NodeFitConfig config;
        config.tau = tau;
        const double top = lambda_max(problem, config);
        for (double factor : {1.0, 2.0}) {
          config.lambda = factor * top;
          ++max_checks;
          nonzero_at_max += !fit_node_quantile(problem, config).beta.isZero(0.0);
        }
        for (NodeSolver solver : {NodeSolver::gauss_newton, NodeSolver::gradient}) {
          for (double frac : {0.0, 0.05, 0.3}) {
            config.lambda = frac * top;
            config.solver = solver;
            config.record_trace = true;
            const auto fit = fit_node_quantile(problem, config);
            ++traces;
            for (std::size_t k = 1; k < fit.objective_trace.size(); ++k)
              trace_violations += fit.objective_trace[k] > fit.objective_trace[k - 1];
            // Central differences at the returned point and a random nearby one.
            std::normal_distribution<double> nrm(0.0, 0.05);
            VecX beta = fit.beta;
            double b0 = fit.intercept;
            for (int shift = 0; shift < 2; ++shift) {
              if (shift == 1) {
                for (Index c = 0; c < beta.size(); ++c) beta(c) += nrm(rng);
                b0 += nrm(rng);
              }
              const double h = 1e-6;
              bool near = false;
              for (Index i = 0; i < problem.rows() && !near; ++i) {
                const double eta = link_inverse(problem.link, b0 + problem.covariates.row(i).dot(beta));
                for (double z : problem.thresholds) near = near || std::abs(eta - z) < 1e3 * h * std::max(1.0, std::abs(eta));
              }
              if (near) continue;
              const VecX grad = smooth_gradient(problem, b0, beta, tau);
              VecX fd(grad.size());
              fd(0) = (smooth_objective(problem, b0 + h, beta, tau) - smooth_objective(problem, b0 - h, beta, tau)) / (2 * h);
              for (Index c = 0; c < beta.size(); ++c) {
                VecX up = beta, down = beta;
                up(c) += h;
                down(c) -= h;
                fd(c + 1) = (smooth_objective(problem, b0, up, tau) - smooth_objective(problem, b0, down, tau)) / (2 * h);
              }
              if (fd.norm() < 1e-7) continue;
              worst_fd = std::max(worst_fd, (grad - fd).norm() / fd.norm());
              ++fd_checks;
            }
          }
        }
      }
    }
  }

  // Soft-threshold against a grid search refined by bisection.
  std::uniform_real_distribution<double> uv(-4.0, 4.0), ut(0.0, 3.0);
  double worst_prox = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const double v = uv(rng), t = ut(rng);
    const auto f = [&](double x) { return 0.5 * (x - v) * (x - v) + t * std::abs(x); };
    double best = -8.0;
    for (double x = -8.0; x <= 8.0; x += 1e-3)
      if (f(x) < f(best)) best = x;
    // Bracket from the grid, then bisect the optimality condition
    // 0 in x - v + t * d|x|.
    double lo = best - 1e-3, hi = best + 1e-3;
    double x_star = 0.0;
    if (lo < 0.0 && hi > 0.0 && std::abs(v) <= t) {
      x_star = 0.0;
    } else {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = mid - v + t * ((mid > 0) - (mid < 0));
        (g > 0 ? hi : lo) = mid;
      }
      x_star = 0.5 * (lo + hi);
    }
    worst_prox = std::max(worst_prox, std::abs(soft_threshold(v, t) - x_star));
  }

  const bool pass = trace_violations == 0 && worst_fd < 1e-4 && fd_checks > 50 && worst_prox <= 1e-10 && nonzero_at_max == 0;
  report("AC6 optimizer properties", pass,
         fmt("objective increases %.0f in %.0f traces; FD rel. error max %.2g over %.0f points", trace_violations, traces,
             worst_fd, fd_checks) +
             fmt("; prox max error %.2g; nonzero slopes at lambda >= lambda_max %.0f/%.0f", worst_prox, nonzero_at_max,
                 max_checks));
}

// ---------------------------------------------------------------- AC7

BoolMat random_graph(std::mt19937_64& rng, Index p, double density) {
  std::bernoulli_distribution edge(density);
  BoolMat a = BoolMat::Constant(p, p, false);
  for (Index i = 0; i < p; ++i)
    for (Index j = i + 1; j < p; ++j) a(i, j) = a(j, i) = edge(rng);
  return a;
}

// Envelope AUC recomputed differently: for each distinct FPR take the best
// TPR seen at or before it, then integrate segment by segment.
double brute_auc(const BoolMat& truth, const std::vector<BoolMat>& path) {
  const Index p = truth.rows();
  std::map<double, double> best;
  best[0.0] = 0.0;
  best[1.0] = 1.0;
  for (const auto& g : path) {
    long tp = 0, fp = 0, pos = 0, neg = 0;
    for (Index i = 0; i < p; ++i)
      for (Index j = i + 1; j < p; ++j) {
        pos += truth(i, j);
        neg += !truth(i, j);
        tp += truth(i, j) && g(i, j);
        fp += !truth(i, j) && g(i, j);
      }
    const double fpr = neg ? static_cast<double>(fp) / neg : 0.0;
    const double tpr = pos ? static_cast<double>(tp) / pos : 0.0;
    best[fpr] = std::max(best.count(fpr) ? best[fpr] : 0.0, tpr);
  }
  double area = 0.0, prev_x = 0.0, prev_y = 0.0, running = 0.0;
  for (const auto& [x, y] : best) {
    running = std::max(running, y);
    area += (x - prev_x) * (running + prev_y) / 2.0;
    prev_x = x;
    prev_y = running;
  }
  return area;
}

void metrics_oracle() {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> density(0.05, 0.9);
  int count_mismatch = 0, metric_mismatch = 0, hamming_mismatch = 0;
  double worst_auc = 0.0;
  for (int pair = 0; pair < 1000; ++pair) {
    const Index p = 2 + pair % 7;
    const BoolMat truth = random_graph(rng, p, density(rng));
    const BoolMat estimate = random_graph(rng, p, density(rng));
    long tp = 0, fp = 0, tn = 0, fn = 0, differ = 0;
    for (Index i = 0; i < p; ++i)
      for (Index j = i + 1; j < p; ++j) {
        tp += truth(i, j) && estimate(i, j);
        fp += !truth(i, j) && estimate(i, j);
        tn += !truth(i, j) && !estimate(i, j);
        fn += truth(i, j) && !estimate(i, j);
        differ += truth(i, j) != estimate(i, j);
      }
    const auto counts = pair_counts(truth, estimate);
    count_mismatch += counts.tp != tp || counts.fp != fp || counts.tn != tn || counts.fn != fn;
    const auto m = confusion_metrics(truth, estimate);
    const auto ratio = [](double a, double b) { return b > 0 ? a / b : 0.0; };
    const double denom = std::sqrt(double(tp + fp) * double(tp + fn) * double(tn + fp) * double(tn + fn));
    const double expected[] = {ratio(tp, tp + fp), ratio(tp, tp + fn),           ratio(fp, fp + tn),
                               ratio(2.0 * tp, 2.0 * tp + fp + fn), denom > 0 ? (double(tp) * tn - double(fp) * fn) / denom : 0.0,
                               ratio(tp + tn, tp + tn + fp + fn)};
    const double got[] = {m.precision, m.tpr, m.fpr, m.f1, m.mcc, m.accuracy};
    for (int k = 0; k < 6; ++k) metric_mismatch += std::abs(got[k] - expected[k]) > 1e-12;
    const double pairs = p * (p - 1) / 2.0;
    hamming_mismatch += std::abs(hamming_distance(truth, estimate) - differ / pairs) > 1e-12;

    std::vector<BoolMat> path;
    for (int k = 0; k < 1 + pair % 5; ++k) path.push_back(random_graph(rng, p, density(rng)));
    path.push_back(estimate);
    worst_auc = std::max(worst_auc, std::abs(roc_curve(truth, path).auc - brute_auc(truth, path)));
  }
  report("AC7 metrics oracle", count_mismatch == 0 && metric_mismatch == 0 && hamming_mismatch == 0 && worst_auc <= 1e-12,
         fmt("count mismatches %.0f, metric mismatches %.0f, hamming mismatches %.0f, max AUC error %.2g (1000 pairs, p<=8)",
             count_mismatch, metric_mismatch, hamming_mismatch, worst_auc));
}

// ---------------------------------------------------------------- AC8

std::string fitted_document(int threads) {
  const auto sample = generate_sample({DgpKind::binary, 200, 7});
  const auto data = validate_and_standardize(sample.data);
  QmgmOptions options;
  options.threads = threads;
  const auto grid = QuantileGrid::standard(7);
  const auto lambdas = log_lambda_grid(0.001, 5.0, 20);
  const auto cube = fit_qmgm(data, grid, lambdas, options);
  const auto criterion = SelectionCriterion::bic_p(data.cols());
  const auto selection = select_graph(cube, data, criterion);
  FitMetadata meta{"qmgm7", grid.levels(), selection.lambda, "bicp", criterion.cn, 1e-6};
  return to_json(make_document(selection.graph, data.schema, meta));
}

void determinism() {
  bool same = true;
  for (int threads : {1, 3}) {
    BenchmarkConfig config;
    config.n = 200;
    config.replications = 3;
    config.base_seed = 31;
    config.learners = {Learner::parse("mgm"), Learner::parse("qmgm3")};
    config.lambda_count = 15;
    config.threads = threads;
    const auto a = run_replications(config);
    const auto b = run_replications(config);
    same = same && summary_csv(a) == summary_csv(b) && replications_csv(a) == replications_csv(b) &&
           manifest_text(config) == manifest_text(config);
    same = same && fitted_document(threads) == fitted_document(threads);
  }
  report("AC8 determinism", same, same ? "summary CSVs and graph documents byte-identical across runs (1 and 3 threads)"
                                       : "outputs differ between identical runs");
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  mid_quantile_oracle();
  optimizer_properties();
  metrics_oracle();
  determinism();
  null_structure();
  simulation_criteria();
  std::printf("%d criteria failed, total %.0f s\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
