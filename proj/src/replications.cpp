#include "qmgm/replications.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "qmgm/mgm.hpp"
#include "qmgm/parallel.hpp"

namespace qmgm {

Learner Learner::parse(const std::string& text) {
  if (text == "mgm") return {"mgm", 0};
  if (text.rfind("qmgm", 0) == 0) {
    const int levels = std::stoi(text.substr(4));
    QuantileGrid::standard(levels);  // validates
    return {text, levels};
  }
  throw std::invalid_argument("unknown learner '" + text + "'");
}

namespace {

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", value);
  return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

LearnerOutcome score_cube(const std::string& name, const CoefficientCube& cube, const Dataset& data,
                          const BoolMat& truth, const BenchmarkConfig& config) {
  LearnerOutcome out;
  out.learner = name;
  out.nonconverged = cube.nonconverged_count();
  std::vector<BoolMat> path;
  for (int m = 0; m < cube.lambda_count(); ++m) {
    path.push_back(estimate_edge_set(cube, m, config.edge_tolerance).adjacency());
  }
  out.auc = roc_curve(truth, path).auc;

  ScoreOptions scoring;
  scoring.residual_scale = config.residual_scale;
  scoring.active_tolerance = config.edge_tolerance;
  for (const auto& name_c : config.criteria) {
    const SelectionCriterion criterion = SelectionCriterion::parse(name_c, data.cols());
    const Selection sel = select_graph(cube, data, criterion, config.edge_tolerance, scoring);
    CriterionOutcome co;
    co.criterion = name_c;
    co.lambda = sel.lambda;
    co.edges = sel.graph.edge_count();
    co.metrics = confusion_metrics(truth, sel.graph);
    out.criteria.push_back(co);
  }
  return out;
}

}  // namespace

std::string BenchmarkConfig::canonical() const {
  std::ostringstream os;
  os << "variant=" << to_string(variant) << ";n=" << n << ";R=" << replications << ";seed=" << base_seed;
  os << ";learners=";
  for (const auto& l : learners) os << l.name << ",";
  os << ";criteria=";
  for (const auto& c : criteria) os << c << ",";
  os << ";lambda=" << format_number(lambda_min) << ":" << format_number(lambda_max) << ":" << lambda_count;
  os << ";tolerance=" << format_number(edge_tolerance);
  os << ";max_iterations=" << qmgm.max_iterations << ";solver_tolerance=" << format_number(qmgm.tolerance);
  os << ";extrapolation=" << (qmgm.extrapolation == Extrapolation::constant ? "constant" : "linear");
  os << ";residuals=" << (residual_scale == ResidualScale::linear_predictor ? "linear_predictor" : "response");
  return os.str();
}

ReplicationResult run_replication(const BenchmarkConfig& config, int index) {
  ReplicationResult result;
  result.index = index;
  result.seed = config.base_seed + static_cast<std::uint64_t>(index);
  try {
    const SyntheticSample sample = generate_sample({config.variant, config.n, result.seed});
    const Dataset data = validate_and_standardize(sample.data);
    const std::vector<double> lambdas = log_lambda_grid(config.lambda_min, config.lambda_max, config.lambda_count);

    // Nested quantile grids share one fit on the union of their levels.
    std::set<double> union_levels;
    for (const auto& learner : config.learners) {
      if (learner.levels > 0) {
        const QuantileGrid grid = QuantileGrid::standard(learner.levels);
        union_levels.insert(grid.levels().begin(), grid.levels().end());
      }
    }
    CoefficientCube union_cube;
    double qmgm_midcdf_seconds = 0.0;
    double qmgm_per_level_seconds = 0.0;
    std::vector<double> level_list(union_levels.begin(), union_levels.end());
    if (!level_list.empty()) {
      QmgmOptions options = config.qmgm;
      options.threads = 1;
      auto start = std::chrono::steady_clock::now();
      const auto midcdfs = estimate_midcdfs(data, options);
      qmgm_midcdf_seconds = seconds_since(start);
      start = std::chrono::steady_clock::now();
      union_cube = fit_qmgm(data, midcdfs, QuantileGrid(level_list), lambdas, options);
      qmgm_per_level_seconds = seconds_since(start) / static_cast<double>(level_list.size());
    }

    for (const auto& learner : config.learners) {
      if (learner.levels == 0) {
        const auto start = std::chrono::steady_clock::now();
        const CoefficientCube cube = fit_mgm(data, lambdas);
        const double elapsed = seconds_since(start);
        LearnerOutcome outcome = score_cube(learner.name, cube, data, sample.truth, config);
        outcome.seconds = elapsed;
        result.learners.push_back(std::move(outcome));
        continue;
      }
      std::vector<int> indices;
      const QuantileGrid grid = QuantileGrid::standard(learner.levels);
      for (double t : grid.levels()) {
        indices.push_back(static_cast<int>(std::find(level_list.begin(), level_list.end(), t) - level_list.begin()));
      }
      const CoefficientCube cube = union_cube.select_levels(indices);
      LearnerOutcome outcome = score_cube(learner.name, cube, data, sample.truth, config);
      outcome.seconds = qmgm_midcdf_seconds + qmgm_per_level_seconds * learner.levels;
      result.learners.push_back(std::move(outcome));
    }
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
    result.learners.clear();
  }
  return result;
}

double sample_quantile(std::vector<double> values, double probability) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * probability;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BenchmarkSummary run_replications(const BenchmarkConfig& config) {
  if (config.replications < 1) throw std::invalid_argument("need at least one replication");
  if (config.learners.empty()) throw std::invalid_argument("no learners requested");
  BenchmarkSummary summary;
  summary.replications.resize(static_cast<std::size_t>(config.replications));
  parallel_for(config.replications, config.threads, [&](int r) {
    summary.replications[static_cast<std::size_t>(r)] = run_replication(config, r);
  });

  for (const auto& rep : summary.replications) summary.failed += rep.ok ? 0 : 1;

  auto add_row = [&](const std::string& learner, const std::string& criterion, const std::string& metric,
                     const std::vector<double>& values) {
    SummaryRow row{learner, criterion, metric};
    row.median = sample_quantile(values, 0.5);
    row.p10 = sample_quantile(values, 0.1);
    row.p90 = sample_quantile(values, 0.9);
    row.replications = static_cast<int>(values.size());
    row.failed = summary.failed;
    summary.rows.push_back(row);
  };

  for (std::size_t li = 0; li < config.learners.size(); ++li) {
    const std::string& name = config.learners[li].name;
    std::vector<double> auc;
    std::map<std::string, std::map<std::string, std::vector<double>>> per;
    for (const auto& rep : summary.replications) {
      if (!rep.ok) continue;
      const LearnerOutcome& lo = rep.learners[li];
      auc.push_back(lo.auc);
      for (const auto& co : lo.criteria) {
        auto& bucket = per[co.criterion];
        bucket["precision"].push_back(co.metrics.precision);
        bucket["tpr"].push_back(co.metrics.tpr);
        bucket["fpr"].push_back(co.metrics.fpr);
        bucket["f1"].push_back(co.metrics.f1);
        bucket["mcc"].push_back(co.metrics.mcc);
        bucket["accuracy"].push_back(co.metrics.accuracy);
        bucket["edges"].push_back(static_cast<double>(co.edges));
        bucket["lambda"].push_back(co.lambda);
      }
    }
    add_row(name, "path", "auc", auc);
    for (const auto& criterion : config.criteria) {
      for (const char* metric : {"precision", "tpr", "fpr", "f1", "mcc", "accuracy", "edges", "lambda"}) {
        add_row(name, criterion, metric, per[criterion][metric]);
      }
    }
  }
  return summary;
}

const SummaryRow* find_row(const BenchmarkSummary& summary, const std::string& learner, const std::string& criterion,
                           const std::string& metric) {
  for (const auto& row : summary.rows) {
    if (row.learner == learner && row.criterion == criterion && row.metric == metric) return &row;
  }
  return nullptr;
}

std::string summary_csv(const BenchmarkSummary& summary) {
  std::ostringstream os;
  os << "learner,criterion,metric,median,p10,p90,replications,failed\n";
  for (const auto& row : summary.rows) {
    os << row.learner << ',' << row.criterion << ',' << row.metric << ',' << format_number(row.median) << ','
       << format_number(row.p10) << ',' << format_number(row.p90) << ',' << row.replications << ',' << row.failed
       << '\n';
  }
  return os.str();
}

std::string replications_csv(const BenchmarkSummary& summary) {
  std::ostringstream os;
  os << "replication,seed,learner,criterion,auc,lambda,edges,precision,tpr,fpr,f1,mcc,accuracy,nonconverged\n";
  for (const auto& rep : summary.replications) {
    if (!rep.ok) {
      os << rep.index << ',' << rep.seed << ",FAILED,,,,,,,,,,,\n";
      continue;
    }
    for (const auto& lo : rep.learners) {
      for (const auto& co : lo.criteria) {
        const auto& m = co.metrics;
        os << rep.index << ',' << rep.seed << ',' << lo.learner << ',' << co.criterion << ','
           << format_number(lo.auc) << ',' << format_number(co.lambda) << ',' << co.edges << ','
           << format_number(m.precision) << ',' << format_number(m.tpr) << ',' << format_number(m.fpr) << ','
           << format_number(m.f1) << ',' << format_number(m.mcc) << ',' << format_number(m.accuracy) << ','
           << lo.nonconverged << '\n';
      }
    }
  }
  return os.str();
}

std::string timing_csv(const BenchmarkSummary& summary) {
  std::ostringstream os;
  os << "replication,learner,seconds\n";
  for (const auto& rep : summary.replications) {
    for (const auto& lo : rep.learners) {
      os << rep.index << ',' << lo.learner << ',' << format_number(lo.seconds) << '\n';
    }
  }
  return os.str();
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string manifest_text(const BenchmarkConfig& config) {
  std::ostringstream os;
  const std::string canonical = config.canonical();
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  os << "config_digest " << digest << '\n';
  os << "config " << canonical << '\n';
  for (int r = 0; r < config.replications; ++r) {
    os << "replication " << r << " seed " << config.base_seed + static_cast<std::uint64_t>(r) << '\n';
  }
  return os.str();
}

}  // namespace qmgm
