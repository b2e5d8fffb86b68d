#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmgm/dgp.hpp"
#include "qmgm/metrics.hpp"
#include "qmgm/selection.hpp"

namespace qmgm {

// A learner is either "mgm" or "qmgmL" with L one of the standard grids.
struct Learner {
  std::string name;
  int levels = 0;  // 0 for mgm
  static Learner parse(const std::string& text);
};

struct BenchmarkConfig {
  DgpKind variant = DgpKind::main;
  Index n = 500;
  int replications = 20;
  std::uint64_t base_seed = 1;
  std::vector<Learner> learners;
  std::vector<std::string> criteria = {"aic", "bic", "bicp", "bic2p", "bic3p"};
  double lambda_min = 0.001;
  double lambda_max = 5.0;
  int lambda_count = 50;
  double edge_tolerance = 1e-6;
  int threads = 1;
  QmgmOptions qmgm;
  ResidualScale residual_scale = ResidualScale::linear_predictor;

  // Canonical text used for the manifest digest.
  std::string canonical() const;
};

struct CriterionOutcome {
  std::string criterion;
  double lambda = 0.0;
  long edges = 0;
  RecoveryMetrics metrics;
};

struct LearnerOutcome {
  std::string learner;
  double auc = 0.0;
  double seconds = 0.0;
  int nonconverged = 0;
  std::vector<CriterionOutcome> criteria;
};

struct ReplicationResult {
  int index = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  std::vector<LearnerOutcome> learners;
};

// One simulated dataset, every learner fitted and scored on it.
ReplicationResult run_replication(const BenchmarkConfig& config, int index);

struct SummaryRow {
  std::string learner;
  std::string criterion;  // "path" for AUC
  std::string metric;
  double median = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
  int replications = 0;
  int failed = 0;
};

struct BenchmarkSummary {
  std::vector<ReplicationResult> replications;
  std::vector<SummaryRow> rows;
  int failed = 0;
};

BenchmarkSummary run_replications(const BenchmarkConfig& config);

// Type-7 sample quantile (linear interpolation between order statistics).
double sample_quantile(std::vector<double> values, double probability);

const SummaryRow* find_row(const BenchmarkSummary& summary, const std::string& learner, const std::string& criterion,
                           const std::string& metric);

// Deterministic outputs: summary CSV, per-replication CSV and a manifest.
// Wall-clock timings go to a separate CSV because they differ across runs.
std::string summary_csv(const BenchmarkSummary& summary);
std::string replications_csv(const BenchmarkSummary& summary);
std::string timing_csv(const BenchmarkSummary& summary);
std::string manifest_text(const BenchmarkConfig& config);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace qmgm
