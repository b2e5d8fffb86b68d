#pragma once

#include <vector>

#include "qmgm/graph.hpp"

namespace qmgm {

struct PairCounts {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;
};

// Counts over the p(p-1)/2 unordered node pairs.
PairCounts pair_counts(const BoolMat& truth, const BoolMat& estimate);

// Ratios with a zero denominator are reported as 0.
struct RecoveryMetrics {
  double precision = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  double accuracy = 0.0;
};

RecoveryMetrics metrics_from_counts(const PairCounts& counts);
RecoveryMetrics confusion_metrics(const BoolMat& truth, const EstimatedGraph& estimate);
RecoveryMetrics confusion_metrics(const BoolMat& truth, const BoolMat& estimate);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // one per path graph, in path order
  double auc = 0.0;
};

// Trapezoidal area under the running-max envelope of the path points plus
// (0,0) and (1,1).
double envelope_auc(std::vector<RocPoint> points);
RocCurve roc_curve(const BoolMat& truth, const std::vector<EstimatedGraph>& path);
RocCurve roc_curve(const BoolMat& truth, const std::vector<BoolMat>& path);

}  // namespace qmgm
