#include "qmgm/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace qmgm {

PairCounts pair_counts(const BoolMat& truth, const BoolMat& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols()) {
    throw std::invalid_argument("graphs have different node counts");
  }
  PairCounts c;
  for (Index a = 0; a < truth.rows(); ++a) {
    for (Index b = a + 1; b < truth.cols(); ++b) {
      const bool t = truth(a, b);
      const bool e = estimate(a, b);
      if (t && e) ++c.tp;
      else if (!t && e) ++c.fp;
      else if (t && !e) ++c.fn;
      else ++c.tn;
    }
  }
  return c;
}

namespace {
double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }
}  // namespace

RecoveryMetrics metrics_from_counts(const PairCounts& c) {
  const double tp = static_cast<double>(c.tp);
  const double fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn);
  const double fn = static_cast<double>(c.fn);
  RecoveryMetrics m;
  m.precision = ratio(tp, tp + fp);
  m.tpr = ratio(tp, tp + fn);
  m.fpr = ratio(fp, fp + tn);
  m.f1 = ratio(2.0 * tp, 2.0 * tp + fp + fn);
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  m.mcc = den > 0.0 ? (tp * tn - fp * fn) / std::sqrt(den) : 0.0;
  m.accuracy = ratio(tp + tn, tp + tn + fp + fn);
  return m;
}

RecoveryMetrics confusion_metrics(const BoolMat& truth, const BoolMat& estimate) {
  return metrics_from_counts(pair_counts(truth, estimate));
}

RecoveryMetrics confusion_metrics(const BoolMat& truth, const EstimatedGraph& estimate) {
  return confusion_metrics(truth, estimate.adjacency());
}

double envelope_auc(std::vector<RocPoint> points) {
  points.push_back({0.0, 0.0});
  points.push_back({1.0, 1.0});
  // Highest TPR first within equal FPR, so each trapezoid ends at the
  // envelope value for that FPR.
  std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr < b.fpr || (a.fpr == b.fpr && a.tpr > b.tpr);
  });
  double running = 0.0;
  for (auto& pt : points) {
    running = std::max(running, pt.tpr);
    pt.tpr = running;
  }
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * 0.5 * (points[i].tpr + points[i - 1].tpr);
  }
  return area;
}

RocCurve roc_curve(const BoolMat& truth, const std::vector<BoolMat>& path) {
  RocCurve curve;
  for (const auto& g : path) {
    const RecoveryMetrics m = confusion_metrics(truth, g);
    curve.points.push_back({m.fpr, m.tpr});
  }
  curve.auc = envelope_auc(curve.points);
  return curve;
}

RocCurve roc_curve(const BoolMat& truth, const std::vector<EstimatedGraph>& path) {
  std::vector<BoolMat> adjacency;
  adjacency.reserve(path.size());
  for (const auto& g : path) adjacency.push_back(g.adjacency());
  return roc_curve(truth, adjacency);
}

}  // namespace qmgm
