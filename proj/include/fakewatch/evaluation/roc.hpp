#pragma once

#include <limits>
#include <span>
#include <vector>

namespace fakewatch::evaluation {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  // Scores >= threshold are called positive; +inf for the (0, 0) point.
  double threshold = std::numeric_limits<double>::infinity();
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// Sweeps thresholds from the highest score down, one point per distinct
// score, and integrates with the trapezoid rule. Tied scores move both rates
// at once, so a tie contributes half a pair. Throws unless both classes occur.
RocCurve roc_curve_auc(std::span<const double> scores, std::span<const int> labels);

// Probability that a random positive outscores a random negative (ties count
// one half), computed from midranks.
double rank_auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace fakewatch::evaluation
