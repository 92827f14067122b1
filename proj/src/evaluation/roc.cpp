#include "fakewatch/evaluation/roc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fakewatch/common/error.hpp"

namespace fakewatch::evaluation {
namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels, std::size_t& pos, std::size_t& neg) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::kInvalidArgument, "scores and labels differ in length");
  pos = neg = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    if (std::isnan(scores[i])) throw Error(ErrorCode::kInvalidArgument, "score " + std::to_string(i) + " is NaN");
    ++(labels[i] == 1 ? pos : neg);
  }
  if (pos == 0 || neg == 0) throw Error(ErrorCode::kInvalidArgument, "ROC needs both classes present");
}

}  // namespace

RocCurve roc_curve_auc(std::span<const double> scores, std::span<const int> labels) {
  std::size_t pos = 0;
  std::size_t neg = 0;
  check_inputs(scores, labels, pos, neg);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  // Integer counts keep the area exact until the final division.
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  double twice_area = 0.0;  // in units of (1/neg) x (1/pos)
  for (std::size_t k = 0; k < order.size();) {
    const double threshold = scores[order[k]];
    const std::uint64_t tp0 = tp;
    const std::uint64_t fp0 = fp;
    for (; k < order.size() && scores[order[k]] == threshold; ++k) ++(labels[order[k]] == 1 ? tp : fp);
    twice_area += static_cast<double>(fp - fp0) * static_cast<double>(tp + tp0);
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                            static_cast<double>(tp) / static_cast<double>(pos), threshold});
  }
  curve.auc = twice_area / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
  return curve;
}

double rank_auc(std::span<const double> scores, std::span<const int> labels) {
  std::size_t pos = 0;
  std::size_t neg = 0;
  check_inputs(scores, labels, pos, neg);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of positive midranks (1-based).
  double rank_sum = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    while (end < order.size() && scores[order[end]] == scores[order[k]]) ++end;
    const double midrank = (static_cast<double>(k + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t t = k; t < end; ++t) {
      if (labels[order[t]] == 1) rank_sum += midrank;
    }
    k = end;
  }
  const double p = static_cast<double>(pos);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

}  // namespace fakewatch::evaluation
