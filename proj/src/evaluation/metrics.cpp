#include "fakewatch/evaluation/metrics.hpp"

#include "fakewatch/common/error.hpp"

namespace fakewatch::evaluation {

ConfusionMatrix confusion_matrix(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "predictions and labels differ in length (" +
                                                 std::to_string(predictions.size()) + " vs " +
                                                 std::to_string(labels.size()) + ")");
  }
  if (labels.empty()) throw Error(ErrorCode::kEmptyInput, "confusion matrix needs at least one prediction");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int p = predictions[i];
    const int y = labels[i];
    if ((p != 0 && p != 1) || (y != 0 && y != 1)) {
      throw Error(ErrorCode::kInvalidArgument, "non-binary entry at position " + std::to_string(i));
    }
    if (p == 1) {
      ++(y == 1 ? cm.tp : cm.fp);
    } else {
      ++(y == 0 ? cm.tn : cm.fn);
    }
  }
  return cm;
}

MetricsReport classification_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::kEmptyInput, "confusion matrix is empty");
  MetricsReport r;
  const auto tp = static_cast<double>(cm.tp);
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  if (cm.tp + cm.fp > 0) {
    r.precision = tp / static_cast<double>(cm.tp + cm.fp);
  } else {
    r.undefined.push_back("precision");
  }
  if (cm.tp + cm.fn > 0) {
    r.recall = tp / static_cast<double>(cm.tp + cm.fn);
  } else {
    r.undefined.push_back("recall");
  }
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  } else {
    r.undefined.push_back("f1");
  }
  return r;
}

}  // namespace fakewatch::evaluation
