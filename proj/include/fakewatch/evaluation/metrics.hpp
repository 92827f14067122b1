#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fakewatch::evaluation {

// Positive class is fake (1).
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// Metrics with a zero denominator are reported as 0 and named in `undefined`.
struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<std::string> undefined;
};

ConfusionMatrix confusion_matrix(std::span<const int> predictions, std::span<const int> labels);
MetricsReport classification_metrics(const ConfusionMatrix& cm);

}  // namespace fakewatch::evaluation
