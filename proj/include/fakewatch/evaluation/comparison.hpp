#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fakewatch/evaluation/metrics.hpp"

namespace fakewatch::evaluation {

struct ComparisonInput {
  std::string name;
  MetricsReport report;
  std::optional<double> auc;
};

struct ComparisonRow {
  std::string name;
  MetricsReport report;
  std::optional<double> auc;
  // Column maxima (ties all flagged).
  bool best_accuracy = false;
  bool best_precision = false;
  bool best_recall = false;
  bool best_f1 = false;
  bool best_auc = false;
};

// Descending F1, then descending accuracy, then name ascending.
std::vector<ComparisonRow> model_comparison_table(std::vector<ComparisonInput> inputs);

std::string comparison_csv(const std::vector<ComparisonRow>& rows);
std::string comparison_json(const std::vector<ComparisonRow>& rows);
// Aligned text with Accuracy / Precision / Recall / F1 columns to two
// decimals; column maxima are marked with '*'.
std::string comparison_text(const std::vector<ComparisonRow>& rows);

}  // namespace fakewatch::evaluation
