#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fakewatch/labeling/review.hpp"

namespace fakewatch::labeling {

struct AgreementReport {
  double observed_agreement = 0.0;  // p_o
  double expected_agreement = 0.0;  // p_e
  double kappa = 0.0;
  // contingency[a][b] counts pairs with first label a and second label b.
  std::array<std::array<std::uint64_t, 2>, 2> contingency{};
  std::uint64_t pairs = 0;
};

// Cohen's kappa for two raters. When p_e = 1 the ratio is undefined; kappa is
// then 1 if p_o = 1 and 0 otherwise.
AgreementReport cohen_kappa(std::span<const std::pair<int, int>> pairs);

// (first reviewer, second reviewer) labels of every dually reviewed assignment.
std::vector<std::pair<int, int>> review_pairs(const std::vector<ReviewAssignment>& assignments);

// Verdicts submitted per annotator (adjudications included).
std::map<std::string, std::uint64_t> verdict_counts(const std::vector<ReviewAssignment>& assignments);

}  // namespace fakewatch::labeling
