#include "fakewatch/labeling/agreement.hpp"

#include "fakewatch/common/error.hpp"

namespace fakewatch::labeling {

AgreementReport cohen_kappa(std::span<const std::pair<int, int>> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyInput, "kappa needs at least one label pair");
  AgreementReport r;
  for (const auto& [a, b] : pairs) {
    if ((a != 0 && a != 1) || (b != 0 && b != 1)) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    ++r.contingency[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  const auto n = static_cast<double>(pairs.size());
  r.pairs = pairs.size();
  const auto& c = r.contingency;
  r.observed_agreement = static_cast<double>(c[0][0] + c[1][1]) / n;
  double pe = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    const double row = static_cast<double>(c[k][0] + c[k][1]) / n;
    const double col = static_cast<double>(c[0][k] + c[1][k]) / n;
    pe += row * col;
  }
  r.expected_agreement = pe;
  if (pe == 1.0) {
    r.kappa = r.observed_agreement == 1.0 ? 1.0 : 0.0;
  } else {
    r.kappa = (r.observed_agreement - pe) / (1.0 - pe);
  }
  return r;
}

std::vector<std::pair<int, int>> review_pairs(const std::vector<ReviewAssignment>& assignments) {
  std::vector<std::pair<int, int>> out;
  for (const auto& a : assignments) {
    const AnnotationVerdict* first = a.verdict_of(0);
    const AnnotationVerdict* second = a.verdict_of(1);
    if (first && second) out.emplace_back(first->label, second->label);
  }
  return out;
}

std::map<std::string, std::uint64_t> verdict_counts(const std::vector<ReviewAssignment>& assignments) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& a : assignments) {
    for (const auto& v : a.verdicts) ++out[v.annotator_id];
    if (a.resolution) ++out[a.resolution->annotator_id];
  }
  return out;
}

}  // namespace fakewatch::labeling
