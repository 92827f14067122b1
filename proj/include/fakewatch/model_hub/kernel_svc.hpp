#pragma once

#include <vector>

#include "fakewatch/model_hub/classifier.hpp"

namespace fakewatch::model_hub {

// gamma = 1 / (dimension * variance of all matrix entries); 1.0 for constant data.
double scale_gamma(const TrainingSet& data);

// RBF-kernel SVC trained by SMO with second-order working-set selection.
// The full n x n kernel matrix is held in memory, so training size is capped
// by the `max_train` hyperparameter.
class KernelSvc final : public Classifier {
 public:
  static KernelSvc fit(const ModelSpec& spec, const TrainingSet& data);
  static KernelSvc decode(BinaryReader& in);

  Algorithm algorithm() const override { return Algorithm::kKernelSvcRbf; }
  ScoreKind score_kind() const override { return ScoreKind::kMargin; }
  double decision_score(const FeatureVector& x) const override;
  void encode(BinaryWriter& out) const override;

  double gamma() const { return gamma_; }
  std::size_t support_vector_count() const { return support_.size(); }
  std::size_t iterations() const { return iterations_; }

 private:
  double gamma_ = 1.0;
  double rho_ = 0.0;
  std::vector<FeatureVector> support_;
  std::vector<double> support_sq_norm_;
  std::vector<double> coef_;  // alpha_i * y_i
  std::size_t iterations_ = 0;
};

}  // namespace fakewatch::model_hub
