#pragma once

#include <vector>

#include "fakewatch/model_hub/classifier.hpp"

namespace fakewatch::model_hub {

enum class LinearLoss { kLogistic, kHinge, kSquaredHinge };

LinearLoss loss_for(Algorithm algorithm);

// mean_i loss(s_i * (w.x_i + b)) + (lambda / 2) * ||w||^2, s_i = 2 y_i - 1.
double linear_objective(LinearLoss loss, const std::vector<double>& weights, double bias,
                        const TrainingSet& data, double lambda);

// Gradient of linear_objective with respect to (w, b).
void linear_gradient(LinearLoss loss, const std::vector<double>& weights, double bias, const TrainingSet& data,
                     double lambda, std::vector<double>& grad_w, double& grad_b);

// L2 strength used for a spec: `alpha` when given, else 1 / (C * 10000).
double regularization_strength(const ModelSpec& spec);

struct LinearFitTrace {
  std::size_t epochs = 0;
  std::vector<double> objective;  // per epoch
};

// Logistic regression (probability score), SGD with hinge loss and linear SVC
// with squared hinge (margin scores). LR and linear SVC use full-batch gradient
// descent with step 1/L; SGD uses per-sample updates with a seeded shuffle.
class LinearModel final : public Classifier {
 public:
  static LinearModel fit(const ModelSpec& spec, const TrainingSet& data, LinearFitTrace* trace = nullptr);
  static LinearModel decode(Algorithm algorithm, BinaryReader& in);

  Algorithm algorithm() const override { return algorithm_; }
  ScoreKind score_kind() const override {
    return algorithm_ == Algorithm::kLogisticRegression ? ScoreKind::kProbability : ScoreKind::kMargin;
  }
  double decision_score(const FeatureVector& x) const override;
  void encode(BinaryWriter& out) const override;

  double margin(const FeatureVector& x) const;
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  Algorithm algorithm_ = Algorithm::kLogisticRegression;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

}  // namespace fakewatch::model_hub
