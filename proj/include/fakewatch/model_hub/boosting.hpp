#pragma once

#include <string>
#include <vector>

#include "fakewatch/model_hub/tree.hpp"

namespace fakewatch::model_hub {

struct AdaBoostStage {
  double weighted_error = 0.0;
  double alpha = 0.0;
  // (1/n) sum_i exp(-s_i F_m(x_i)) after adding this stage.
  double exponential_loss = 0.0;
  double training_error = 0.0;
};

// Discrete AdaBoost over decision stumps with
// alpha_m = learning_rate * 0.5 * ln((1 - e_m) / e_m). A stump with e_m = 0 is
// kept with e_m clamped to 1e-10 and training stops ("perfect_fit"); a stump
// with e_m >= 0.5 is discarded and training stops ("weak_learner_exhausted").
// Score: sum_m alpha_m h_m(x), h in {-1, +1}.
class AdaBoost final : public Classifier {
 public:
  static AdaBoost fit(const ModelSpec& spec, const TrainingSet& data);
  static AdaBoost decode(BinaryReader& in);

  Algorithm algorithm() const override { return Algorithm::kAdaBoost; }
  ScoreKind score_kind() const override { return ScoreKind::kMargin; }
  double decision_score(const FeatureVector& x) const override;
  void encode(BinaryWriter& out) const override;

  const std::vector<AdaBoostStage>& stages() const { return stages_; }
  const std::vector<std::vector<TreeNode>>& stumps() const { return stumps_; }
  const std::string& status() const { return status_; }

 private:
  std::vector<std::vector<TreeNode>> stumps_;
  std::vector<double> alphas_;
  std::vector<AdaBoostStage> stages_;
  std::string status_ = "completed";
};

// Gradient boosting on log-loss: F_0 = prior log-odds, then regression trees
// (MSE splits on residuals y - p) with Newton leaf values
// sum(r) / sum(p (1 - p)), shrunk by the learning rate. Score: sigmoid(F).
class GradientBoosting final : public Classifier {
 public:
  static GradientBoosting fit(const ModelSpec& spec, const TrainingSet& data);
  static GradientBoosting decode(BinaryReader& in);

  Algorithm algorithm() const override { return Algorithm::kGradientBoosting; }
  ScoreKind score_kind() const override { return ScoreKind::kProbability; }
  double decision_score(const FeatureVector& x) const override;
  void encode(BinaryWriter& out) const override;

  double raw_score(const FeatureVector& x) const;
  // Mean training log-loss before boosting and after each round.
  const std::vector<double>& training_loss() const { return training_loss_; }

 private:
  double initial_ = 0.0;
  double learning_rate_ = 0.1;
  std::vector<std::vector<TreeNode>> trees_;
  std::vector<double> training_loss_;
};

}  // namespace fakewatch::model_hub
