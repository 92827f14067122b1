#pragma once

#include <array>
#include <vector>

#include "fakewatch/model_hub/classifier.hpp"

namespace fakewatch::model_hub {

// Multinomial and Bernoulli naive Bayes with additive (Laplace/Lidstone)
// smoothing. Scores are posterior P(fake).
class NaiveBayes final : public Classifier {
 public:
  static NaiveBayes fit(const ModelSpec& spec, const TrainingSet& data);
  static NaiveBayes decode(Algorithm algorithm, BinaryReader& in);

  Algorithm algorithm() const override { return algorithm_; }
  ScoreKind score_kind() const override { return ScoreKind::kProbability; }
  double decision_score(const FeatureVector& x) const override;
  void encode(BinaryWriter& out) const override;

  // log P(c) + log P(x | c) for c = 0, 1.
  std::array<double, 2> joint_log_likelihood(const FeatureVector& x) const;
  const std::array<double, 2>& class_log_prior() const { return log_prior_; }

 private:
  Algorithm algorithm_ = Algorithm::kMultinomialNb;
  std::array<double, 2> log_prior_{};
  std::array<std::vector<double>, 2> log_prob_;
  // Bernoulli only: log(1 - p) per feature and its sum.
  std::array<std::vector<double>, 2> log_neg_prob_;
  std::array<double, 2> log_neg_total_{};
};

// Posterior P(class 1) from the two joint log-likelihoods; shifting both by a
// constant leaves it unchanged.
double posterior_from_joint(const std::array<double, 2>& joint);

}  // namespace fakewatch::model_hub
