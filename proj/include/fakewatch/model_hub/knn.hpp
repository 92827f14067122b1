#pragma once

#include <vector>

#include "fakewatch/model_hub/classifier.hpp"

namespace fakewatch::model_hub {

// 1 - cosine similarity; a zero vector is at distance 1 from everything.
double cosine_distance(const FeatureVector& a, const FeatureVector& b);

// Lazy k-nearest-neighbours under cosine distance. Equal distances keep the
// earlier training point. Score is the fake share among the k neighbours.
class Knn final : public Classifier {
 public:
  static Knn fit(const ModelSpec& spec, const TrainingSet& data);
  static Knn decode(BinaryReader& in);

  Algorithm algorithm() const override { return Algorithm::kKnn; }
  ScoreKind score_kind() const override { return ScoreKind::kProbability; }
  double decision_score(const FeatureVector& x) const override;
  void encode(BinaryWriter& out) const override;

  std::size_t k() const { return k_; }

 private:
  std::size_t k_ = 5;
  std::vector<FeatureVector> points_;
  std::vector<double> norms_;
  std::vector<int> labels_;
};

}  // namespace fakewatch::model_hub
