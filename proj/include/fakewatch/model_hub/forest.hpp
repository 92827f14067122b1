#pragma once

#include <vector>

#include "fakewatch/model_hub/tree.hpp"

namespace fakewatch::model_hub {

// max_features keyword/number resolved against the feature dimension.
std::size_t resolve_max_features(const ModelSpec& spec, std::size_t dimension);

// Bagged CART trees with per-tree seeds derived from the spec seed. The score
// is the fraction of trees voting fake, so the majority vote breaks ties to 0.
class RandomForest final : public Classifier {
 public:
  static RandomForest fit(const ModelSpec& spec, const TrainingSet& data);
  static RandomForest decode(BinaryReader& in);

  Algorithm algorithm() const override { return Algorithm::kRandomForest; }
  ScoreKind score_kind() const override { return ScoreKind::kProbability; }
  double decision_score(const FeatureVector& x) const override;
  void encode(BinaryWriter& out) const override;

  std::size_t tree_count() const { return trees_.size(); }

 private:
  std::vector<std::vector<TreeNode>> trees_;
};

}  // namespace fakewatch::model_hub
