#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fakewatch/common/rng.hpp"
#include "fakewatch/model_hub/classifier.hpp"

namespace fakewatch::model_hub {

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x[feature] <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // leaf output
};

enum class SplitCriterion { kGini, kMse };

struct TreeParams {
  SplitCriterion criterion = SplitCriterion::kGini;
  std::size_t max_depth = 0;  // 0 = unlimited
  std::size_t min_samples_split = 2;
  std::size_t max_features = 0;  // 0 = all features
};

// Gini impurity of a node with the given class-1 weight share.
double gini_impurity(double weight_class1, double weight_total);

// Maps the samples reaching a leaf to its output value.
using LeafValueFn = std::function<double(std::span<const std::size_t> samples)>;

// Greedy CART growth. Samples with zero weight are excluded. Splits are chosen
// by maximal impurity decrease (zero-gain splits allowed while the node is
// impure); ties go to the lowest feature index, then the lowest threshold.
// rng is only consulted when max_features limits the candidate set.
std::vector<TreeNode> grow_tree(const std::vector<FeatureVector>& x, std::span<const double> target,
                                std::span<const double> weight, std::size_t dimension, const TreeParams& params,
                                Rng* rng, const LeafValueFn& leaf_value);

double tree_predict(const std::vector<TreeNode>& nodes, const FeatureVector& x);
std::size_t tree_depth(const std::vector<TreeNode>& nodes);

void encode_tree(const std::vector<TreeNode>& nodes, BinaryWriter& out);
std::vector<TreeNode> decode_tree(BinaryReader& in);

// CART classifier; score is the weighted fraction of fake samples in the leaf.
class DecisionTree final : public Classifier {
 public:
  static DecisionTree fit(const ModelSpec& spec, const TrainingSet& data);
  static DecisionTree from_nodes(std::vector<TreeNode> nodes);
  static DecisionTree decode(BinaryReader& in);

  Algorithm algorithm() const override { return Algorithm::kDecisionTree; }
  ScoreKind score_kind() const override { return ScoreKind::kProbability; }
  double decision_score(const FeatureVector& x) const override { return tree_predict(nodes_, x); }
  void encode(BinaryWriter& out) const override { encode_tree(nodes_, out); }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const { return tree_depth(nodes_); }

 private:
  std::vector<TreeNode> nodes_;
};

// Leaf value for classification trees: weighted share of class 1.
LeafValueFn class_share_leaf(std::span<const double> labels, std::span<const double> weight);

}  // namespace fakewatch::model_hub
