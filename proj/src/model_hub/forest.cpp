#include "fakewatch/model_hub/forest.hpp"

#include <algorithm>
#include <cmath>

#include "fakewatch/common/error.hpp"

namespace fakewatch::model_hub {

std::size_t resolve_max_features(const ModelSpec& spec, std::size_t dimension) {
  const ParamValue* v = spec.find("max_features");
  const std::size_t dim = std::max<std::size_t>(dimension, 1);
  if (!v) return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(dim)))));
  if (const auto* s = std::get_if<std::string>(v)) {
    if (*s == "sqrt" || *s == "auto") {
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(dim)))));
    }
    if (*s == "log2") {
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(dim)))));
    }
    if (*s == "all") return 0;
    throw Error(ErrorCode::kInvalidArgument, "unsupported max_features '" + *s + "'");
  }
  auto k = static_cast<std::size_t>(spec.get_double("max_features", 1.0));
  return k >= dim ? 0 : std::max<std::size_t>(k, 1);
}

RandomForest RandomForest::fit(const ModelSpec& spec, const TrainingSet& data) {
  const auto trees = static_cast<std::size_t>(spec.get_int("n_estimators", 100));
  const bool bootstrap = spec.get_bool("bootstrap", true);
  TreeParams params;
  params.max_depth = static_cast<std::size_t>(spec.get_int("max_depth", 0));
  params.min_samples_split = static_cast<std::size_t>(spec.get_int("min_samples_split", 2));
  params.max_features = resolve_max_features(spec, data.dimension);

  const std::size_t n = data.size();
  std::vector<double> labels(data.y.begin(), data.y.end());
  RandomForest forest;
  forest.trees_.reserve(trees);
  for (std::size_t t = 0; t < trees; ++t) {
    Rng rng(mix_seed(spec.seed, t));
    std::vector<double> weight(n, bootstrap ? 0.0 : 1.0);
    if (bootstrap) {
      for (std::size_t k = 0; k < n; ++k) weight[rng.uniform_index(n)] += 1.0;
    }
    forest.trees_.push_back(
        grow_tree(data.x, labels, weight, data.dimension, params, &rng, class_share_leaf(labels, weight)));
  }
  return forest;
}

double RandomForest::decision_score(const FeatureVector& x) const {
  std::size_t votes = 0;
  for (const auto& tree : trees_) votes += tree_predict(tree, x) > 0.5 ? 1 : 0;
  return trees_.empty() ? 0.0 : static_cast<double>(votes) / static_cast<double>(trees_.size());
}

void RandomForest::encode(BinaryWriter& out) const {
  out.u64(trees_.size());
  for (const auto& tree : trees_) encode_tree(tree, out);
}

RandomForest RandomForest::decode(BinaryReader& in) {
  RandomForest forest;
  std::size_t count = in.count(36);
  for (std::size_t t = 0; t < count; ++t) forest.trees_.push_back(decode_tree(in));
  return forest;
}

}  // namespace fakewatch::model_hub
