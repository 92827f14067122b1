#include "fakewatch/model_hub/boosting.hpp"

#include <cmath>

#include "fakewatch/common/error.hpp"

namespace fakewatch::model_hub {
namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double log_loss(const std::vector<int>& y, const std::vector<double>& raw) {
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    // log(1 + exp(-s F)) evaluated stably.
    double m = (y[i] == 1 ? 1.0 : -1.0) * raw[i];
    total += m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
  }
  return total / static_cast<double>(y.size());
}

double stump_sign(const std::vector<TreeNode>& stump, const FeatureVector& x) { return tree_predict(stump, x); }

}  // namespace

AdaBoost AdaBoost::fit(const ModelSpec& spec, const TrainingSet& data) {
  const auto rounds = static_cast<std::size_t>(spec.get_int("n_estimators", 50));
  const double lr = spec.get_double("learning_rate", 1.0);
  const std::size_t n = data.size();

  std::vector<double> labels(data.y.begin(), data.y.end());
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = data.y[i] == 1 ? 1.0 : -1.0;
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<double> f(n, 0.0);
  TreeParams params;
  params.max_depth = 1;

  AdaBoost model;
  for (std::size_t m = 0; m < rounds; ++m) {
    auto stump = grow_tree(data.x, labels, w, data.dimension, params, nullptr, class_share_leaf(labels, w));
    // Leaves vote +1 when the weighted fake share is above one half.
    for (TreeNode& node : stump) {
      if (node.feature < 0) node.value = node.value > 0.5 ? 1.0 : -1.0;
    }
    std::vector<double> h(n);
    double err = 0.0;
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = stump_sign(stump, data.x[i]);
      wsum += w[i];
      if (h[i] != s[i]) err += w[i];
    }
    err /= wsum;
    if (err >= 0.5) {
      model.status_ = "weak_learner_exhausted";
      break;
    }
    const bool perfect = err <= 0.0;
    if (perfect) err = 1e-10;
    const double alpha = lr * 0.5 * std::log((1.0 - err) / err);

    AdaBoostStage stage;
    stage.weighted_error = err;
    stage.alpha = alpha;
    double exp_loss = 0.0;
    std::size_t wrong = 0;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] += alpha * h[i];
      exp_loss += std::exp(-s[i] * f[i]);
      if ((f[i] > 0.0 ? 1.0 : -1.0) != s[i]) ++wrong;
      w[i] *= std::exp(-alpha * s[i] * h[i]);
      norm += w[i];
    }
    for (double& wi : w) wi /= norm;
    stage.exponential_loss = exp_loss / static_cast<double>(n);
    stage.training_error = static_cast<double>(wrong) / static_cast<double>(n);
    model.stumps_.push_back(std::move(stump));
    model.alphas_.push_back(alpha);
    model.stages_.push_back(stage);
    if (perfect) {
      model.status_ = "perfect_fit";
      break;
    }
  }
  return model;
}

double AdaBoost::decision_score(const FeatureVector& x) const {
  double score = 0.0;
  for (std::size_t m = 0; m < stumps_.size(); ++m) score += alphas_[m] * stump_sign(stumps_[m], x);
  return score;
}

void AdaBoost::encode(BinaryWriter& out) const {
  out.str(status_);
  out.f64_vec(alphas_);
  for (const auto& stump : stumps_) encode_tree(stump, out);
  out.u64(stages_.size());
  for (const auto& st : stages_) {
    out.f64(st.weighted_error);
    out.f64(st.alpha);
    out.f64(st.exponential_loss);
    out.f64(st.training_error);
  }
}

AdaBoost AdaBoost::decode(BinaryReader& in) {
  AdaBoost model;
  model.status_ = in.str();
  model.alphas_ = in.f64_vec();
  for (std::size_t m = 0; m < model.alphas_.size(); ++m) model.stumps_.push_back(decode_tree(in));
  std::size_t count = in.count(32);
  for (std::size_t m = 0; m < count; ++m) {
    AdaBoostStage st;
    st.weighted_error = in.f64();
    st.alpha = in.f64();
    st.exponential_loss = in.f64();
    st.training_error = in.f64();
    model.stages_.push_back(st);
  }
  return model;
}

GradientBoosting GradientBoosting::fit(const ModelSpec& spec, const TrainingSet& data) {
  const auto rounds = static_cast<std::size_t>(spec.get_int("n_estimators", 100));
  const std::size_t n = data.size();
  GradientBoosting model;
  model.learning_rate_ = spec.get_double("learning_rate", 0.1);
  TreeParams params;
  params.criterion = SplitCriterion::kMse;
  params.max_depth = static_cast<std::size_t>(spec.get_int("max_depth", 3));
  params.min_samples_split = static_cast<std::size_t>(spec.get_int("min_samples_split", 2));

  const double prior = static_cast<double>(data.count(1)) / static_cast<double>(n);
  model.initial_ = std::log(prior / (1.0 - prior));
  std::vector<double> raw(n, model.initial_);
  std::vector<double> residual(n);
  std::vector<double> hess(n);
  const std::vector<double> weight(n, 1.0);
  model.training_loss_.push_back(log_loss(data.y, raw));

  LeafValueFn newton = [&](std::span<const std::size_t> samples) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i : samples) {
      num += residual[i];
      den += hess[i];
    }
    return den < 1e-12 ? 0.0 : num / den;
  };
  for (std::size_t m = 0; m < rounds; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      double p = sigmoid(raw[i]);
      residual[i] = static_cast<double>(data.y[i]) - p;
      hess[i] = p * (1.0 - p);
    }
    auto tree = grow_tree(data.x, residual, weight, data.dimension, params, nullptr, newton);
    for (std::size_t i = 0; i < n; ++i) raw[i] += model.learning_rate_ * tree_predict(tree, data.x[i]);
    model.trees_.push_back(std::move(tree));
    model.training_loss_.push_back(log_loss(data.y, raw));
  }
  return model;
}

double GradientBoosting::raw_score(const FeatureVector& x) const {
  double f = initial_;
  for (const auto& tree : trees_) f += learning_rate_ * tree_predict(tree, x);
  return f;
}

double GradientBoosting::decision_score(const FeatureVector& x) const { return sigmoid(raw_score(x)); }

void GradientBoosting::encode(BinaryWriter& out) const {
  out.f64(initial_);
  out.f64(learning_rate_);
  out.f64_vec(training_loss_);
  out.u64(trees_.size());
  for (const auto& tree : trees_) encode_tree(tree, out);
}

GradientBoosting GradientBoosting::decode(BinaryReader& in) {
  GradientBoosting model;
  model.initial_ = in.f64();
  model.learning_rate_ = in.f64();
  model.training_loss_ = in.f64_vec();
  std::size_t count = in.count(36);
  for (std::size_t t = 0; t < count; ++t) model.trees_.push_back(decode_tree(in));
  return model;
}

}  // namespace fakewatch::model_hub
