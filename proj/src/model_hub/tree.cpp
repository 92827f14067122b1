#include "fakewatch/model_hub/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fakewatch/common/error.hpp"

namespace fakewatch::model_hub {
namespace {

constexpr double kImpurityEps = 1e-12;

struct Stats {
  double w = 0.0;    // total weight
  double wy = 0.0;   // weighted target sum
  double wyy = 0.0;  // weighted squared target sum
  std::size_t n = 0;

  void add(double weight, double target) {
    w += weight;
    wy += weight * target;
    wyy += weight * target * target;
    ++n;
  }
  Stats minus(const Stats& o) const { return {w - o.w, wy - o.wy, wyy - o.wyy, n - o.n}; }
  Stats plus(const Stats& o) const { return {w + o.w, wy + o.wy, wyy + o.wyy, n + o.n}; }
};

// Sum over children of this term is maximized by the best split. For gini it
// equals W - W * gini; for MSE it equals W * mean^2.
double split_term(SplitCriterion criterion, const Stats& s) {
  if (s.w <= 0.0) return 0.0;
  if (criterion == SplitCriterion::kGini) {
    double w0 = s.w - s.wy;
    return (s.wy * s.wy + w0 * w0) / s.w;
  }
  return s.wy * s.wy / s.w;
}

double node_impurity(SplitCriterion criterion, const Stats& s) {
  if (s.w <= 0.0) return 0.0;
  if (criterion == SplitCriterion::kGini) return gini_impurity(s.wy, s.w);
  double mean = s.wy / s.w;
  return std::max(0.0, s.wyy / s.w - mean * mean);
}

struct Entry {
  double value;
  std::size_t sample;
};

class Grower {
 public:
  Grower(const std::vector<FeatureVector>& x, std::span<const double> target, std::span<const double> weight,
         std::size_t dimension, const TreeParams& params, Rng* rng, const LeafValueFn& leaf_value)
      : x_(x),
        target_(target),
        weight_(weight),
        params_(params),
        rng_(rng),
        leaf_value_(leaf_value),
        slot_(dimension, -1) {}

  std::vector<TreeNode> run() {
    std::vector<std::size_t> root;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (weight_[i] > 0.0) root.push_back(i);
    }
    if (root.empty()) throw Error(ErrorCode::kInvalidArgument, "tree needs at least one sample with positive weight");
    grow(root, 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    std::int32_t feature = -1;
    double threshold = 0.0;
  };

  std::int32_t grow(const std::vector<std::size_t>& samples, std::size_t depth) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    Stats total;
    for (std::size_t i : samples) total.add(weight_[i], target_[i]);

    bool leaf = samples.size() < params_.min_samples_split ||
                (params_.max_depth > 0 && depth >= params_.max_depth) ||
                node_impurity(params_.criterion, total) <= kImpurityEps;
    Split split;
    if (!leaf) {
      split = best_split(samples, total);
      leaf = split.feature < 0;
    }
    if (leaf) {
      nodes_[id].value = leaf_value_(samples);
      return id;
    }

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : samples) {
      (feature_value(x_[i], static_cast<std::uint32_t>(split.feature)) <= split.threshold ? left : right).push_back(i);
    }
    nodes_[id].feature = split.feature;
    nodes_[id].threshold = split.threshold;
    std::int32_t l = grow(left, depth + 1);
    std::int32_t r = grow(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  static double feature_value(const FeatureVector& v, std::uint32_t feature) {
    auto it = std::lower_bound(v.indices.begin(), v.indices.end(), feature);
    if (it == v.indices.end() || *it != feature) return 0.0;
    return v.values[static_cast<std::size_t>(it - v.indices.begin())];
  }

  Split best_split(const std::vector<std::size_t>& samples, const Stats& total) {
    // Bucket the node's non-zero entries per feature; absent entries are 0.
    std::vector<std::uint32_t> features;
    std::vector<std::vector<Entry>> buckets;
    for (std::size_t i : samples) {
      const auto& v = x_[i];
      for (std::size_t k = 0; k < v.nnz(); ++k) {
        std::uint32_t f = v.indices[k];
        if (f >= slot_.size()) continue;
        if (slot_[f] < 0) {
          slot_[f] = static_cast<std::int32_t>(features.size());
          features.push_back(f);
          buckets.emplace_back();
        }
        buckets[static_cast<std::size_t>(slot_[f])].push_back({v.values[k], i});
      }
    }
    for (std::uint32_t f : features) slot_[f] = -1;

    std::vector<std::size_t> order;
    for (std::size_t b = 0; b < features.size(); ++b) {
      if (!is_constant(buckets[b], samples.size())) order.push_back(b);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return features[a] < features[b]; });
    if (params_.max_features > 0 && order.size() > params_.max_features) {
      if (!rng_) throw Error(ErrorCode::kInvalidArgument, "max_features needs a random generator");
      rng_->shuffle(std::span<std::size_t>(order));
      order.resize(params_.max_features);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return features[a] < features[b]; });
    }

    Split best;
    double best_score = -std::numeric_limits<double>::infinity();
    const double tolerance = 1e-12 * std::max(1.0, std::abs(split_term(params_.criterion, total)));
    for (std::size_t b : order) {
      auto& bucket = buckets[b];
      std::sort(bucket.begin(), bucket.end(), [](const Entry& a, const Entry& c) {
        return a.value != c.value ? a.value < c.value : a.sample < c.sample;
      });
      // Distinct values in ascending order with their stats; the implicit
      // zeros join any explicit zero entries.
      std::vector<std::pair<double, Stats>> groups;
      Stats explicit_total;
      for (const Entry& e : bucket) explicit_total.add(weight_[e.sample], target_[e.sample]);
      Stats zeros = total.minus(explicit_total);
      zeros.n = samples.size() - bucket.size();
      bool zeros_placed = zeros.n == 0;
      auto push = [&](double value, double w, double t) {
        if (groups.empty() || groups.back().first != value) groups.push_back({value, Stats{}});
        groups.back().second.add(w, t);
      };
      for (const Entry& e : bucket) {
        if (!zeros_placed && e.value >= 0.0) {
          groups.push_back({0.0, zeros});
          zeros_placed = true;
        }
        push(e.value, weight_[e.sample], target_[e.sample]);
      }
      if (!zeros_placed) groups.push_back({0.0, zeros});

      Stats left;
      for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
        left = left.plus(groups[g].second);
        Stats right = total.minus(left);
        if (left.w <= 0.0 || right.w <= 0.0) continue;
        double score = split_term(params_.criterion, left) + split_term(params_.criterion, right);
        if (score > best_score + tolerance) {
          best_score = score;
          double lo = groups[g].first;
          double hi = groups[g + 1].first;
          double mid = lo + (hi - lo) / 2.0;
          best.feature = static_cast<std::int32_t>(features[b]);
          best.threshold = (mid >= hi) ? lo : mid;
        }
      }
    }
    return best;
  }

  static bool is_constant(const std::vector<Entry>& bucket, std::size_t node_size) {
    double first = bucket.size() < node_size ? 0.0 : bucket.front().value;
    for (const Entry& e : bucket) {
      if (e.value != first) return false;
    }
    return true;
  }

  const std::vector<FeatureVector>& x_;
  std::span<const double> target_;
  std::span<const double> weight_;
  const TreeParams& params_;
  Rng* rng_;
  const LeafValueFn& leaf_value_;
  std::vector<std::int32_t> slot_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

double gini_impurity(double weight_class1, double weight_total) {
  if (weight_total <= 0.0) return 0.0;
  double p = weight_class1 / weight_total;
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

std::vector<TreeNode> grow_tree(const std::vector<FeatureVector>& x, std::span<const double> target,
                                std::span<const double> weight, std::size_t dimension, const TreeParams& params,
                                Rng* rng, const LeafValueFn& leaf_value) {
  if (target.size() != x.size() || weight.size() != x.size()) {
    throw Error(ErrorCode::kInvalidArgument, "tree inputs have mismatched lengths");
  }
  return Grower(x, target, weight, dimension, params, rng, leaf_value).run();
}

double tree_predict(const std::vector<TreeNode>& nodes, const FeatureVector& x) {
  std::size_t id = 0;
  while (nodes[id].feature >= 0) {
    const TreeNode& n = nodes[id];
    auto f = static_cast<std::uint32_t>(n.feature);
    auto it = std::lower_bound(x.indices.begin(), x.indices.end(), f);
    double v = (it != x.indices.end() && *it == f) ? x.values[static_cast<std::size_t>(it - x.indices.begin())] : 0.0;
    id = static_cast<std::size_t>(v <= n.threshold ? n.left : n.right);
  }
  return nodes[id].value;
}

std::size_t tree_depth(const std::vector<TreeNode>& nodes) {
  if (nodes.empty()) return 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t depth = 0;
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    depth = std::max(depth, d);
    if (nodes[id].feature >= 0) {
      stack.push_back({static_cast<std::size_t>(nodes[id].left), d + 1});
      stack.push_back({static_cast<std::size_t>(nodes[id].right), d + 1});
    }
  }
  return depth;
}

void encode_tree(const std::vector<TreeNode>& nodes, BinaryWriter& out) {
  out.u64(nodes.size());
  for (const TreeNode& n : nodes) {
    out.u32(static_cast<std::uint32_t>(n.feature));
    out.f64(n.threshold);
    out.u32(static_cast<std::uint32_t>(n.left));
    out.u32(static_cast<std::uint32_t>(n.right));
    out.f64(n.value);
  }
}

std::vector<TreeNode> decode_tree(BinaryReader& in) {
  std::size_t count = in.count(28);
  if (count == 0) throw Error(ErrorCode::kIntegrity, "empty tree");
  std::vector<TreeNode> nodes(count);
  for (TreeNode& n : nodes) {
    n.feature = static_cast<std::int32_t>(in.u32());
    n.threshold = in.f64();
    n.left = static_cast<std::int32_t>(in.u32());
    n.right = static_cast<std::int32_t>(in.u32());
    n.value = in.f64();
  }
  // Children must point forward so prediction always terminates.
  for (std::size_t i = 0; i < count; ++i) {
    const TreeNode& n = nodes[i];
    if (n.feature < 0) continue;
    auto ok = [&](std::int32_t c) { return c > static_cast<std::int32_t>(i) && static_cast<std::size_t>(c) < count; };
    if (!ok(n.left) || !ok(n.right)) throw Error(ErrorCode::kIntegrity, "tree node links are invalid");
  }
  return nodes;
}

LeafValueFn class_share_leaf(std::span<const double> labels, std::span<const double> weight) {
  return [labels, weight](std::span<const std::size_t> samples) {
    double w = 0.0;
    double w1 = 0.0;
    for (std::size_t i : samples) {
      w += weight[i];
      w1 += weight[i] * labels[i];
    }
    return w > 0.0 ? w1 / w : 0.0;
  };
}

DecisionTree DecisionTree::fit(const ModelSpec& spec, const TrainingSet& data) {
  TreeParams params;
  params.max_depth = static_cast<std::size_t>(spec.get_int("max_depth", 0));
  params.min_samples_split = static_cast<std::size_t>(spec.get_int("min_samples_split", 2));
  std::vector<double> labels(data.y.begin(), data.y.end());
  std::vector<double> weight(data.size(), 1.0);
  DecisionTree tree;
  tree.nodes_ = grow_tree(data.x, labels, weight, data.dimension, params, nullptr, class_share_leaf(labels, weight));
  return tree;
}

DecisionTree DecisionTree::from_nodes(std::vector<TreeNode> nodes) {
  DecisionTree tree;
  tree.nodes_ = std::move(nodes);
  return tree;
}

DecisionTree DecisionTree::decode(BinaryReader& in) { return from_nodes(decode_tree(in)); }

}  // namespace fakewatch::model_hub
