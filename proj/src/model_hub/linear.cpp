#include "fakewatch/model_hub/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/rng.hpp"
#include "fakewatch/simd/kernels.hpp"

namespace fakewatch::model_hub {
namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double loss_value(LinearLoss loss, double m) {
  switch (loss) {
    case LinearLoss::kLogistic:
      return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
    case LinearLoss::kHinge:
      return std::max(0.0, 1.0 - m);
    case LinearLoss::kSquaredHinge: {
      double h = std::max(0.0, 1.0 - m);
      return h * h;
    }
  }
  return 0.0;
}

// d loss / d m (a subgradient for hinge).
double loss_derivative(LinearLoss loss, double m) {
  switch (loss) {
    case LinearLoss::kLogistic:
      return -sigmoid(-m);
    case LinearLoss::kHinge:
      return m < 1.0 ? -1.0 : 0.0;
    case LinearLoss::kSquaredHinge:
      return m < 1.0 ? -2.0 * (1.0 - m) : 0.0;
  }
  return 0.0;
}

double sign_of(int label) { return label == 1 ? 1.0 : -1.0; }

[[noreturn]] void diverged(std::size_t epoch) {
  throw Error(ErrorCode::kDivergence, "training loss became non-finite at epoch " + std::to_string(epoch));
}

void fit_batch(LinearLoss loss, const ModelSpec& spec, const TrainingSet& data, std::vector<double>& w, double& b,
               LinearFitTrace* trace) {
  const double lambda = regularization_strength(spec);
  const std::size_t max_iter = static_cast<std::size_t>(spec.get_int("max_iter", 1000));
  const double tol = spec.get_double("tol", 1e-6);

  double max_sq = 0.0;
  for (const auto& x : data.x) max_sq = std::max(max_sq, features::squared_norm(x));
  // Lipschitz bound of the gradient; the loss curvature is <= 1/4 (logistic)
  // or 2 (squared hinge).
  const double curvature = loss == LinearLoss::kLogistic ? 0.25 : 2.0;
  const double step = 1.0 / (curvature * (max_sq + 1.0) + lambda);

  std::vector<double> grad_w(w.size());
  double grad_b = 0.0;
  double prev = linear_objective(loss, w, b, data, lambda);
  if (!std::isfinite(prev)) diverged(0);
  if (trace) trace->objective.push_back(prev);
  for (std::size_t epoch = 1; epoch <= max_iter; ++epoch) {
    linear_gradient(loss, w, b, data, lambda, grad_w, grad_b);
    simd::axpy(-step, grad_w, w);
    b -= step * grad_b;
    double obj = linear_objective(loss, w, b, data, lambda);
    if (!std::isfinite(obj)) diverged(epoch);
    if (trace) {
      trace->epochs = epoch;
      trace->objective.push_back(obj);
    }
    if (std::abs(prev - obj) < tol) break;
    prev = obj;
  }
}

// Plain SGD on hinge loss + (alpha/2)||w||^2 with a constant learning rate.
// The weight vector is kept as scale * v so the shrink step is O(1).
void fit_sgd(const ModelSpec& spec, const TrainingSet& data, std::vector<double>& w, double& b,
             LinearFitTrace* trace) {
  const double alpha = spec.get_double("alpha", 1e-4);
  const double eta = spec.get_double("learning_rate", 0.01);
  const std::size_t max_iter = static_cast<std::size_t>(spec.get_int("max_iter", 1000));
  const double tol = spec.get_double("tol", 1e-3);
  const std::size_t patience = static_cast<std::size_t>(spec.get_int("n_iter_no_change", 5));
  const double shrink = 1.0 - eta * alpha;
  if (shrink <= 0.0) throw Error(ErrorCode::kInvalidArgument, "learning_rate * alpha must be below 1");

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(mix_seed(spec.seed, 0x736764));

  std::vector<double> v(w.size(), 0.0);
  double scale = 1.0;
  double best = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  for (std::size_t epoch = 1; epoch <= max_iter; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order) {
      const auto& x = data.x[i];
      const double s = sign_of(data.y[i]);
      const double m = s * (scale * features::dot_dense(x, v) + b);
      scale *= shrink;
      if (m < 1.0) {
        features::add_scaled(x, eta * s / scale, v);
        b += eta * s;
      }
      if (scale < 1e-9) {
        simd::scale(scale, v);
        scale = 1.0;
      }
    }
    std::copy(v.begin(), v.end(), w.begin());
    simd::scale(scale, w);
    double obj = linear_objective(LinearLoss::kHinge, w, b, data, alpha);
    if (!std::isfinite(obj)) diverged(epoch);
    if (trace) {
      trace->epochs = epoch;
      trace->objective.push_back(obj);
    }
    if (obj > best - tol) {
      if (++stale >= patience) break;
    } else {
      stale = 0;
    }
    best = std::min(best, obj);
  }
}

}  // namespace

LinearLoss loss_for(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kLogisticRegression:
      return LinearLoss::kLogistic;
    case Algorithm::kSgdHinge:
      return LinearLoss::kHinge;
    case Algorithm::kLinearSvc:
      return LinearLoss::kSquaredHinge;
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  "not a linear algorithm: " + std::string(algorithm_name(algorithm)));
  }
}

double regularization_strength(const ModelSpec& spec) {
  double alpha = spec.get_double("alpha", 0.0);
  if (alpha > 0.0) return alpha;
  return 1.0 / (spec.get_double("C", 1.0) * 10000.0);
}

double linear_objective(LinearLoss loss, const std::vector<double>& weights, double bias, const TrainingSet& data,
                        double lambda) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double m = sign_of(data.y[i]) * (features::dot_dense(data.x[i], weights) + bias);
    total += loss_value(loss, m);
  }
  return total / static_cast<double>(data.size()) + 0.5 * lambda * simd::dot(weights, weights);
}

void linear_gradient(LinearLoss loss, const std::vector<double>& weights, double bias, const TrainingSet& data,
                     double lambda, std::vector<double>& grad_w, double& grad_b) {
  grad_w.assign(weights.begin(), weights.end());
  simd::scale(lambda, grad_w);
  grad_b = 0.0;
  const double inv_n = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double s = sign_of(data.y[i]);
    const double m = s * (features::dot_dense(data.x[i], weights) + bias);
    const double d = loss_derivative(loss, m);
    if (d == 0.0) continue;
    features::add_scaled(data.x[i], d * s * inv_n, grad_w);
    grad_b += d * s * inv_n;
  }
}

LinearModel LinearModel::fit(const ModelSpec& spec, const TrainingSet& data, LinearFitTrace* trace) {
  LinearModel model;
  model.algorithm_ = spec.algorithm;
  const LinearLoss loss = loss_for(spec.algorithm);
  model.weights_.assign(data.dimension, 0.0);
  if (loss == LinearLoss::kHinge) {
    fit_sgd(spec, data, model.weights_, model.bias_, trace);
  } else {
    fit_batch(loss, spec, data, model.weights_, model.bias_, trace);
  }
  return model;
}

double LinearModel::margin(const FeatureVector& x) const { return features::dot_dense(x, weights_) + bias_; }

double LinearModel::decision_score(const FeatureVector& x) const {
  double m = margin(x);
  return algorithm_ == Algorithm::kLogisticRegression ? sigmoid(m) : m;
}

void LinearModel::encode(BinaryWriter& out) const {
  out.f64_vec(weights_);
  out.f64(bias_);
}

LinearModel LinearModel::decode(Algorithm algorithm, BinaryReader& in) {
  LinearModel model;
  model.algorithm_ = algorithm;
  model.weights_ = in.f64_vec();
  model.bias_ = in.f64();
  return model;
}

}  // namespace fakewatch::model_hub
