#include "fakewatch/model_hub/naive_bayes.hpp"

#include <cmath>

#include "fakewatch/common/error.hpp"

namespace fakewatch::model_hub {

double posterior_from_joint(const std::array<double, 2>& joint) {
  // sigmoid(j1 - j0), written to avoid overflow in either direction.
  double d = joint[1] - joint[0];
  if (d >= 0) return 1.0 / (1.0 + std::exp(-d));
  double e = std::exp(d);
  return e / (1.0 + e);
}

NaiveBayes NaiveBayes::fit(const ModelSpec& spec, const TrainingSet& data) {
  const bool bernoulli = spec.algorithm == Algorithm::kBernoulliNb;
  const double alpha = spec.get_double("alpha", 1.0);
  const bool fit_prior = spec.get_bool("fit_prior", true);
  const std::size_t dim = data.dimension;

  NaiveBayes nb;
  nb.algorithm_ = spec.algorithm;
  std::array<std::vector<double>, 2> counts{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  std::array<double, 2> docs{0.0, 0.0};
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int c = data.y[i];
    docs[c] += 1.0;
    const auto& x = data.x[i];
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      double v = x.values[k];
      if (bernoulli) {
        if (v > 0.0) counts[c][x.indices[k]] += 1.0;
      } else {
        if (v < 0.0) throw Error(ErrorCode::kInvalidArgument, "multinomial naive Bayes needs non-negative features");
        counts[c][x.indices[k]] += v;
      }
    }
  }
  for (int c = 0; c < 2; ++c) {
    if (docs[c] == 0.0) throw Error(ErrorCode::kInvalidArgument, "class " + std::to_string(c) + " absent from training data");
    nb.log_prior_[c] = fit_prior ? std::log(docs[c] / (docs[0] + docs[1])) : std::log(0.5);
    nb.log_prob_[c].resize(dim);
    if (bernoulli) {
      nb.log_neg_prob_[c].resize(dim);
      double total = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        double p = (counts[c][j] + alpha) / (docs[c] + 2.0 * alpha);
        nb.log_prob_[c][j] = std::log(p);
        nb.log_neg_prob_[c][j] = std::log1p(-p);
        total += nb.log_neg_prob_[c][j];
      }
      nb.log_neg_total_[c] = total;
    } else {
      double total = 0.0;
      for (double v : counts[c]) total += v;
      double denom = std::log(total + alpha * static_cast<double>(dim));
      for (std::size_t j = 0; j < dim; ++j) nb.log_prob_[c][j] = std::log(counts[c][j] + alpha) - denom;
    }
  }
  return nb;
}

std::array<double, 2> NaiveBayes::joint_log_likelihood(const FeatureVector& x) const {
  const bool bernoulli = algorithm_ == Algorithm::kBernoulliNb;
  std::array<double, 2> joint{};
  for (int c = 0; c < 2; ++c) {
    double s = log_prior_[c];
    if (bernoulli) s += log_neg_total_[c];
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      std::uint32_t j = x.indices[k];
      if (j >= log_prob_[c].size()) continue;
      if (bernoulli) {
        if (x.values[k] > 0.0) s += log_prob_[c][j] - log_neg_prob_[c][j];
      } else {
        s += x.values[k] * log_prob_[c][j];
      }
    }
    joint[c] = s;
  }
  return joint;
}

double NaiveBayes::decision_score(const FeatureVector& x) const {
  return posterior_from_joint(joint_log_likelihood(x));
}

void NaiveBayes::encode(BinaryWriter& out) const {
  for (int c = 0; c < 2; ++c) {
    out.f64(log_prior_[c]);
    out.f64_vec(log_prob_[c]);
    if (algorithm_ == Algorithm::kBernoulliNb) {
      out.f64_vec(log_neg_prob_[c]);
      out.f64(log_neg_total_[c]);
    }
  }
}

NaiveBayes NaiveBayes::decode(Algorithm algorithm, BinaryReader& in) {
  NaiveBayes nb;
  nb.algorithm_ = algorithm;
  for (int c = 0; c < 2; ++c) {
    nb.log_prior_[c] = in.f64();
    nb.log_prob_[c] = in.f64_vec();
    if (algorithm == Algorithm::kBernoulliNb) {
      nb.log_neg_prob_[c] = in.f64_vec();
      nb.log_neg_total_[c] = in.f64();
      if (nb.log_neg_prob_[c].size() != nb.log_prob_[c].size()) {
        throw Error(ErrorCode::kIntegrity, "naive Bayes parameter length mismatch");
      }
    }
  }
  if (nb.log_prob_[0].size() != nb.log_prob_[1].size()) {
    throw Error(ErrorCode::kIntegrity, "naive Bayes parameter length mismatch");
  }
  return nb;
}

}  // namespace fakewatch::model_hub
