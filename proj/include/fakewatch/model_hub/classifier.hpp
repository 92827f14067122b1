#pragma once

#include <memory>

#include "fakewatch/model_hub/binary_io.hpp"
#include "fakewatch/model_hub/dataset.hpp"
#include "fakewatch/model_hub/model_spec.hpp"

namespace fakewatch::model_hub {

// kProbability scores are P(fake) in [0, 1], thresholded at 0.5.
// kMargin scores are signed distances, thresholded at 0.
// Labels are 1 only when the score is strictly above the threshold, so exact
// ties resolve to class 0.
enum class ScoreKind { kProbability, kMargin };

const char* to_string(ScoreKind kind);

inline int label_from_score(double score, ScoreKind kind) {
  return score > (kind == ScoreKind::kProbability ? 0.5 : 0.0) ? 1 : 0;
}

class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual Algorithm algorithm() const = 0;
  virtual ScoreKind score_kind() const = 0;
  virtual double decision_score(const FeatureVector& x) const = 0;
  virtual void encode(BinaryWriter& out) const = 0;

  int predict(const FeatureVector& x) const { return label_from_score(decision_score(x), score_kind()); }
};

std::unique_ptr<Classifier> decode_classifier(Algorithm algorithm, BinaryReader& in);

}  // namespace fakewatch::model_hub
