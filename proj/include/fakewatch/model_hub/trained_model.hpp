#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "fakewatch/common/time.hpp"
#include "fakewatch/features/tfidf.hpp"
#include "fakewatch/features/tokenizer.hpp"
#include "fakewatch/model_hub/classifier.hpp"

namespace fakewatch::model_hub {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// Text-to-vector front end stored alongside a model so it can score raw text.
struct Featurizer {
  features::TokenizerConfig tokenizer;
  features::TfidfModel tfidf;

  features::FeatureVector vectorize(std::string_view text) const;
};

struct DecisionScore {
  double value = 0.0;
  ScoreKind kind = ScoreKind::kProbability;
};

// Immutable after fit; copies share the fitted parameters.
struct TrainedModel {
  ModelSpec spec;
  std::shared_ptr<const Classifier> classifier;
  std::uint64_t vocabulary_fingerprint = 0;
  Timestamp trained_at = kSentinelTimestamp;
  std::uint32_t format_version = kModelFormatVersion;
  std::shared_ptr<const Featurizer> featurizer;
  std::map<std::string, std::string> notes;
};

// Throws kCompatibility when the vector came from a different vocabulary.
DecisionScore decision_score(const TrainedModel& model, const FeatureVector& x);
int predict_label(const TrainedModel& model, const FeatureVector& x);

}  // namespace fakewatch::model_hub
