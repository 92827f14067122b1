#include "fakewatch/model_hub/trained_model.hpp"

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/hash.hpp"

namespace fakewatch::model_hub {

features::FeatureVector Featurizer::vectorize(std::string_view text) const {
  return tfidf.transform(features::tokenize(text, tokenizer));
}

namespace {

void check_compatible(const TrainedModel& model, const FeatureVector& x) {
  if (!model.classifier) throw Error(ErrorCode::kState, "model has no fitted classifier");
  if (x.fingerprint != model.vocabulary_fingerprint) {
    throw Error(ErrorCode::kCompatibility, "feature vector vocabulary " + to_hex(x.fingerprint) +
                                               " does not match model vocabulary " +
                                               to_hex(model.vocabulary_fingerprint));
  }
}

}  // namespace

DecisionScore decision_score(const TrainedModel& model, const FeatureVector& x) {
  check_compatible(model, x);
  return {model.classifier->decision_score(x), model.classifier->score_kind()};
}

int predict_label(const TrainedModel& model, const FeatureVector& x) {
  DecisionScore s = decision_score(model, x);
  return label_from_score(s.value, s.kind);
}

}  // namespace fakewatch::model_hub
