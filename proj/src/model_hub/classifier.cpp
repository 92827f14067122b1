#include "fakewatch/model_hub/classifier.hpp"

#include "fakewatch/model_hub/boosting.hpp"
#include "fakewatch/model_hub/forest.hpp"
#include "fakewatch/model_hub/kernel_svc.hpp"
#include "fakewatch/model_hub/knn.hpp"
#include "fakewatch/model_hub/linear.hpp"
#include "fakewatch/model_hub/naive_bayes.hpp"
#include "fakewatch/model_hub/tree.hpp"

namespace fakewatch::model_hub {

const char* to_string(ScoreKind kind) { return kind == ScoreKind::kProbability ? "probability" : "margin"; }

std::unique_ptr<Classifier> decode_classifier(Algorithm algorithm, BinaryReader& in) {
  switch (algorithm) {
    case Algorithm::kMultinomialNb:
    case Algorithm::kBernoulliNb:
      return std::make_unique<NaiveBayes>(NaiveBayes::decode(algorithm, in));
    case Algorithm::kLogisticRegression:
    case Algorithm::kSgdHinge:
    case Algorithm::kLinearSvc:
      return std::make_unique<LinearModel>(LinearModel::decode(algorithm, in));
    case Algorithm::kKernelSvcRbf:
      return std::make_unique<KernelSvc>(KernelSvc::decode(in));
    case Algorithm::kDecisionTree:
      return std::make_unique<DecisionTree>(DecisionTree::decode(in));
    case Algorithm::kRandomForest:
      return std::make_unique<RandomForest>(RandomForest::decode(in));
    case Algorithm::kAdaBoost:
      return std::make_unique<AdaBoost>(AdaBoost::decode(in));
    case Algorithm::kGradientBoosting:
      return std::make_unique<GradientBoosting>(GradientBoosting::decode(in));
    case Algorithm::kKnn:
      return std::make_unique<Knn>(Knn::decode(in));
  }
  return nullptr;
}

}  // namespace fakewatch::model_hub
