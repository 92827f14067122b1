#include "fakewatch/model_hub/hub.hpp"

#include <initializer_list>

#include "fakewatch/common/error.hpp"
#include "fakewatch/model_hub/boosting.hpp"
#include "fakewatch/model_hub/forest.hpp"
#include "fakewatch/model_hub/kernel_svc.hpp"
#include "fakewatch/model_hub/knn.hpp"
#include "fakewatch/model_hub/linear.hpp"
#include "fakewatch/model_hub/naive_bayes.hpp"
#include "fakewatch/model_hub/tree.hpp"

namespace fakewatch::model_hub {
namespace {

void require_family(const ModelSpec& spec, std::initializer_list<Algorithm> family, const char* entry) {
  for (Algorithm a : family) {
    if (a == spec.algorithm) return;
  }
  throw Error(ErrorCode::kInvalidArgument,
              std::string(entry) + " cannot train '" + std::string(algorithm_name(spec.algorithm)) + "'");
}

template <typename Model>
TrainedModel wrap(const ModelSpec& spec, Model&& classifier, std::uint64_t fingerprint) {
  TrainedModel model;
  model.spec = spec;
  model.classifier = std::make_shared<std::decay_t<Model>>(std::forward<Model>(classifier));
  model.vocabulary_fingerprint = fingerprint;
  model.trained_at = now_utc();
  return model;
}

void prepare(const ModelSpec& spec, const TrainingSet& data) {
  validate_spec(spec);
  validate_training_set(data);
}

}  // namespace

TrainedModel fit_naive_bayes(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint) {
  require_family(spec, {Algorithm::kMultinomialNb, Algorithm::kBernoulliNb}, "fit_naive_bayes");
  prepare(spec, data);
  return wrap(spec, NaiveBayes::fit(spec, data), fingerprint);
}

TrainedModel fit_linear_model(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint) {
  require_family(spec, {Algorithm::kLogisticRegression, Algorithm::kSgdHinge, Algorithm::kLinearSvc},
                 "fit_linear_model");
  prepare(spec, data);
  LinearFitTrace trace;
  TrainedModel model = wrap(spec, LinearModel::fit(spec, data, &trace), fingerprint);
  model.notes["epochs"] = std::to_string(trace.epochs);
  return model;
}

TrainedModel fit_kernel_svc_rbf(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint) {
  require_family(spec, {Algorithm::kKernelSvcRbf}, "fit_kernel_svc_rbf");
  prepare(spec, data);
  KernelSvc svc = KernelSvc::fit(spec, data);
  std::size_t svs = svc.support_vector_count();
  std::size_t iters = svc.iterations();
  TrainedModel model = wrap(spec, std::move(svc), fingerprint);
  model.notes["support_vectors"] = std::to_string(svs);
  model.notes["smo_iterations"] = std::to_string(iters);
  return model;
}

TrainedModel fit_decision_tree(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint) {
  require_family(spec, {Algorithm::kDecisionTree}, "fit_decision_tree");
  prepare(spec, data);
  return wrap(spec, DecisionTree::fit(spec, data), fingerprint);
}

TrainedModel fit_random_forest(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint) {
  require_family(spec, {Algorithm::kRandomForest}, "fit_random_forest");
  prepare(spec, data);
  return wrap(spec, RandomForest::fit(spec, data), fingerprint);
}

TrainedModel fit_boosted(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint) {
  require_family(spec, {Algorithm::kAdaBoost, Algorithm::kGradientBoosting}, "fit_boosted");
  prepare(spec, data);
  if (spec.algorithm == Algorithm::kAdaBoost) {
    AdaBoost ada = AdaBoost::fit(spec, data);
    std::string status = ada.status();
    std::size_t stages = ada.stages().size();
    TrainedModel model = wrap(spec, std::move(ada), fingerprint);
    model.notes["status"] = status;
    model.notes["stages"] = std::to_string(stages);
    return model;
  }
  return wrap(spec, GradientBoosting::fit(spec, data), fingerprint);
}

TrainedModel fit_knn(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint) {
  require_family(spec, {Algorithm::kKnn}, "fit_knn");
  prepare(spec, data);
  return wrap(spec, Knn::fit(spec, data), fingerprint);
}

TrainedModel fit_model(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint) {
  switch (spec.algorithm) {
    case Algorithm::kMultinomialNb:
    case Algorithm::kBernoulliNb:
      return fit_naive_bayes(spec, data, fingerprint);
    case Algorithm::kLogisticRegression:
    case Algorithm::kSgdHinge:
    case Algorithm::kLinearSvc:
      return fit_linear_model(spec, data, fingerprint);
    case Algorithm::kKernelSvcRbf:
      return fit_kernel_svc_rbf(spec, data, fingerprint);
    case Algorithm::kDecisionTree:
      return fit_decision_tree(spec, data, fingerprint);
    case Algorithm::kRandomForest:
      return fit_random_forest(spec, data, fingerprint);
    case Algorithm::kAdaBoost:
    case Algorithm::kGradientBoosting:
      return fit_boosted(spec, data, fingerprint);
    case Algorithm::kKnn:
      return fit_knn(spec, data, fingerprint);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm");
}

}  // namespace fakewatch::model_hub
