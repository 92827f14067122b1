#pragma once

#include <cstdint>

#include "fakewatch/model_hub/trained_model.hpp"

namespace fakewatch::model_hub {

// Entry points per algorithm family; each validates that spec.algorithm
// belongs to the family.
TrainedModel fit_naive_bayes(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint = 0);
TrainedModel fit_linear_model(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint = 0);
TrainedModel fit_kernel_svc_rbf(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint = 0);
TrainedModel fit_decision_tree(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint = 0);
TrainedModel fit_random_forest(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint = 0);
TrainedModel fit_boosted(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint = 0);
TrainedModel fit_knn(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint = 0);

// Dispatches on spec.algorithm.
TrainedModel fit_model(const ModelSpec& spec, const TrainingSet& data, std::uint64_t fingerprint = 0);

}  // namespace fakewatch::model_hub
