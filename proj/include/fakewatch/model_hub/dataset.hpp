#pragma once

#include <cstddef>
#include <vector>

#include "fakewatch/features/sparse.hpp"

namespace fakewatch::model_hub {

using features::FeatureVector;

struct TrainingSet {
  std::vector<FeatureVector> x;
  std::vector<int> y;  // 0 = real, 1 = fake
  std::size_t dimension = 0;

  std::size_t size() const { return x.size(); }
  std::size_t count(int label) const;
};

// Sizes agree, labels binary, indices sorted and < dimension, both classes present.
void validate_training_set(const TrainingSet& data);

}  // namespace fakewatch::model_hub
