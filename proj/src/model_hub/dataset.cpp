#include "fakewatch/model_hub/dataset.hpp"

#include <algorithm>
#include <string>

#include "fakewatch/common/error.hpp"

namespace fakewatch::model_hub {

std::size_t TrainingSet::count(int label) const {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), label));
}

void validate_training_set(const TrainingSet& data) {
  if (data.x.size() != data.y.size()) throw Error(ErrorCode::kInvalidArgument, "feature/label count mismatch");
  if (data.x.empty()) throw Error(ErrorCode::kInvalidArgument, "empty training set");
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    if (data.y[i] != 0 && data.y[i] != 1) {
      throw Error(ErrorCode::kInvalidArgument, "label at row " + std::to_string(i) + " is not binary");
    }
    const auto& idx = data.x[i].indices;
    if (idx.size() != data.x[i].values.size()) {
      throw Error(ErrorCode::kInvalidArgument, "row " + std::to_string(i) + ": index/value length mismatch");
    }
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] >= data.dimension || (k > 0 && idx[k] <= idx[k - 1])) {
        throw Error(ErrorCode::kInvalidArgument, "row " + std::to_string(i) + ": indices unsorted or out of range");
      }
    }
  }
  for (int c = 0; c < 2; ++c) {
    if (data.count(c) == 0) {
      throw Error(ErrorCode::kInvalidArgument, "class " + std::to_string(c) + " is absent from the training data");
    }
  }
}

}  // namespace fakewatch::model_hub
