#pragma once

#include <map>
#include <string>
#include <vector>

#include "fakewatch/model_hub/trained_model.hpp"

namespace fakewatch::model_hub {

// Directory layout: <root>/<name>/model.fkw plus <root>/<name>/meta.json.
class ModelRegistry {
 public:
  explicit ModelRegistry(std::string root) : root_(std::move(root)) {}

  void store(const std::string& name, const TrainedModel& model) const;
  TrainedModel load(const std::string& name) const;
  std::vector<std::string> names() const;
  const std::string& root() const { return root_; }

 private:
  std::string root_;
};

std::string model_meta_json(const std::string& name, const TrainedModel& model);

}  // namespace fakewatch::model_hub
