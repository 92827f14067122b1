#include "fakewatch/model_hub/registry.hpp"

#include <algorithm>
#include <filesystem>
#include <json.hpp>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/hash.hpp"
#include "fakewatch/common/strings.hpp"
#include "fakewatch/model_hub/serialization.hpp"

namespace fakewatch::model_hub {
namespace fs = std::filesystem;

namespace {

void check_name(const std::string& name) {
  if (name.empty() || name == "." || name == ".." ||
      name.find_first_of("/\\") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "invalid model name '" + name + "'");
  }
}

}  // namespace

std::string model_meta_json(const std::string& name, const TrainedModel& model) {
  nlohmann::ordered_json meta;
  meta["name"] = name;
  meta["algorithm"] = algorithm_name(model.spec.algorithm);
  meta["display_name"] = algorithm_display_name(model.spec.algorithm);
  meta["score_kind"] = model.classifier ? to_string(model.classifier->score_kind()) : "unknown";
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : model.spec.hyperparameters) {
    std::visit([&](const auto& x) { params[k] = x; }, v);
  }
  meta["hyperparameters"] = params;
  meta["seed"] = model.spec.seed;
  meta["vocabulary_fingerprint"] = to_hex(model.vocabulary_fingerprint);
  meta["format_version"] = model.format_version;
  meta["trained_at"] = format_iso8601(model.trained_at);
  meta["notes"] = model.notes;
  return meta.dump(2) + "\n";
}

void ModelRegistry::store(const std::string& name, const TrainedModel& model) const {
  check_name(name);
  fs::path dir = fs::path(root_) / name;
  fs::create_directories(dir);
  save_model(model, (dir / "model.fkw").string());
  write_file((dir / "meta.json").string(), model_meta_json(name, model));
}

TrainedModel ModelRegistry::load(const std::string& name) const {
  check_name(name);
  fs::path file = fs::path(root_) / name / "model.fkw";
  if (!fs::exists(file)) throw Error(ErrorCode::kNotFound, "model '" + name + "' is not registered");
  return load_model(file.string());
}

std::vector<std::string> ModelRegistry::names() const {
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::is_directory(root_, ec)) return out;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (entry.is_directory() && fs::exists(entry.path() / "model.fkw")) out.push_back(entry.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fakewatch::model_hub
