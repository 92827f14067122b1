#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fakewatch/common/time.hpp"
#include "fakewatch/labeling/workflow.hpp"
#include "fakewatch/model_hub/registry.hpp"

namespace fakewatch::service {

struct ApiSession {
  std::string annotator_id;
  std::string token;
  Timestamp expires_at = kSentinelTimestamp;
};

// "annotator_id<TAB>token<TAB>expires_at" per line, '#' comments allowed.
std::vector<ApiSession> parse_roster(std::string_view contents);
std::vector<ApiSession> load_roster(const std::string& path);

struct ServiceConfig {
  std::vector<ApiSession> roster;
  bool blind_review = true;  // hide the LLM label from reviewers
  std::vector<std::string> key_terms;
  std::string analysis_dir;  // where the CLI materializes analysis artifacts
  std::string registry_dir;  // model registry root; empty disables predict
};

struct ApiRequest {
  std::string method;  // "GET" / "POST"
  std::string path;
  std::map<std::string, std::string> headers;  // lowercase names
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::map<std::string, std::string> headers;
  std::string body;  // JSON envelope {data, version, error}; empty for 204
};

inline constexpr const char* kArtifactVersionHeader = "X-Artifact-Version";

// Analysis kinds served from <analysis_dir>/<kind>.json.
const std::vector<std::string>& analysis_kinds();

// Transport-independent request handling; the HTTP server is a thin adapter.
// Safe to call from many threads at once.
class ApiService {
 public:
  ApiService(ServiceConfig config, std::shared_ptr<labeling::ReviewWorkflow> workflow,
             std::function<Timestamp()> clock = now_utc);

  ApiResponse handle(const ApiRequest& request) const;

 private:
  const ApiSession& authenticate(const ApiRequest& request) const;
  ApiResponse next_record(const ApiSession& session) const;
  ApiResponse post_verdict(const ApiSession& session, const std::string& body) const;
  ApiResponse post_resolution(const ApiSession& session, const std::string& body) const;
  ApiResponse conflicts() const;
  ApiResponse agreement() const;
  ApiResponse predict(const std::string& body) const;
  ApiResponse analysis(const std::string& kind) const;
  ApiResponse models() const;
  std::shared_ptr<const model_hub::TrainedModel> model(const std::string& name) const;

  ServiceConfig config_;
  std::shared_ptr<labeling::ReviewWorkflow> workflow_;
  std::function<Timestamp()> clock_;
  std::optional<model_hub::ModelRegistry> registry_;
  mutable std::mutex models_mu_;
  mutable std::map<std::string, std::shared_ptr<const model_hub::TrainedModel>> models_;
};

}  // namespace fakewatch::service
