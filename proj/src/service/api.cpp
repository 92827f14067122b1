#include "fakewatch/service/api.hpp"

#include <filesystem>
#include <json.hpp>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/hash.hpp"
#include "fakewatch/common/strings.hpp"
#include "fakewatch/corpus/text.hpp"
#include "fakewatch/labeling/agreement.hpp"
#include "fakewatch/model_hub/model_spec.hpp"
#include "fakewatch/service/highlight.hpp"

namespace fakewatch::service {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<ApiSession> parse_roster(std::string_view contents) {
  std::vector<ApiSession> out;
  std::size_t line_no = 0;
  for (const std::string& raw : split(contents, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw Error(ErrorCode::kParse, "roster line " + std::to_string(line_no) + ": expected id, token and expiry");
    }
    auto expires = parse_timestamp(trim(fields[2]));
    if (!expires) throw Error(ErrorCode::kParse, "roster line " + std::to_string(line_no) + ": bad expiry timestamp");
    ApiSession s{std::string(trim(fields[0])), std::string(trim(fields[1])), *expires};
    if (s.annotator_id.empty() || s.token.empty()) {
      throw Error(ErrorCode::kParse, "roster line " + std::to_string(line_no) + ": empty id or token");
    }
    for (const auto& other : out) {
      if (other.token == s.token) throw Error(ErrorCode::kParse, "roster tokens must be unique");
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ApiSession> load_roster(const std::string& path) { return parse_roster(read_file(path)); }

const std::vector<std::string>& analysis_kinds() {
  static const std::vector<std::string> kinds = {"topics", "network", "liwc", "sentiment", "keyterms", "embedding"};
  return kinds;
}

namespace {

ApiResponse envelope(int status, ordered_json data, ordered_json version = nullptr) {
  ordered_json body;
  body["data"] = std::move(data);
  body["version"] = std::move(version);
  body["error"] = nullptr;
  ApiResponse r;
  r.status = status;
  r.headers["Content-Type"] = "application/json";
  r.body = body.dump();
  return r;
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAuthentication:
      return 401;
    case ErrorCode::kAuthorization:
      return 403;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
    case ErrorCode::kState:
      return 409;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kFormat:
    case ErrorCode::kCompatibility:
      return 400;
    default:
      return 500;
  }
}

ApiResponse error_response(ErrorCode code, const std::string& message) {
  ordered_json body;
  body["data"] = nullptr;
  body["version"] = nullptr;
  body["error"] = {{"code", std::string(error_code_name(code))}, {"message", corpus::sanitize_text(message)}};
  ApiResponse r;
  r.status = status_for(code);
  r.headers["Content-Type"] = "application/json";
  r.body = body.dump();
  return r;
}

json parse_body(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::kParse, "request body must be a JSON object");
  return j;
}

std::string require_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw Error(ErrorCode::kInvalidArgument, std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

std::int64_t require_int(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("missing integer field '") + key + "'");
  }
  return it->get<std::int64_t>();
}

ordered_json assignment_status(const labeling::ReviewAssignment& a) {
  return {{"record_id", a.record_id},
          {"state", labeling::to_string(a.state)},
          {"verdicts", a.verdicts.size()},
          {"assignment_version", a.version}};
}

ordered_json verdict_json(const labeling::AnnotationVerdict& v) {
  return {{"annotator_id", v.annotator_id},
          {"label", v.label},
          {"note", corpus::sanitize_text(v.note)},
          {"submitted_at", format_iso8601(v.submitted_at)}};
}

ordered_json llm_fields(const corpus::Record& r) {
  ordered_json j;
  j["llm_label"] = r.is_labeled() ? ordered_json(r.label_value()) : ordered_json(nullptr);
  auto it = r.metadata.find("llm_confidence");
  j["llm_confidence"] = it == r.metadata.end() ? ordered_json(nullptr) : ordered_json(std::stod(it->second));
  return j;
}

}  // namespace

ApiService::ApiService(ServiceConfig config, std::shared_ptr<labeling::ReviewWorkflow> workflow,
                       std::function<Timestamp()> clock)
    : config_(std::move(config)), workflow_(std::move(workflow)), clock_(std::move(clock)) {
  if (!config_.registry_dir.empty()) registry_.emplace(config_.registry_dir);
}

const ApiSession& ApiService::authenticate(const ApiRequest& request) const {
  auto it = request.headers.find("authorization");
  constexpr std::string_view kBearer = "Bearer ";
  if (it == request.headers.end() || !starts_with_icase(it->second, kBearer)) {
    throw Error(ErrorCode::kAuthentication, "missing bearer token");
  }
  std::string token(trim(std::string_view(it->second).substr(kBearer.size())));
  for (const auto& s : config_.roster) {
    if (s.token != token) continue;
    if (clock_() >= s.expires_at) throw Error(ErrorCode::kAuthentication, "session expired");
    return s;
  }
  throw Error(ErrorCode::kAuthentication, "unknown token");
}

ApiResponse ApiService::handle(const ApiRequest& request) const {
  try {
    const ApiSession& session = authenticate(request);
    const std::string& p = request.path;
    const bool get = request.method == "GET";
    const bool post = request.method == "POST";
    if (get && p == "/api/queue/next") return next_record(session);
    if (post && p == "/api/verdicts") return post_verdict(session, request.body);
    if (post && p == "/api/resolutions") return post_resolution(session, request.body);
    if (get && p == "/api/conflicts") return conflicts();
    if (get && p == "/api/agreement") return agreement();
    if (post && p == "/api/predict") return predict(request.body);
    if (get && p == "/api/models") return models();
    constexpr std::string_view kAnalysis = "/api/analysis/";
    if (get && p.rfind(kAnalysis, 0) == 0) return analysis(p.substr(kAnalysis.size()));
    throw Error(ErrorCode::kNotFound, "no route for " + request.method + " " + p);
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  } catch (const std::exception& e) {
    return error_response(ErrorCode::kIo, e.what());
  }
}

ApiResponse ApiService::next_record(const ApiSession& session) const {
  if (!workflow_) throw Error(ErrorCode::kNotFound, "review workflow is not running");
  auto next = workflow_->next_for(session.annotator_id);
  if (!next) {
    ApiResponse r;
    r.status = 204;
    return r;
  }
  auto record = workflow_->record(next->record_id);
  if (!record) throw Error(ErrorCode::kNotFound, "record " + next->record_id + " disappeared");
  const std::string text = corpus::sanitize_text(record->text);
  ordered_json data;
  data["record_id"] = next->record_id;
  data["text"] = text;
  data["highlights"] = ordered_json::array();
  for (const auto& h : highlight_key_terms(text, config_.key_terms)) {
    data["highlights"].push_back({{"begin", h.begin}, {"end", h.end}, {"term", h.term}});
  }
  data["state"] = labeling::to_string(next->state);
  data["assignment_version"] = next->version;
  data["blind_review"] = config_.blind_review;
  if (!config_.blind_review) data.update(llm_fields(*record));
  return envelope(200, std::move(data), next->version);
}

ApiResponse ApiService::post_verdict(const ApiSession& session, const std::string& body) const {
  if (!workflow_) throw Error(ErrorCode::kNotFound, "review workflow is not running");
  json j = parse_body(body);
  const std::string record_id = require_string(j, "record_id");
  const std::int64_t label = require_int(j, "label");
  const std::int64_t version = require_int(j, "assignment_version");
  const std::string note = j.value("note", "");
  if (version < 0) throw Error(ErrorCode::kInvalidArgument, "assignment_version must be non-negative");

  auto current = workflow_->assignment(record_id);
  if (!current) throw Error(ErrorCode::kNotFound, "no assignment for record " + record_id);
  if (!current->is_reviewer(session.annotator_id)) {
    throw Error(ErrorCode::kAuthorization, session.annotator_id + " is not a reviewer of " + record_id);
  }
  // A retry of an already applied verdict answers with the current state
  // instead of mutating again.
  for (const auto& v : current->verdicts) {
    if (v.annotator_id == session.annotator_id && v.label == label &&
        static_cast<std::uint64_t>(version) < current->version) {
      auto data = assignment_status(*current);
      data["replayed"] = true;
      return envelope(200, std::move(data), current->version);
    }
  }
  labeling::AnnotationVerdict v;
  v.annotator_id = session.annotator_id;
  v.label = static_cast<int>(label);
  v.note = note;
  v.submitted_at = clock_();
  auto updated = workflow_->submit(record_id, v, static_cast<std::uint64_t>(version));
  auto data = assignment_status(updated);
  data["replayed"] = false;
  return envelope(200, std::move(data), updated.version);
}

ApiResponse ApiService::post_resolution(const ApiSession& session, const std::string& body) const {
  if (!workflow_) throw Error(ErrorCode::kNotFound, "review workflow is not running");
  json j = parse_body(body);
  const std::string record_id = require_string(j, "record_id");
  const std::int64_t label = require_int(j, "label");
  const std::int64_t version = require_int(j, "assignment_version");
  if (version < 0) throw Error(ErrorCode::kInvalidArgument, "assignment_version must be non-negative");
  auto current = workflow_->assignment(record_id);
  if (!current) throw Error(ErrorCode::kNotFound, "no assignment for record " + record_id);
  if (current->resolution && current->resolution->annotator_id == session.annotator_id &&
      current->resolution->label == label && static_cast<std::uint64_t>(version) < current->version) {
    auto data = assignment_status(*current);
    data["replayed"] = true;
    return envelope(200, std::move(data), current->version);
  }
  labeling::AnnotationVerdict v;
  v.annotator_id = session.annotator_id;
  v.label = static_cast<int>(label);
  v.note = j.value("note", "");
  v.submitted_at = clock_();
  auto updated = workflow_->resolve(record_id, v, static_cast<std::uint64_t>(version));
  auto data = assignment_status(updated);
  data["replayed"] = false;
  return envelope(200, std::move(data), updated.version);
}

ApiResponse ApiService::conflicts() const {
  if (!workflow_) throw Error(ErrorCode::kNotFound, "review workflow is not running");
  ordered_json list = ordered_json::array();
  for (const auto& a : workflow_->conflicts()) {
    auto item = assignment_status(a);
    item["reviewers"] = {a.reviewers[0], a.reviewers[1]};
    item["verdicts"] = ordered_json::array();
    for (const auto& v : a.verdicts) item["verdicts"].push_back(verdict_json(v));
    if (auto r = workflow_->record(a.record_id)) {
      item["text"] = corpus::sanitize_text(r->text);
      if (!config_.blind_review) item.update(llm_fields(*r));
    }
    list.push_back(std::move(item));
  }
  return envelope(200, std::move(list));
}

ApiResponse ApiService::agreement() const {
  if (!workflow_) throw Error(ErrorCode::kNotFound, "review workflow is not running");
  auto all = workflow_->assignments();
  auto pairs = labeling::review_pairs(all);
  ordered_json data;
  if (pairs.empty()) {
    data["pairs"] = 0;
    data["observed_agreement"] = nullptr;
    data["expected_agreement"] = nullptr;
    data["kappa"] = nullptr;
    data["contingency"] = nullptr;
  } else {
    auto report = labeling::cohen_kappa(pairs);
    data["pairs"] = report.pairs;
    data["observed_agreement"] = report.observed_agreement;
    data["expected_agreement"] = report.expected_agreement;
    data["kappa"] = report.kappa;
    data["contingency"] = {{report.contingency[0][0], report.contingency[0][1]},
                           {report.contingency[1][0], report.contingency[1][1]}};
  }
  std::map<std::string, std::size_t> states;
  for (auto s : {labeling::ReviewState::kPending, labeling::ReviewState::kPartiallyReviewed,
                 labeling::ReviewState::kAgreed, labeling::ReviewState::kConflicted,
                 labeling::ReviewState::kResolved}) {
    states[labeling::to_string(s)] = 0;
  }
  for (const auto& a : all) ++states[labeling::to_string(a.state)];
  data["states"] = states;
  data["per_annotator"] = labeling::verdict_counts(all);
  return envelope(200, std::move(data));
}

std::shared_ptr<const model_hub::TrainedModel> ApiService::model(const std::string& name) const {
  if (!registry_) throw Error(ErrorCode::kNotFound, "no model registry configured");
  std::lock_guard lock(models_mu_);
  auto it = models_.find(name);
  if (it != models_.end()) return it->second;
  auto names = registry_->names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw Error(ErrorCode::kNotFound, "unknown model '" + name + "'");
  }
  auto loaded = std::make_shared<const model_hub::TrainedModel>(registry_->load(name));
  models_[name] = loaded;
  return loaded;
}

ApiResponse ApiService::predict(const std::string& body) const {
  json j = parse_body(body);
  const std::string text = require_string(j, "text");
  const std::string name = require_string(j, "model");
  if (trim(text).empty()) throw Error(ErrorCode::kEmptyInput, "text is empty");
  auto m = model(name);
  if (!m->featurizer) throw Error(ErrorCode::kState, "model '" + name + "' was stored without a featurizer");
  auto x = m->featurizer->vectorize(corpus::sanitize_text(text));
  auto score = model_hub::decision_score(*m, x);
  ordered_json data;
  data["label"] = model_hub::label_from_score(score.value, score.kind);
  data["score"] = score.value;
  data["score_kind"] = model_hub::to_string(score.kind);
  data["model"] = {{"name", name},
                   {"algorithm", std::string(model_hub::algorithm_name(m->spec.algorithm))},
                   {"display_name", std::string(model_hub::algorithm_display_name(m->spec.algorithm))},
                   {"vocabulary_fingerprint", to_hex(m->vocabulary_fingerprint)},
                   {"format_version", m->format_version}};
  return envelope(200, std::move(data));
}

ApiResponse ApiService::analysis(const std::string& kind) const {
  const auto& kinds = analysis_kinds();
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
    throw Error(ErrorCode::kNotFound, "unknown analysis kind '" + kind + "'");
  }
  const auto path = std::filesystem::path(config_.analysis_dir) / (kind + ".json");
  std::error_code ec;
  if (config_.analysis_dir.empty() || !std::filesystem::exists(path, ec)) {
    throw Error(ErrorCode::kNotFound, "no " + kind + " artifact yet; run `fakewatch analyze " + kind + "` first");
  }
  const std::string contents = read_file(path.string());
  ordered_json data = ordered_json::parse(contents, nullptr, false);
  if (data.is_discarded()) throw Error(ErrorCode::kParse, "artifact " + path.string() + " is not valid JSON");
  const std::string version = to_hex(fnv1a(contents));
  auto r = envelope(200, std::move(data), version);
  r.headers[kArtifactVersionHeader] = version;
  return r;
}

ApiResponse ApiService::models() const {
  ordered_json list = ordered_json::array();
  if (registry_) {
    for (const auto& name : registry_->names()) {
      const auto meta = std::filesystem::path(registry_->root()) / name / "meta.json";
      ordered_json j = ordered_json::parse(read_file(meta.string()), nullptr, false);
      list.push_back(j.is_discarded() ? ordered_json{{"name", name}} : j);
    }
  }
  return envelope(200, std::move(list));
}

}  // namespace fakewatch::service
