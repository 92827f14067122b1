#include <gtest/gtest.h>
#include <httplib.h>

#include <filesystem>
#include <json.hpp>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/hash.hpp"
#include "fakewatch/common/strings.hpp"
#include "fakewatch/features/key_terms.hpp"
#include "fakewatch/features/tfidf.hpp"
#include "fakewatch/features/tokenizer.hpp"
#include "fakewatch/labeling/agreement.hpp"
#include "fakewatch/model_hub/hub.hpp"
#include "fakewatch/service/api.hpp"
#include "fakewatch/service/highlight.hpp"
#include "fakewatch/service/http_server.hpp"

namespace fakewatch::service {
namespace {

using nlohmann::json;

const Timestamp kNow = make_timestamp(2024, 5, 1);

corpus::Record llm_record(const std::string& id, const std::string& text, int label) {
  corpus::Record r;
  r.id = id;
  r.text = text;
  r.label = corpus::label_from_int(label);
  r.label_provenance = corpus::LabelProvenance::kLlm;
  r.metadata["llm_confidence"] = "0.8000";
  return r;
}

std::string temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("fakewatch_svc_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

struct Fixture {
  std::shared_ptr<labeling::ReviewWorkflow> workflow;
  std::unique_ptr<ApiService> api;
  ServiceConfig config;

  explicit Fixture(corpus::Corpus corpus, std::vector<std::string> reviewers = {"a", "b"}) {
    workflow = std::make_shared<labeling::ReviewWorkflow>(std::move(corpus), "");
    workflow->open(reviewers, 42);
    config.roster = {{"a", "tok-a", make_timestamp(2030, 1, 1)},
                     {"b", "tok-b", make_timestamp(2030, 1, 1)},
                     {"lead", "tok-lead", make_timestamp(2030, 1, 1)},
                     {"old", "tok-old", make_timestamp(2020, 1, 1)}};
    config.key_terms = {"election fraud", "ballot"};
    rebuild();
  }
  void rebuild() {
    api = std::make_unique<ApiService>(config, workflow, [] { return kNow; });
  }
  ApiResponse call(const std::string& method, const std::string& path, const std::string& token,
                   const std::string& body = "") const {
    ApiRequest r;
    r.method = method;
    r.path = path;
    r.body = body;
    if (!token.empty()) r.headers["authorization"] = "Bearer " + token;
    return api->handle(r);
  }
  json data(const ApiResponse& r) const { return json::parse(r.body).at("data"); }
};

std::string verdict_body(const std::string& id, int label, std::uint64_t version, const std::string& note = "") {
  return json{{"record_id", id}, {"label", label}, {"assignment_version", version}, {"note", note}}.dump();
}

corpus::Corpus three_records() {
  corpus::Corpus c;
  c.records.push_back(llm_record("r0", "Claims of Election fraud spread; see http://evil.example/x or mail a@b.com", 1));
  c.records.push_back(llm_record("r1", "Ballot counting continued on schedule", 0));
  c.records.push_back(llm_record("r2", "Officials certified the ballot totals", 0));
  return c;
}

TEST(Highlight, CoversExactlyTheTermMatches) {
  std::string text = "Election fraud! ELECTION-FRAUD claims; electionfraud is not a match. Ballot, ballots.";
  auto spans = highlight_key_terms(text, {"election fraud", "ballot", "fraud"});
  std::vector<std::string> covered;
  for (const auto& s : spans) covered.push_back(text.substr(s.begin, s.end - s.begin) + "|" + s.term);
  EXPECT_EQ(covered, (std::vector<std::string>{"Election fraud|election fraud", "fraud|fraud",
                                               "ELECTION-FRAUD|election fraud", "FRAUD|fraud", "Ballot|ballot"}));
  corpus::Corpus c;
  c.records.push_back(llm_record("x", text, 1));
  auto counts = features::key_term_frequencies(c, {"election fraud", "ballot", "fraud"});
  EXPECT_EQ(counts["election fraud"], 2u);
  EXPECT_EQ(counts["fraud"], 2u);
  EXPECT_EQ(counts["ballot"], 1u);
}

TEST(Roster, ParsesAndRejects) {
  auto roster = parse_roster("# id token expiry\na\tsecret\t2030-01-01T00:00:00Z\n");
  ASSERT_EQ(roster.size(), 1u);
  EXPECT_EQ(roster[0].annotator_id, "a");
  EXPECT_THROW(parse_roster("a\tsecret\n"), Error);
  EXPECT_THROW(parse_roster("a\tx\t2030-01-01\nb\tx\t2030-01-01\n"), Error);
}

TEST(Service, RejectsMissingUnknownAndExpiredTokens) {
  Fixture f(three_records());
  EXPECT_EQ(f.call("GET", "/api/queue/next", "").status, 401);
  EXPECT_EQ(f.call("GET", "/api/queue/next", "nope").status, 401);
  auto expired = f.call("GET", "/api/queue/next", "tok-old");
  EXPECT_EQ(expired.status, 401);
  EXPECT_EQ(json::parse(expired.body)["error"]["code"], "authentication");
  EXPECT_EQ(f.call("GET", "/api/nowhere", "tok-a").status, 404);
}

TEST(Service, QueueReturnsOldestSanitizedAndHighlighted) {
  Fixture f(three_records());
  auto r = f.call("GET", "/api/queue/next", "tok-a");
  ASSERT_EQ(r.status, 200);
  auto d = f.data(r);
  EXPECT_EQ(d["record_id"], "r0");
  std::string text = d["text"];
  EXPECT_EQ(text.find("http"), std::string::npos);
  EXPECT_EQ(text.find("a@b.com"), std::string::npos);
  EXPECT_NE(text.find("[URL]"), std::string::npos);
  ASSERT_EQ(d["highlights"].size(), 1u);
  std::size_t b = d["highlights"][0]["begin"], e = d["highlights"][0]["end"];
  EXPECT_EQ(text.substr(b, e - b), "Election fraud");
  EXPECT_FALSE(d.contains("llm_label"));
  EXPECT_EQ(json::parse(r.body)["version"], 0);
  // Reading does not mutate.
  EXPECT_EQ(f.data(f.call("GET", "/api/queue/next", "tok-a"))["record_id"], "r0");
  EXPECT_EQ(f.call("GET", "/api/queue/next", "tok-lead").status, 204);
  EXPECT_TRUE(f.call("GET", "/api/queue/next", "tok-lead").body.empty());

  f.config.blind_review = false;
  f.rebuild();
  auto open = f.data(f.call("GET", "/api/queue/next", "tok-a"));
  EXPECT_EQ(open["llm_label"], 1);
  EXPECT_DOUBLE_EQ(open["llm_confidence"].get<double>(), 0.8);
}

TEST(Service, VerdictFlowWithVersions) {
  Fixture f(three_records());
  auto first = f.call("POST", "/api/verdicts", "tok-a", verdict_body("r0", 1, 0));
  ASSERT_EQ(first.status, 200) << first.body;
  EXPECT_EQ(f.data(first)["state"], "partially_reviewed");
  EXPECT_EQ(json::parse(first.body)["version"], 1);

  // Retry of the same verdict with the old token is answered, not applied.
  auto retry = f.call("POST", "/api/verdicts", "tok-a", verdict_body("r0", 1, 0));
  EXPECT_EQ(retry.status, 200);
  EXPECT_EQ(f.data(retry)["replayed"], true);
  EXPECT_EQ(f.workflow->assignment("r0")->verdicts.size(), 1u);

  auto flip = f.call("POST", "/api/verdicts", "tok-a", verdict_body("r0", 0, 1));
  EXPECT_EQ(flip.status, 409);

  auto stale = f.call("POST", "/api/verdicts", "tok-b", verdict_body("r0", 1, 0));
  EXPECT_EQ(stale.status, 409);
  EXPECT_EQ(f.workflow->assignment("r0")->version, 1u);

  auto second = f.call("POST", "/api/verdicts", "tok-b", verdict_body("r0", 1, 1));
  ASSERT_EQ(second.status, 200);
  EXPECT_EQ(f.data(second)["state"], "agreed");
  EXPECT_EQ(f.call("POST", "/api/verdicts", "tok-lead", verdict_body("r1", 1, 0)).status, 403);
  EXPECT_EQ(f.call("POST", "/api/verdicts", "tok-a", "{not json").status, 400);
  EXPECT_EQ(f.call("POST", "/api/verdicts", "tok-a", verdict_body("zz", 1, 0)).status, 404);
}

TEST(Service, ConflictsAndResolution) {
  Fixture f(three_records());
  f.call("POST", "/api/verdicts", "tok-a", verdict_body("r1", 1, 0, "see bob@example.org"));
  f.call("POST", "/api/verdicts", "tok-b", verdict_body("r1", 0, 1));
  auto list = f.data(f.call("GET", "/api/conflicts", "tok-lead"));
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0]["record_id"], "r1");
  EXPECT_EQ(list[0]["verdicts"][0]["note"], "see [EMAIL]");
  EXPECT_EQ(f.call("POST", "/api/resolutions", "tok-a", verdict_body("r1", 0, 2)).status, 403);
  auto ok = f.call("POST", "/api/resolutions", "tok-lead", verdict_body("r1", 0, 2));
  ASSERT_EQ(ok.status, 200) << ok.body;
  EXPECT_EQ(f.data(ok)["state"], "resolved");
  EXPECT_EQ(f.data(f.call("POST", "/api/resolutions", "tok-lead", verdict_body("r1", 0, 2)))["replayed"], true);
  EXPECT_EQ(f.call("POST", "/api/resolutions", "tok-lead", verdict_body("r0", 0, 0)).status, 409);
}

TEST(Service, AgreementMatchesLibrary) {
  corpus::Corpus c;
  for (int i = 0; i < 5; ++i) c.records.push_back(llm_record("r" + std::to_string(i), "text", 1));
  Fixture f(c);
  auto empty = f.data(f.call("GET", "/api/agreement", "tok-a"));
  EXPECT_EQ(empty["pairs"], 0);
  EXPECT_TRUE(empty["kappa"].is_null());

  const int first[] = {1, 1, 0, 0, 1}, second[] = {1, 0, 0, 0, 1};
  for (int i = 0; i < 5; ++i) {
    auto a = *f.workflow->assignment("r" + std::to_string(i));
    std::string tok0 = "tok-" + a.reviewers[0], tok1 = "tok-" + a.reviewers[1];
    ASSERT_EQ(f.call("POST", "/api/verdicts", tok0, verdict_body(a.record_id, first[i], 0)).status, 200);
    ASSERT_EQ(f.call("POST", "/api/verdicts", tok1, verdict_body(a.record_id, second[i], 1)).status, 200);
  }
  auto d = f.data(f.call("GET", "/api/agreement", "tok-lead"));
  auto lib = labeling::cohen_kappa(labeling::review_pairs(f.workflow->assignments()));
  EXPECT_EQ(d["kappa"].get<double>(), lib.kappa);
  EXPECT_NEAR(d["kappa"].get<double>(), 0.32 / 0.52, 1e-12);
  EXPECT_EQ(d["states"]["agreed"], 4);
  EXPECT_EQ(d["states"]["conflicted"], 1);
  EXPECT_EQ(d["per_annotator"]["a"], 5);
}

model_hub::TrainedModel toy_nb_model() {
  features::TokenizerConfig tok;
  std::vector<features::TokenizedDoc> docs;
  std::vector<int> y;
  for (int i = 0; i < 6; ++i) {
    docs.push_back(features::tokenize("shocking hoax exposed secret plot " + std::to_string(i), tok));
    y.push_back(1);
    docs.push_back(features::tokenize("official report committee budget vote " + std::to_string(i), tok));
    y.push_back(0);
  }
  features::TfidfOptions topt;
  topt.min_df = 1;
  auto tfidf = features::TfidfModel::fit(docs, topt);
  model_hub::TrainingSet data;
  data.x = tfidf.transform_all(docs);
  data.y = y;
  data.dimension = tfidf.dimension();
  auto m = model_hub::fit_model(model_hub::default_spec(model_hub::Algorithm::kMultinomialNb), data,
                                tfidf.fingerprint());
  auto fz = std::make_shared<model_hub::Featurizer>();
  fz->tokenizer = tok;
  fz->tfidf = tfidf;
  m.featurizer = fz;
  return m;
}

TEST(Service, PredictAndModels) {
  Fixture f(three_records());
  f.config.registry_dir = temp_dir("registry");
  model_hub::ModelRegistry(f.config.registry_dir).store("nb", toy_nb_model());
  f.rebuild();
  const std::string body = json{{"text", "A shocking hoax! Secret plot at https://x.example"}, {"model", "nb"}}.dump();
  auto r = f.call("POST", "/api/predict", "tok-a", body);
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(f.data(r)["label"], 1);
  EXPECT_GT(f.data(r)["score"].get<double>(), 0.5);
  EXPECT_EQ(f.data(r)["model"]["algorithm"], "multinomial_nb");
  EXPECT_EQ(f.call("POST", "/api/predict", "tok-a", body).body, r.body);
  auto real = f.call("POST", "/api/predict", "tok-a", json{{"text", "committee budget vote"}, {"model", "nb"}}.dump());
  EXPECT_EQ(f.data(real)["label"], 0);
  EXPECT_EQ(f.call("POST", "/api/predict", "tok-a", json{{"text", "x"}, {"model", "nope"}}.dump()).status, 404);
  EXPECT_EQ(f.call("POST", "/api/predict", "tok-a", json{{"text", "  "}, {"model", "nb"}}.dump()).status, 400);
  auto models = f.data(f.call("GET", "/api/models", "tok-a"));
  ASSERT_EQ(models.size(), 1u);
  EXPECT_EQ(models[0]["name"], "nb");
  std::filesystem::remove_all(f.config.registry_dir);
}

TEST(Service, AnalysisArtifacts) {
  Fixture f(three_records());
  f.config.analysis_dir = temp_dir("analysis");
  f.rebuild();
  auto missing = f.call("GET", "/api/analysis/network", "tok-a");
  EXPECT_EQ(missing.status, 404);
  EXPECT_NE(missing.body.find("fakewatch analyze network"), std::string::npos);
  EXPECT_EQ(f.call("GET", "/api/analysis/bogus", "tok-a").status, 404);
  const std::string artifact = R"({"nodes":[{"topic":0},{"topic":1}],"edges":[]})";
  write_file(f.config.analysis_dir + "/network.json", artifact);
  auto r = f.call("GET", "/api/analysis/network", "tok-a");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(f.data(r)["nodes"].size(), 2u);
  EXPECT_EQ(r.headers.at(kArtifactVersionHeader), to_hex(fnv1a(artifact)));
  EXPECT_EQ(json::parse(r.body)["version"], to_hex(fnv1a(artifact)));
  std::filesystem::remove_all(f.config.analysis_dir);
}

TEST(Service, HttpRoundTrip) {
  Fixture f(three_records());
  HttpServer server(*f.api);
  int port = server.start("127.0.0.1", 0);
  httplib::Client client("127.0.0.1", port);
  httplib::Headers auth = {{"Authorization", "Bearer tok-a"}};
  auto next = client.Get("/api/queue/next", auth);
  ASSERT_TRUE(next);
  EXPECT_EQ(next->status, 200);
  EXPECT_EQ(json::parse(next->body)["data"]["record_id"], "r0");
  auto post = client.Post("/api/verdicts", auth, verdict_body("r0", 1, 0), "application/json");
  ASSERT_TRUE(post);
  EXPECT_EQ(post->status, 200);
  auto none = client.Get("/api/queue/next", httplib::Headers{{"Authorization", "Bearer tok-lead"}});
  ASSERT_TRUE(none);
  EXPECT_EQ(none->status, 204);
  EXPECT_EQ(client.Get("/api/agreement")->status, 401);
  server.stop();
}

}  // namespace
}  // namespace fakewatch::service
