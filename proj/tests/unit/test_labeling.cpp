#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/rng.hpp"
#include "fakewatch/labeling/agreement.hpp"
#include "fakewatch/labeling/event_log.hpp"
#include "fakewatch/labeling/labeler.hpp"
#include "fakewatch/labeling/prompt.hpp"
#include "fakewatch/labeling/review.hpp"
#include "fakewatch/labeling/workflow.hpp"

namespace fakewatch::labeling {
namespace {

using corpus::Corpus;
using corpus::Label;
using corpus::LabelProvenance;
using corpus::Record;

Record llm_record(const std::string& id, int label) {
  Record r;
  r.id = id;
  r.text = "article text for " + id;
  r.label = corpus::label_from_int(label);
  r.label_provenance = LabelProvenance::kLlm;
  return r;
}

Corpus llm_corpus(int n) {
  Corpus c;
  for (int i = 0; i < n; ++i) c.records.push_back(llm_record("r" + std::to_string(i), i % 2));
  return c;
}

AnnotationVerdict vote(const std::string& who, int label) {
  AnnotationVerdict v;
  v.annotator_id = who;
  v.label = label;
  v.submitted_at = Timestamp(std::chrono::seconds(1700000000));
  return v;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

std::string temp_path(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("fakewatch_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove(p);
  return p.string();
}

// ---- kappa ----

AgreementReport kappa_of(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) pairs.emplace_back(a[i], b[i]);
  return cohen_kappa(pairs);
}

TEST(Kappa, PerfectAgreementMixedClasses) {
  auto r = kappa_of({1, 0, 1, 0, 1}, {1, 0, 1, 0, 1});
  EXPECT_DOUBLE_EQ(r.kappa, 1.0);
  EXPECT_DOUBLE_EQ(r.observed_agreement, 1.0);
}

TEST(Kappa, PerfectDisagreementBalanced) {
  EXPECT_DOUBLE_EQ(kappa_of({1, 0, 1, 0}, {0, 1, 0, 1}).kappa, -1.0);
}

TEST(Kappa, HandContingencyTable) {
  // a=1,b=1: 2; a=1,b=0: 1; a=0,b=0: 2. Marginals A 3/5, B 2/5 fake.
  // p_e = 0.6*0.4 + 0.4*0.6 = 0.48, kappa = 0.32/0.52.
  auto r = kappa_of({1, 1, 0, 0, 1}, {1, 0, 0, 0, 1});
  EXPECT_NEAR(r.observed_agreement, 0.8, 1e-12);
  EXPECT_NEAR(r.expected_agreement, 0.48, 1e-12);
  EXPECT_NEAR(r.kappa, 0.32 / 0.52, 1e-12);
  EXPECT_NEAR(r.kappa, 0.6154, 1e-4);
  EXPECT_EQ(r.contingency[1][1], 2u);
  EXPECT_EQ(r.contingency[1][0], 1u);
  EXPECT_EQ(r.contingency[0][1], 0u);
  EXPECT_EQ(r.contingency[0][0], 2u);
  EXPECT_EQ(r.pairs, 5u);
}

TEST(Kappa, DegenerateMarginals) {
  EXPECT_DOUBLE_EQ(kappa_of({1, 1, 1}, {1, 1, 1}).kappa, 1.0);
  auto r = kappa_of({1, 1}, {0, 0});
  EXPECT_DOUBLE_EQ(r.expected_agreement, 0.0);
  EXPECT_DOUBLE_EQ(r.kappa, 0.0);
}

TEST(Kappa, RejectsEmptyAndNonBinary) {
  EXPECT_EQ(code_of([] { cohen_kappa({}); }), ErrorCode::kEmptyInput);
  EXPECT_EQ(code_of([] { kappa_of({2}, {1}); }), ErrorCode::kInvalidArgument);
}

TEST(Kappa, BoundsPropertyOnRandomPairs) {
  Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t n = 1 + rng.uniform_index(30);
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      pairs.emplace_back(static_cast<int>(rng.uniform_index(2)), static_cast<int>(rng.uniform_index(2)));
    }
    auto r = cohen_kappa(pairs);
    ASSERT_GE(r.kappa, -1.0 - 1e-12);
    ASSERT_LE(r.kappa, 1.0 + 1e-12);
    std::uint64_t total = r.contingency[0][0] + r.contingency[0][1] + r.contingency[1][0] + r.contingency[1][1];
    ASSERT_EQ(total, n);
    if (r.expected_agreement < 1.0) {
      ASSERT_EQ(r.kappa == 1.0, r.observed_agreement == 1.0);
      ASSERT_NEAR(r.kappa, (r.observed_agreement - r.expected_agreement) / (1.0 - r.expected_agreement), 1e-12);
    }
  }
}

// ---- prompt ----

TEST(Prompt, Substitutes) {
  Record r;
  r.text = "abc";
  EXPECT_EQ(build_label_prompt(LabelPrompt("Classify: {article}", 100), r), "Classify: abc");
}

TEST(Prompt, TruncatesAtWordBoundary) {
  Record r;
  r.text = "alpha beta gamma delta";
  EXPECT_EQ(build_label_prompt(LabelPrompt("[{article}]", 13), r), "[alpha beta]");
  EXPECT_EQ(truncate_at_word("alpha beta", 10), "alpha beta");
  EXPECT_EQ(truncate_at_word("alpha beta", 5), "alpha");
  EXPECT_EQ(truncate_at_word("supercalifragilistic", 5), "super");
}

TEST(Prompt, RejectsBadTemplatesAndEmptyText) {
  EXPECT_EQ(code_of([] { LabelPrompt("no placeholder", 10); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { LabelPrompt("{article}{article}", 10); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { LabelPrompt("{article}", 0); }), ErrorCode::kInvalidArgument);
  Record empty;
  EXPECT_THROW(build_label_prompt(LabelPrompt("{article}", 10), empty), Error);
}

// ---- labeler ----

TEST(Labeler, ParsesGrammar) {
  auto v = parse_labeler_response(" LABEL = 1 ; CONF = 0.75\nsensational claims\nno sources", "x");
  EXPECT_EQ(v.label, 1);
  EXPECT_DOUBLE_EQ(v.confidence, 0.75);
  EXPECT_EQ(v.rationale, "sensational claims\nno sources");
  EXPECT_EQ(v.labeler_id, "x");
}

TEST(Labeler, ProtocolErrorCarriesPayload) {
  for (std::string bad : {"The article is fake.", "LABEL=2;CONF=0.5", "LABEL=1;CONF=1.5", "LABEL=1", ""}) {
    try {
      parse_labeler_response(bad, "x");
      ADD_FAILURE() << "accepted: " << bad;
    } catch (const ProtocolError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kProtocol);
      EXPECT_EQ(e.raw_payload(), bad);
    }
  }
}

TEST(Labeler, MockAlwaysFakeSetsLlmProvenance) {
  Record r;
  r.id = "a";
  r.text = "Some article";
  MockLabelerClient client("always-fake");
  auto out = request_llm_label(r, client, LabelPrompt(std::string(kDefaultPromptTemplate), 2000));
  EXPECT_EQ(out.verdict.label, 1);
  EXPECT_EQ(out.attempts, 1u);
  EXPECT_EQ(r.label, Label::kFake);
  EXPECT_EQ(r.label_provenance, LabelProvenance::kLlm);
  EXPECT_EQ(r.text, "Some article");
  EXPECT_EQ(r.metadata.at("llm_labeler"), "mock:always-fake");
  EXPECT_TRUE(r.metadata.count("llm_confidence"));
}

TEST(Labeler, MockHashIsDeterministic) {
  MockLabelerClient a("hash"), b("hash");
  EXPECT_EQ(a.complete("prompt one"), b.complete("prompt one"));
  EXPECT_THROW(MockLabelerClient("nonsense"), Error);
}

class ScriptedClient : public LabelerClient {
 public:
  explicit ScriptedClient(int transient_failures) : failures_(transient_failures) {}
  std::string id() const override { return "scripted"; }
  std::string complete(const std::string&) override {
    ++calls;
    if (failures_-- > 0) throw Error(ErrorCode::kTransport, "connection reset");
    return "LABEL=0;CONF=0.9\nlooks fine";
  }
  int calls = 0;

 private:
  int failures_;
};

TEST(Labeler, RetriesTransientFailures) {
  Record r;
  r.id = "a";
  r.text = "text";
  ScriptedClient client(2);
  auto out = request_llm_label(r, client, LabelPrompt("{article}", 100), RetryPolicy{3});
  EXPECT_EQ(out.attempts, 3u);
  EXPECT_EQ(client.calls, 3);
  EXPECT_EQ(r.label, Label::kReal);
  EXPECT_EQ(r.metadata.at("llm_rationale"), "looks fine");
}

TEST(Labeler, SurfacesTransportAfterBudget) {
  Record r;
  r.id = "a";
  r.text = "text";
  ScriptedClient client(3);
  EXPECT_EQ(code_of([&] { request_llm_label(r, client, LabelPrompt("{article}", 100), RetryPolicy{3}); }),
            ErrorCode::kTransport);
  EXPECT_EQ(client.calls, 3);
  EXPECT_EQ(r.label, Label::kUnlabeled);
}

TEST(Labeler, DoesNotOverwriteVerified) {
  Record r = llm_record("a", 0);
  r.label_provenance = LabelProvenance::kVerified;
  MockLabelerClient client("always-fake");
  EXPECT_EQ(code_of([&] { request_llm_label(r, client, LabelPrompt("{article}", 100)); }), ErrorCode::kState);
  EXPECT_EQ(r.label, Label::kReal);
}

// ---- assignment ----

TEST(Assign, BalancedAcrossAnnotators) {
  auto assignments = assign_reviews(llm_corpus(10), {"ann1", "ann2", "ann3", "ann4"}, 42);
  ASSERT_EQ(assignments.size(), 10u);
  std::map<std::string, int> load;
  for (const auto& a : assignments) {
    EXPECT_NE(a.reviewers[0], a.reviewers[1]);
    ++load[a.reviewers[0]];
    ++load[a.reviewers[1]];
  }
  for (const auto& [who, n] : load) EXPECT_EQ(n, 5) << who;
}

TEST(Assign, SpreadAtMostOneProperty) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    int n = static_cast<int>(rng.uniform_index(40));
    int k = 2 + static_cast<int>(rng.uniform_index(7));
    std::vector<std::string> pool;
    for (int i = 0; i < k; ++i) pool.push_back("a" + std::to_string(i));
    auto assignments = assign_reviews(llm_corpus(n), pool, trial);
    std::map<std::string, int> load;
    for (const auto& p : pool) load[p] = 0;
    for (const auto& a : assignments) {
      ASSERT_NE(a.reviewers[0], a.reviewers[1]);
      ++load[a.reviewers[0]];
      ++load[a.reviewers[1]];
    }
    int lo = n * 2, hi = 0;
    for (const auto& [who, c] : load) lo = std::min(lo, c), hi = std::max(hi, c);
    ASSERT_LE(hi - lo, 1);
  }
}

TEST(Assign, DeterministicAndSkipsNonLlm) {
  Corpus c = llm_corpus(6);
  c.records[2].label_provenance = LabelProvenance::kNone;
  c.records[2].label = Label::kUnlabeled;
  auto a = assign_reviews(c, {"x", "y", "z"}, 9);
  auto b = assign_reviews(c, {"z", "x", "y"}, 9);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NE(a[i].record_id, "r2");
    EXPECT_EQ(a[i].reviewers, b[i].reviewers);
  }
  EXPECT_EQ(code_of([&] { assign_reviews(c, {"solo"}, 1); }), ErrorCode::kInvalidArgument);
}

// ---- state machine ----

ReviewAssignment fresh() {
  ReviewAssignment a;
  a.record_id = "r0";
  a.reviewers = {"ann1", "ann2"};
  return a;
}

TEST(StateMachine, AgreementVerifiesRecord) {
  Record rec = llm_record("r0", 0);
  auto a = submit_verdict(fresh(), vote("ann1", 1), &rec);
  EXPECT_EQ(a.state, ReviewState::kPartiallyReviewed);
  EXPECT_EQ(rec.label_provenance, LabelProvenance::kLlm);
  a = submit_verdict(a, vote("ann2", 1), &rec);
  EXPECT_EQ(a.state, ReviewState::kAgreed);
  EXPECT_EQ(a.version, 2u);
  EXPECT_EQ(rec.label, Label::kFake);
  EXPECT_EQ(rec.label_provenance, LabelProvenance::kVerified);
  EXPECT_EQ(verified_label(a), 1);
}

TEST(StateMachine, ConflictLeavesRecordThenResolves) {
  Record rec = llm_record("r0", 1);
  auto a = submit_verdict(submit_verdict(fresh(), vote("ann1", 1), &rec), vote("ann2", 0), &rec);
  EXPECT_EQ(a.state, ReviewState::kConflicted);
  EXPECT_EQ(rec.label_provenance, LabelProvenance::kLlm);
  EXPECT_FALSE(verified_label(a).has_value());
  EXPECT_EQ(code_of([&] { resolve_conflict(a, vote("ann1", 0)); }), ErrorCode::kAuthorization);
  a = resolve_conflict(a, vote("lead", 0), &rec);
  EXPECT_EQ(a.state, ReviewState::kResolved);
  EXPECT_EQ(rec.label, Label::kReal);
  EXPECT_EQ(rec.label_provenance, LabelProvenance::kVerified);
}

TEST(StateMachine, RejectsInvalidTransitions) {
  auto a = submit_verdict(fresh(), vote("ann1", 1));
  EXPECT_EQ(code_of([&] { submit_verdict(a, vote("ann1", 0)); }), ErrorCode::kConflict);
  EXPECT_EQ(code_of([&] { submit_verdict(a, vote("outsider", 0)); }), ErrorCode::kAuthorization);
  EXPECT_EQ(code_of([&] { submit_verdict(a, vote("ann2", 3)); }), ErrorCode::kInvalidArgument);
  a = submit_verdict(a, vote("ann2", 1));
  EXPECT_EQ(code_of([&] { resolve_conflict(a, vote("lead", 1)); }), ErrorCode::kState);
  EXPECT_THROW(submit_verdict(a, vote("ann2", 1)), Error);
}

TEST(StateMachine, RandomSequencesStayValid) {
  Rng rng(11);
  const std::vector<std::string> actors = {"ann1", "ann2", "lead", "ann1"};
  for (int trial = 0; trial < 500; ++trial) {
    ReviewAssignment a = fresh();
    Record rec = llm_record("r0", 0);
    for (int step = 0; step < 6; ++step) {
      auto v = vote(actors[rng.uniform_index(actors.size())], static_cast<int>(rng.uniform_index(2)));
      try {
        a = rng.uniform_index(3) == 0 ? resolve_conflict(a, v, &rec) : submit_verdict(a, v, &rec);
      } catch (const Error&) {
      }
      ASSERT_LE(a.verdicts.size(), 2u);
      switch (a.state) {
        case ReviewState::kPending:
          ASSERT_TRUE(a.verdicts.empty());
          break;
        case ReviewState::kPartiallyReviewed:
          ASSERT_EQ(a.verdicts.size(), 1u);
          break;
        case ReviewState::kAgreed:
          ASSERT_EQ(a.verdicts.size(), 2u);
          ASSERT_EQ(a.verdicts[0].label, a.verdicts[1].label);
          break;
        case ReviewState::kConflicted:
          ASSERT_EQ(a.verdicts.size(), 2u);
          ASSERT_NE(a.verdicts[0].label, a.verdicts[1].label);
          break;
        case ReviewState::kResolved:
          ASSERT_TRUE(a.resolution.has_value());
          break;
      }
      const bool settled = a.state == ReviewState::kAgreed || a.state == ReviewState::kResolved;
      ASSERT_EQ(rec.label_provenance == LabelProvenance::kVerified, settled);
    }
  }
}

TEST(Export, VerifiedSubsetOnly) {
  Corpus c = llm_corpus(3);
  auto assignments = assign_reviews(c, {"a", "b"}, 1);
  EXPECT_TRUE(export_verified(c, assignments).records.empty());
  for (auto& a : assignments) {
    a = submit_verdict(a, vote(a.reviewers[0], 1));
    if (a.record_id != "r1") a = submit_verdict(a, vote(a.reviewers[1], 1));
  }
  auto out = export_verified(c, assignments);
  ASSERT_EQ(out.records.size(), 2u);
  for (const auto& r : out.records) {
    EXPECT_EQ(r.label_provenance, LabelProvenance::kVerified);
    EXPECT_EQ(r.label, Label::kFake);
  }
}

// ---- event log & workflow ----

TEST(EventLog, RoundTripAndTornTail) {
  std::string path = temp_path("events_torn");
  {
    EventLog log(path);
    ReviewEvent e;
    e.type = EventType::kAssigned;
    e.record_id = "r0";
    e.reviewers = {"a", "b"};
    log.append(e);
    ReviewEvent v;
    v.type = EventType::kVerdict;
    v.record_id = "r0";
    v.verdict = vote("a", 1);
    log.append(v);
  }
  { std::ofstream(path, std::ios::app) << "{\"seq\":2,\"type\":\"verd"; }
  auto events = EventLog::read(path);
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[1].sequence, 1u);
  EXPECT_EQ(events[1].verdict.annotator_id, "a");
  EXPECT_EQ(events[1].verdict.submitted_at, Timestamp(std::chrono::seconds(1700000000)));
  auto state = replay(events);
  ASSERT_EQ(state.size(), 1u);
  EXPECT_EQ(state[0].state, ReviewState::kPartiallyReviewed);
  std::filesystem::remove(path);
}

TEST(EventLog, MidFileCorruptionIsParseError) {
  std::string path = temp_path("events_bad");
  { std::ofstream(path) << "garbage\n{\"seq\":0}\n"; }
  EXPECT_EQ(code_of([&] { EventLog::read(path); }), ErrorCode::kParse);
  std::filesystem::remove(path);
}

TEST(Workflow, RecoversFromLog) {
  std::string path = temp_path("workflow_recover");
  Corpus c = llm_corpus(4);
  {
    ReviewWorkflow wf(c, path);
    wf.open({"a", "b", "c"}, 5);
    for (const auto& a : wf.assignments()) {
      wf.submit(a.record_id, vote(a.reviewers[0], 1));
      wf.submit(a.record_id, vote(a.reviewers[1], a.record_id == "r3" ? 0 : 1));
    }
    EXPECT_EQ(wf.conflicts().size(), 1u);
  }
  ReviewWorkflow again(c, path);
  again.open({"ignored", "pool"}, 99);
  auto conflicts = again.conflicts();
  ASSERT_EQ(conflicts.size(), 1u);
  EXPECT_EQ(conflicts[0].record_id, "r3");
  EXPECT_EQ(again.export_verified().records.size(), 3u);
  std::string lead;
  for (std::string who : {"a", "b", "c"}) {
    if (!conflicts[0].is_reviewer(who)) lead = who;
  }
  again.resolve("r3", vote(lead, 0));
  EXPECT_EQ(again.export_verified().records.size(), 4u);
  EXPECT_EQ(again.record("r3")->label_provenance, LabelProvenance::kVerified);
  std::filesystem::remove(path);
}

TEST(Workflow, StaleVersionRejected) {
  ReviewWorkflow wf(llm_corpus(1), "");
  wf.open({"a", "b"}, 1);
  auto a = *wf.assignment("r0");
  wf.submit("r0", vote(a.reviewers[0], 1), a.version);
  EXPECT_EQ(code_of([&] { wf.submit("r0", vote(a.reviewers[1], 1), a.version); }), ErrorCode::kConflict);
  EXPECT_EQ(wf.assignment("r0")->verdicts.size(), 1u);
  EXPECT_EQ(code_of([&] { wf.submit("missing", vote("a", 1)); }), ErrorCode::kNotFound);
}

TEST(Workflow, NextForWalksQueue) {
  ReviewWorkflow wf(llm_corpus(3), "");
  wf.open({"a", "b"}, 1);
  std::set<std::string> seen;
  while (auto next = wf.next_for("a")) {
    ASSERT_TRUE(seen.insert(next->record_id).second);
    wf.submit(next->record_id, vote("a", 1));
  }
  EXPECT_EQ(seen.size(), 3u);
  EXPECT_TRUE(wf.next_for("b").has_value());
  EXPECT_FALSE(wf.next_for("stranger").has_value());
}

TEST(Workflow, ConcurrentSubmissionsMatchReplay) {
  std::string path = temp_path("workflow_concurrent");
  Corpus c = llm_corpus(200);
  const std::vector<std::string> pool = {"a", "b", "c", "d"};
  ReviewWorkflow wf(c, path);
  wf.open(pool, 17);
  std::atomic<int> accepted{0}, rejected{0};
  std::vector<std::thread> threads;
  // Two threads per annotator race on the same queue; duplicates must be refused.
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      const std::string& me = pool[t % pool.size()];
      for (const auto& a : wf.assignments()) {
        if (!a.is_reviewer(me)) continue;
        try {
          wf.submit(a.record_id, vote(me, std::hash<std::string>{}(a.record_id + me) % 2 == 0 ? 1 : 0));
          ++accepted;
        } catch (const Error& e) {
          ASSERT_EQ(e.code(), ErrorCode::kConflict);
          ++rejected;
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(accepted.load(), 400);
  EXPECT_EQ(rejected.load(), 400);
  auto live = wf.assignments();
  auto replayed = replay(EventLog::read(path));
  ASSERT_EQ(live.size(), replayed.size());
  for (std::size_t i = 0; i < live.size(); ++i) {
    EXPECT_EQ(live[i].state, replayed[i].state);
    EXPECT_EQ(live[i].version, replayed[i].version);
  }
  EXPECT_EQ(wf.agreement().kappa, cohen_kappa(review_pairs(replayed)).kappa);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace fakewatch::labeling
