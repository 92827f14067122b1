#include "fakewatch/labeling/review.hpp"

#include <algorithm>
#include <map>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/rng.hpp"

namespace fakewatch::labeling {

const char* to_string(ReviewState state) {
  switch (state) {
    case ReviewState::kPending:
      return "pending";
    case ReviewState::kPartiallyReviewed:
      return "partially_reviewed";
    case ReviewState::kAgreed:
      return "agreed";
    case ReviewState::kConflicted:
      return "conflicted";
    case ReviewState::kResolved:
      return "resolved";
  }
  return "unknown";
}

ReviewState parse_review_state(const std::string& s) {
  for (ReviewState st : {ReviewState::kPending, ReviewState::kPartiallyReviewed, ReviewState::kAgreed,
                         ReviewState::kConflicted, ReviewState::kResolved}) {
    if (s == to_string(st)) return st;
  }
  throw Error(ErrorCode::kParse, "unknown review state '" + s + "'");
}

bool ReviewAssignment::is_reviewer(const std::string& annotator) const {
  return reviewers[0] == annotator || reviewers[1] == annotator;
}

bool ReviewAssignment::has_voted(const std::string& annotator) const {
  return std::any_of(verdicts.begin(), verdicts.end(),
                     [&](const AnnotationVerdict& v) { return v.annotator_id == annotator; });
}

const AnnotationVerdict* ReviewAssignment::verdict_of(std::size_t reviewer_index) const {
  for (const auto& v : verdicts) {
    if (v.annotator_id == reviewers[reviewer_index]) return &v;
  }
  return nullptr;
}

std::vector<ReviewAssignment> assign_reviews(const corpus::Corpus& corpus, const std::vector<std::string>& annotators,
                                             std::uint64_t seed) {
  std::vector<std::string> pool = annotators;
  std::sort(pool.begin(), pool.end());
  if (std::adjacent_find(pool.begin(), pool.end()) != pool.end()) {
    throw Error(ErrorCode::kInvalidArgument, "annotator ids must be distinct");
  }
  if (pool.size() < 2) throw Error(ErrorCode::kInvalidArgument, "dual review needs at least two annotators");
  Rng rng(mix_seed(seed, 0x72657669657773));
  rng.shuffle(std::span<std::string>(pool));

  std::vector<ReviewAssignment> out;
  std::size_t slot = 0;
  for (const auto& r : corpus.records) {
    if (r.label_provenance != corpus::LabelProvenance::kLlm) continue;
    ReviewAssignment a;
    a.record_id = r.id;
    a.reviewers = {pool[slot % pool.size()], pool[(slot + 1) % pool.size()]};
    slot += 2;
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

void check_label(int label) {
  if (label != 0 && label != 1) throw Error(ErrorCode::kInvalidArgument, "verdict label must be 0 or 1");
}

void apply_verified(corpus::Record* record, int label) {
  if (!record) return;
  record->label = corpus::label_from_int(label);
  record->label_provenance = corpus::LabelProvenance::kVerified;
}

}  // namespace

ReviewAssignment submit_verdict(const ReviewAssignment& assignment, const AnnotationVerdict& verdict,
                                corpus::Record* record) {
  check_label(verdict.label);
  if (!assignment.is_reviewer(verdict.annotator_id)) {
    throw Error(ErrorCode::kAuthorization,
                "annotator " + verdict.annotator_id + " is not assigned to record " + assignment.record_id);
  }
  if (assignment.has_voted(verdict.annotator_id)) {
    throw Error(ErrorCode::kConflict,
                "annotator " + verdict.annotator_id + " already reviewed record " + assignment.record_id);
  }
  if (assignment.state != ReviewState::kPending && assignment.state != ReviewState::kPartiallyReviewed) {
    throw Error(ErrorCode::kConflict, "record " + assignment.record_id + " is already " + to_string(assignment.state));
  }
  ReviewAssignment next = assignment;
  next.verdicts.push_back(verdict);
  ++next.version;
  if (next.verdicts.size() == 1) {
    next.state = ReviewState::kPartiallyReviewed;
  } else if (next.verdicts[0].label == next.verdicts[1].label) {
    next.state = ReviewState::kAgreed;
    apply_verified(record, verdict.label);
  } else {
    next.state = ReviewState::kConflicted;
  }
  return next;
}

ReviewAssignment resolve_conflict(const ReviewAssignment& assignment, const AnnotationVerdict& adjudication,
                                  corpus::Record* record) {
  check_label(adjudication.label);
  if (assignment.state != ReviewState::kConflicted) {
    throw Error(ErrorCode::kState, "record " + assignment.record_id + " is " + to_string(assignment.state) +
                                       ", only conflicted reviews can be resolved");
  }
  if (assignment.is_reviewer(adjudication.annotator_id)) {
    throw Error(ErrorCode::kAuthorization, "adjudicator " + adjudication.annotator_id + " reviewed record " +
                                               assignment.record_id);
  }
  ReviewAssignment next = assignment;
  next.resolution = adjudication;
  next.state = ReviewState::kResolved;
  ++next.version;
  apply_verified(record, adjudication.label);
  return next;
}

std::optional<int> verified_label(const ReviewAssignment& assignment) {
  if (assignment.state == ReviewState::kAgreed) return assignment.verdicts[0].label;
  if (assignment.state == ReviewState::kResolved) return assignment.resolution->label;
  return std::nullopt;
}

corpus::Corpus export_verified(const corpus::Corpus& corpus, const std::vector<ReviewAssignment>& assignments) {
  std::map<std::string, int> outcome;
  for (const auto& a : assignments) {
    if (auto l = verified_label(a)) outcome[a.record_id] = *l;
  }
  corpus::Corpus out;
  for (corpus::Record r : corpus.records) {
    if (auto it = outcome.find(r.id); it != outcome.end()) apply_verified(&r, it->second);
    if (r.label_provenance == corpus::LabelProvenance::kVerified) out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace fakewatch::labeling
