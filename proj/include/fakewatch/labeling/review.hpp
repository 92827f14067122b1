#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fakewatch/common/time.hpp"
#include "fakewatch/corpus/types.hpp"

namespace fakewatch::labeling {

struct AnnotationVerdict {
  std::string annotator_id;
  int label = 0;
  std::string note;
  Timestamp submitted_at = kSentinelTimestamp;
};

enum class ReviewState { kPending, kPartiallyReviewed, kAgreed, kConflicted, kResolved };

const char* to_string(ReviewState state);
ReviewState parse_review_state(const std::string& s);

struct ReviewAssignment {
  std::string record_id;
  std::array<std::string, 2> reviewers;
  std::vector<AnnotationVerdict> verdicts;  // in submission order
  ReviewState state = ReviewState::kPending;
  std::optional<AnnotationVerdict> resolution;
  std::uint64_t version = 0;  // bumped on every accepted mutation

  bool is_reviewer(const std::string& annotator) const;
  bool has_voted(const std::string& annotator) const;
  // Verdict of reviewers[i], if submitted.
  const AnnotationVerdict* verdict_of(std::size_t reviewer_index) const;
};

// Every llm-labeled record gets two distinct annotators. Annotators are
// shuffled under the seed and record r takes slots 2r and 2r+1 of the
// resulting cycle, so workloads differ by at most one.
std::vector<ReviewAssignment> assign_reviews(const corpus::Corpus& corpus, const std::vector<std::string>& annotators,
                                             std::uint64_t seed);

// Pure transitions. When `record` is given it receives the verified label on
// agreement / resolution.
ReviewAssignment submit_verdict(const ReviewAssignment& assignment, const AnnotationVerdict& verdict,
                                corpus::Record* record = nullptr);
ReviewAssignment resolve_conflict(const ReviewAssignment& assignment, const AnnotationVerdict& adjudication,
                                  corpus::Record* record = nullptr);

// Verified label implied by an assignment (agreed or resolved), if any.
std::optional<int> verified_label(const ReviewAssignment& assignment);

// Applies the verified outcomes to a copy of the corpus and keeps only
// records whose provenance is verified. The split map is dropped.
corpus::Corpus export_verified(const corpus::Corpus& corpus, const std::vector<ReviewAssignment>& assignments);

}  // namespace fakewatch::labeling
