#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fakewatch/corpus/types.hpp"
#include "fakewatch/labeling/agreement.hpp"
#include "fakewatch/labeling/event_log.hpp"
#include "fakewatch/labeling/review.hpp"

namespace fakewatch::labeling {

// Thread-safe review store over a corpus. Mutations for one record are
// serialized by a per-record mutex and written to the event log before they
// become visible; reads copy immutable snapshots.
class ReviewWorkflow {
 public:
  // `log_path` empty = in-memory only.
  ReviewWorkflow(corpus::Corpus corpus, std::string log_path);

  // Replays an existing log, or assigns reviews and logs them when the log is
  // absent or empty.
  void open(const std::vector<std::string>& annotators, std::uint64_t seed);

  // Optimistic concurrency: when expected_version is set and differs from the
  // current version, throws kConflict without mutating.
  ReviewAssignment submit(const std::string& record_id, const AnnotationVerdict& verdict,
                          std::optional<std::uint64_t> expected_version = std::nullopt);
  ReviewAssignment resolve(const std::string& record_id, const AnnotationVerdict& adjudication,
                           std::optional<std::uint64_t> expected_version = std::nullopt);

  std::optional<ReviewAssignment> assignment(const std::string& record_id) const;
  std::vector<ReviewAssignment> assignments() const;
  // Oldest (by assignment order) open assignment awaiting this annotator.
  std::optional<ReviewAssignment> next_for(const std::string& annotator) const;
  std::vector<ReviewAssignment> conflicts() const;
  std::optional<corpus::Record> record(const std::string& record_id) const;

  AgreementReport agreement() const;
  corpus::Corpus export_verified() const;

 private:
  struct Slot {
    mutable std::mutex mu;
    std::shared_ptr<const ReviewAssignment> current;
  };

  template <typename Fn>
  ReviewAssignment mutate(const std::string& record_id, std::optional<std::uint64_t> expected, Fn&& fn);
  std::shared_ptr<const ReviewAssignment> load(const Slot& slot) const;

  corpus::Corpus base_;
  std::unique_ptr<EventLog> log_;
  std::vector<std::string> order_;
  std::map<std::string, std::unique_ptr<Slot>> slots_;
};

}  // namespace fakewatch::labeling
