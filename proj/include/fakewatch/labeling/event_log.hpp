#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "fakewatch/labeling/review.hpp"

namespace fakewatch::labeling {

inline constexpr const char* kEventLogFileName = "labels.events.jsonl";

enum class EventType { kAssigned, kVerdict, kResolved };

struct ReviewEvent {
  std::uint64_t sequence = 0;
  EventType type = EventType::kAssigned;
  std::string record_id;
  std::array<std::string, 2> reviewers;  // kAssigned
  AnnotationVerdict verdict;             // kVerdict / kResolved
};

std::string event_to_json(const ReviewEvent& event);
ReviewEvent event_from_json(std::string_view line);

// Append-only JSON Lines file. Appends are serialized and flushed per event.
class EventLog {
 public:
  explicit EventLog(std::string path);

  void append(ReviewEvent event);
  std::uint64_t next_sequence() const;
  const std::string& path() const { return path_; }

  // Reads all events; a torn final line (crash mid-write) is ignored, any
  // other malformed line is a kParse error.
  static std::vector<ReviewEvent> read(const std::string& path);

 private:
  std::string path_;
  mutable std::mutex mu_;
  std::uint64_t next_ = 0;
};

// Rebuilds assignments by re-applying events in order through the pure
// transitions; assignment order follows the kAssigned events.
std::vector<ReviewAssignment> replay(const std::vector<ReviewEvent>& events);

}  // namespace fakewatch::labeling
