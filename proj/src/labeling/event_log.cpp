#include "fakewatch/labeling/event_log.hpp"

#include <fstream>
#include <json.hpp>
#include <map>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/strings.hpp"

namespace fakewatch::labeling {
namespace {

using nlohmann::ordered_json;

const char* type_name(EventType t) {
  switch (t) {
    case EventType::kAssigned:
      return "assigned";
    case EventType::kVerdict:
      return "verdict";
    case EventType::kResolved:
      return "resolved";
  }
  return "unknown";
}

EventType parse_type(const std::string& s) {
  if (s == "assigned") return EventType::kAssigned;
  if (s == "verdict") return EventType::kVerdict;
  if (s == "resolved") return EventType::kResolved;
  throw Error(ErrorCode::kParse, "unknown event type '" + s + "'");
}

}  // namespace

std::string event_to_json(const ReviewEvent& e) {
  ordered_json j;
  j["seq"] = e.sequence;
  j["type"] = type_name(e.type);
  j["record_id"] = e.record_id;
  if (e.type == EventType::kAssigned) {
    j["reviewers"] = {e.reviewers[0], e.reviewers[1]};
  } else {
    j["annotator_id"] = e.verdict.annotator_id;
    j["label"] = e.verdict.label;
    j["note"] = e.verdict.note;
    j["submitted_at"] = format_iso8601(e.verdict.submitted_at);
  }
  return j.dump();
}

ReviewEvent event_from_json(std::string_view line) {
  ReviewEvent e;
  try {
    auto j = nlohmann::json::parse(line);
    e.sequence = j.at("seq").get<std::uint64_t>();
    e.type = parse_type(j.at("type").get<std::string>());
    e.record_id = j.at("record_id").get<std::string>();
    if (e.type == EventType::kAssigned) {
      const auto& r = j.at("reviewers");
      if (!r.is_array() || r.size() != 2) throw Error(ErrorCode::kParse, "assigned event needs two reviewers");
      e.reviewers = {r[0].get<std::string>(), r[1].get<std::string>()};
    } else {
      e.verdict.annotator_id = j.at("annotator_id").get<std::string>();
      e.verdict.label = j.at("label").get<int>();
      e.verdict.note = j.value("note", "");
      auto ts = parse_timestamp(j.at("submitted_at").get<std::string>());
      if (!ts) throw Error(ErrorCode::kParse, "bad submitted_at timestamp");
      e.verdict.submitted_at = *ts;
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kParse, std::string("malformed review event: ") + ex.what());
  }
  return e;
}

EventLog::EventLog(std::string path) : path_(std::move(path)) {
  std::ifstream probe(path_);
  if (probe) {
    auto events = read(path_);
    if (!events.empty()) next_ = events.back().sequence + 1;
  }
}

void EventLog::append(ReviewEvent event) {
  std::lock_guard lock(mu_);
  event.sequence = next_;
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to event log " + path_);
  out << event_to_json(event) << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write to event log " + path_ + " failed");
  ++next_;
}

std::uint64_t EventLog::next_sequence() const {
  std::lock_guard lock(mu_);
  return next_;
}

std::vector<ReviewEvent> EventLog::read(const std::string& path) {
  std::string contents = read_file(path);
  std::vector<ReviewEvent> out;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    const bool last = eol == std::string::npos;
    std::string_view line(contents.data() + pos, (last ? contents.size() : eol) - pos);
    pos = last ? contents.size() : eol + 1;
    if (trim(line).empty()) continue;
    try {
      out.push_back(event_from_json(line));
    } catch (const Error&) {
      if (last) break;  // torn tail write
      throw;
    }
  }
  return out;
}

std::vector<ReviewAssignment> replay(const std::vector<ReviewEvent>& events) {
  std::vector<ReviewAssignment> out;
  std::map<std::string, std::size_t> index;
  for (const auto& e : events) {
    if (e.type == EventType::kAssigned) {
      if (index.count(e.record_id)) throw Error(ErrorCode::kConflict, "record " + e.record_id + " assigned twice");
      ReviewAssignment a;
      a.record_id = e.record_id;
      a.reviewers = e.reviewers;
      index[e.record_id] = out.size();
      out.push_back(std::move(a));
      continue;
    }
    auto it = index.find(e.record_id);
    if (it == index.end()) throw Error(ErrorCode::kParse, "event for unassigned record " + e.record_id);
    auto& a = out[it->second];
    a = e.type == EventType::kVerdict ? submit_verdict(a, e.verdict) : resolve_conflict(a, e.verdict);
  }
  return out;
}

}  // namespace fakewatch::labeling
