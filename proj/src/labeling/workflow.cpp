#include "fakewatch/labeling/workflow.hpp"

#include <filesystem>

#include "fakewatch/common/error.hpp"

namespace fakewatch::labeling {

ReviewWorkflow::ReviewWorkflow(corpus::Corpus corpus, std::string log_path) : base_(std::move(corpus)) {
  if (!log_path.empty()) log_ = std::make_unique<EventLog>(std::move(log_path));
}

void ReviewWorkflow::open(const std::vector<std::string>& annotators, std::uint64_t seed) {
  std::vector<ReviewAssignment> initial;
  std::error_code ec;
  const bool have_log = log_ && std::filesystem::exists(log_->path(), ec) && log_->next_sequence() > 0;
  if (have_log) {
    initial = replay(EventLog::read(log_->path()));
  } else {
    initial = assign_reviews(base_, annotators, seed);
    if (log_) {
      for (const auto& a : initial) {
        ReviewEvent e;
        e.type = EventType::kAssigned;
        e.record_id = a.record_id;
        e.reviewers = a.reviewers;
        log_->append(std::move(e));
      }
    }
  }
  order_.clear();
  slots_.clear();
  for (auto& a : initial) {
    if (!base_.find(a.record_id)) {
      throw Error(ErrorCode::kNotFound, "event log references record " + a.record_id + " missing from the corpus");
    }
    order_.push_back(a.record_id);
    auto slot = std::make_unique<Slot>();
    slot->current = std::make_shared<const ReviewAssignment>(std::move(a));
    slots_[order_.back()] = std::move(slot);
  }
}

std::shared_ptr<const ReviewAssignment> ReviewWorkflow::load(const Slot& slot) const {
  std::lock_guard lock(slot.mu);
  return slot.current;
}

template <typename Fn>
ReviewAssignment ReviewWorkflow::mutate(const std::string& record_id, std::optional<std::uint64_t> expected, Fn&& fn) {
  auto it = slots_.find(record_id);
  if (it == slots_.end()) throw Error(ErrorCode::kNotFound, "no review assignment for record " + record_id);
  Slot& slot = *it->second;
  std::lock_guard lock(slot.mu);
  if (expected && *expected != slot.current->version) {
    throw Error(ErrorCode::kConflict, "stale assignment version " + std::to_string(*expected) + " for record " +
                                          record_id + " (current " + std::to_string(slot.current->version) + ")");
  }
  auto [next, event] = fn(*slot.current);
  if (log_) log_->append(std::move(event));
  slot.current = std::make_shared<const ReviewAssignment>(std::move(next));
  return *slot.current;
}

ReviewAssignment ReviewWorkflow::submit(const std::string& record_id, const AnnotationVerdict& verdict,
                                        std::optional<std::uint64_t> expected_version) {
  return mutate(record_id, expected_version, [&](const ReviewAssignment& current) {
    ReviewEvent e;
    e.type = EventType::kVerdict;
    e.record_id = record_id;
    e.verdict = verdict;
    return std::pair{submit_verdict(current, verdict), e};
  });
}

ReviewAssignment ReviewWorkflow::resolve(const std::string& record_id, const AnnotationVerdict& adjudication,
                                         std::optional<std::uint64_t> expected_version) {
  return mutate(record_id, expected_version, [&](const ReviewAssignment& current) {
    ReviewEvent e;
    e.type = EventType::kResolved;
    e.record_id = record_id;
    e.verdict = adjudication;
    return std::pair{resolve_conflict(current, adjudication), e};
  });
}

std::optional<ReviewAssignment> ReviewWorkflow::assignment(const std::string& record_id) const {
  auto it = slots_.find(record_id);
  if (it == slots_.end()) return std::nullopt;
  return *load(*it->second);
}

std::vector<ReviewAssignment> ReviewWorkflow::assignments() const {
  std::vector<ReviewAssignment> out;
  out.reserve(order_.size());
  for (const auto& id : order_) out.push_back(*load(*slots_.at(id)));
  return out;
}

std::optional<ReviewAssignment> ReviewWorkflow::next_for(const std::string& annotator) const {
  for (const auto& id : order_) {
    auto a = load(*slots_.at(id));
    const bool open = a->state == ReviewState::kPending || a->state == ReviewState::kPartiallyReviewed;
    if (open && a->is_reviewer(annotator) && !a->has_voted(annotator)) return *a;
  }
  return std::nullopt;
}

std::vector<ReviewAssignment> ReviewWorkflow::conflicts() const {
  std::vector<ReviewAssignment> out;
  for (const auto& id : order_) {
    auto a = load(*slots_.at(id));
    if (a->state == ReviewState::kConflicted) out.push_back(*a);
  }
  return out;
}

std::optional<corpus::Record> ReviewWorkflow::record(const std::string& record_id) const {
  const corpus::Record* r = base_.find(record_id);
  if (!r) return std::nullopt;
  corpus::Record copy = *r;
  if (auto a = assignment(record_id)) {
    if (auto label = verified_label(*a)) {
      copy.label = corpus::label_from_int(*label);
      copy.label_provenance = corpus::LabelProvenance::kVerified;
    }
  }
  return copy;
}

AgreementReport ReviewWorkflow::agreement() const {
  auto pairs = review_pairs(assignments());
  return cohen_kappa(pairs);
}

corpus::Corpus ReviewWorkflow::export_verified() const { return labeling::export_verified(base_, assignments()); }

}  // namespace fakewatch::labeling
