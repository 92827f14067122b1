#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "fakewatch/common/error.hpp"
#include "fakewatch/corpus/types.hpp"
#include "fakewatch/labeling/prompt.hpp"

namespace fakewatch::labeling {

struct LabelerVerdict {
  int label = 0;
  double confidence = 0.0;
  std::string rationale;
  std::string labeler_id;
};

// Raised when a labeler reply does not follow the response grammar.
class ProtocolError : public Error {
 public:
  ProtocolError(const std::string& message, std::string raw_payload)
      : Error(ErrorCode::kProtocol, message), raw_payload_(std::move(raw_payload)) {}
  const std::string& raw_payload() const { return raw_payload_; }

 private:
  std::string raw_payload_;
};

// Response grammar: first line "LABEL=<0|1>;CONF=<number in [0,1]>" (spaces
// around tokens allowed), remaining lines are the rationale.
LabelerVerdict parse_labeler_response(std::string_view payload, const std::string& labeler_id);

class LabelerClient {
 public:
  virtual ~LabelerClient() = default;
  virtual std::string id() const = 0;
  // Returns the raw reply. Transport problems throw Error(kTransport).
  virtual std::string complete(const std::string& prompt) = 0;
};

// Deterministic offline labeler. Policies: "always-fake", "always-real" and
// "hash" (label and confidence derived from an FNV-1a hash of the prompt).
class MockLabelerClient final : public LabelerClient {
 public:
  explicit MockLabelerClient(std::string policy);
  std::string id() const override { return "mock:" + policy_; }
  std::string complete(const std::string& prompt) override;

 private:
  std::string policy_;
};

// POSTs {"prompt": ...} as JSON to an http:// endpoint; the reply body must
// follow the response grammar. The bearer token is read from
// FAKEWATCH_LLM_TOKEN when present.
class HttpLabelerClient final : public LabelerClient {
 public:
  explicit HttpLabelerClient(std::string endpoint, int timeout_seconds = 30);
  std::string id() const override { return endpoint_; }
  std::string complete(const std::string& prompt) override;

 private:
  std::string endpoint_;
  std::string host_;
  int port_ = 80;
  std::string path_;
  int timeout_seconds_;
};

// "mock:<policy>" or an http:// URL.
std::unique_ptr<LabelerClient> make_labeler_client(const std::string& selector);

struct RetryPolicy {
  std::size_t max_attempts = 3;  // total attempts, including the first
};

struct LabelOutcome {
  LabelerVerdict verdict;
  std::size_t attempts = 0;
};

// Asks the client for a label, retrying kTransport failures up to the budget.
// On success only the label fields and llm_* metadata of the record change;
// records that are already verified are rejected with kState.
LabelOutcome request_llm_label(corpus::Record& record, LabelerClient& client, const LabelPrompt& prompt,
                               const RetryPolicy& retry = {});

}  // namespace fakewatch::labeling
