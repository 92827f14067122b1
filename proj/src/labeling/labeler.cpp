#include "fakewatch/labeling/labeler.hpp"

#include <httplib.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <json.hpp>

#include "fakewatch/common/hash.hpp"
#include "fakewatch/common/strings.hpp"

namespace fakewatch::labeling {
namespace {

[[noreturn]] void bad_reply(const std::string& why, std::string_view payload) {
  throw ProtocolError("labeler reply violates the response grammar: " + why, std::string(payload));
}

std::string_view strip(std::string_view s) { return trim(s); }

}  // namespace

LabelerVerdict parse_labeler_response(std::string_view payload, const std::string& labeler_id) {
  std::size_t eol = payload.find('\n');
  std::string_view head = strip(payload.substr(0, eol));
  if (!head.empty() && head.back() == '\r') head.remove_suffix(1);
  std::size_t semi = head.find(';');
  if (semi == std::string_view::npos) bad_reply("missing ';'", payload);
  auto field = [&](std::string_view part, std::string_view key) {
    part = strip(part);
    std::size_t eq = part.find('=');
    if (eq == std::string_view::npos || strip(part.substr(0, eq)) != key) bad_reply("expected " + std::string(key), payload);
    return strip(part.substr(eq + 1));
  };
  std::string_view label = field(head.substr(0, semi), "LABEL");
  std::string_view conf = field(head.substr(semi + 1), "CONF");

  LabelerVerdict v;
  v.labeler_id = labeler_id;
  if (label == "0" || label == "1") {
    v.label = label[0] - '0';
  } else {
    bad_reply("LABEL must be 0 or 1", payload);
  }
  auto [ptr, ec] = std::from_chars(conf.data(), conf.data() + conf.size(), v.confidence);
  if (ec != std::errc() || ptr != conf.data() + conf.size() || !(v.confidence >= 0.0 && v.confidence <= 1.0)) {
    bad_reply("CONF must be a number in [0, 1]", payload);
  }
  if (eol != std::string_view::npos) v.rationale = std::string(strip(payload.substr(eol + 1)));
  return v;
}

MockLabelerClient::MockLabelerClient(std::string policy) : policy_(std::move(policy)) {
  if (policy_ != "always-fake" && policy_ != "always-real" && policy_ != "hash") {
    throw Error(ErrorCode::kInvalidArgument, "unknown mock labeler policy '" + policy_ + "'");
  }
}

std::string MockLabelerClient::complete(const std::string& prompt) {
  if (policy_ == "always-fake") return "LABEL=1;CONF=1\nmock policy always-fake";
  if (policy_ == "always-real") return "LABEL=0;CONF=1\nmock policy always-real";
  std::uint64_t h = fnv1a(prompt);
  int label = static_cast<int>(h & 1);
  // Confidence in [0.50, 0.99] from the next bits.
  double conf = 0.5 + static_cast<double>((h >> 1) % 50) / 100.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "LABEL=%d;CONF=%.2f\nmock policy hash", label, conf);
  return buf;
}

HttpLabelerClient::HttpLabelerClient(std::string endpoint, int timeout_seconds)
    : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds) {
  constexpr std::string_view scheme = "http://";
  if (endpoint_.rfind(scheme, 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "labeler endpoint must be an http:// URL: " + endpoint_);
  }
  std::string rest = endpoint_.substr(scheme.size());
  std::size_t slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : rest.substr(slash);
  std::size_t colon = authority.rfind(':');
  host_ = authority.substr(0, colon);
  if (colon != std::string::npos) {
    const std::string port = authority.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), port_);
    if (ec != std::errc() || ptr != port.data() + port.size()) {
      throw Error(ErrorCode::kInvalidArgument, "bad port in labeler endpoint: " + endpoint_);
    }
  }
  if (host_.empty()) throw Error(ErrorCode::kInvalidArgument, "labeler endpoint has no host: " + endpoint_);
}

std::string HttpLabelerClient::complete(const std::string& prompt) {
  httplib::Client client(host_, port_);
  client.set_connection_timeout(timeout_seconds_);
  client.set_read_timeout(timeout_seconds_);
  httplib::Headers headers;
  if (const char* token = std::getenv("FAKEWATCH_LLM_TOKEN"); token && *token) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  nlohmann::json body{{"prompt", prompt}};
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kTransport, "labeler request failed: " + httplib::to_string(res.error()));
  }
  if (res->status >= 500 || res->status == 429) {
    throw Error(ErrorCode::kTransport, "labeler returned HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw ProtocolError("labeler returned HTTP " + std::to_string(res->status), res->body);
  }
  return res->body;
}

std::unique_ptr<LabelerClient> make_labeler_client(const std::string& selector) {
  if (selector.rfind("mock:", 0) == 0) return std::make_unique<MockLabelerClient>(selector.substr(5));
  if (selector.rfind("http://", 0) == 0) return std::make_unique<HttpLabelerClient>(selector);
  throw Error(ErrorCode::kInvalidArgument, "labeler must be mock:<policy> or an http:// URL, got '" + selector + "'");
}

LabelOutcome request_llm_label(corpus::Record& record, LabelerClient& client, const LabelPrompt& prompt,
                               const RetryPolicy& retry) {
  if (record.label_provenance == corpus::LabelProvenance::kVerified) {
    throw Error(ErrorCode::kState, "record " + record.id + " is already verified");
  }
  if (retry.max_attempts == 0) throw Error(ErrorCode::kInvalidArgument, "retry budget must allow one attempt");
  const std::string text = build_label_prompt(prompt, record);
  LabelOutcome out;
  for (std::size_t attempt = 1;; ++attempt) {
    out.attempts = attempt;
    try {
      out.verdict = parse_labeler_response(client.complete(text), client.id());
      break;
    } catch (const ProtocolError&) {
      throw;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTransport || attempt >= retry.max_attempts) {
        if (e.code() == ErrorCode::kTransport) {
          throw Error(ErrorCode::kTransport, std::string(e.what()) + " (after " + std::to_string(attempt) +
                                                 " attempts)");
        }
        throw;
      }
    }
  }
  record.label = corpus::label_from_int(out.verdict.label);
  record.label_provenance = corpus::LabelProvenance::kLlm;
  char conf[32];
  std::snprintf(conf, sizeof conf, "%.4f", out.verdict.confidence);
  record.metadata["llm_confidence"] = conf;
  record.metadata["llm_labeler"] = out.verdict.labeler_id;
  record.metadata["llm_rationale"] = out.verdict.rationale;
  return out;
}

}  // namespace fakewatch::labeling
