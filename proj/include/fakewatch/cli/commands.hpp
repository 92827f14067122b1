#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fakewatch/cli/config.hpp"

namespace fakewatch::cli {

enum class OutputFormat { kText, kJson, kCsv };

OutputFormat parse_output_format(const std::string& name);

// Settings shared by every command plus the few per-command switches.
struct CommandOptions {
  std::string out;    // overrides the primary output location of the command
  std::string input;  // overrides the corpus a command reads
  OutputFormat format = OutputFormat::kText;
  std::string analyze_kind = "all";  // topics|liwc|sentiment|keyterms|tsne|all
  std::string topics = "";            // "auto", a count, or empty for the config value
  std::size_t label_limit = 0;        // label at most this many records (0 = all)
  const std::atomic<bool>* stop = nullptr;  // verify polls this; null = serve forever
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // command ran but some unit failed
inline constexpr int kExitUsage = 2;    // bad config or arguments

// Each command writes its primary outputs byte-for-byte deterministically;
// wall-clock timestamps go into *.meta.json sidecars only. Human summaries go
// to `out`, diagnostics to `err`.
int cmd_ingest(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_label(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_train(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_evaluate(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_analyze(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_export(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);

// Replaces `path` atomically (temp file + rename), creating parent directories.
void write_output(const std::string& path, const std::string& contents);

}  // namespace fakewatch::cli
