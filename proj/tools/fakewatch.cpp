// fakewatch: command-line front end for the pipeline.
#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <tuple>

#include "fakewatch/cli/commands.hpp"
#include "fakewatch/cli/config.hpp"
#include "fakewatch/common/error.hpp"
#include "fakewatch/common/time.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
  using namespace fakewatch;

  CLI::App app{"Election news collection, labeling, classification and analysis pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string format = "text";
  cli::CommandOptions options;
  std::string liwc_dictionary;
  std::string sentiment_lexicon;

  app.add_option("--config", config_path, "Pipeline config (TOML); defaults apply when omitted");
  app.add_option("--seed", seed, "Override the pipeline seed (default 42)");
  app.add_option("--out", options.out, "Override the primary output path or directory");
  app.add_option("--format", format, "Summary format on stdout")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--input", options.input, "Corpus to read instead of the configured one");

  auto* ingest = app.add_subcommand("ingest", "Parse feeds and the benchmark into a deduplicated corpus");
  std::string from, to;
  ingest->add_option("--from", from, "Earliest publication date (YYYY-MM-DD)");
  ingest->add_option("--to", to, "Latest publication date (YYYY-MM-DD)");
  auto* label = app.add_subcommand("label", "Request LLM labels for unlabeled records (resumable)");
  label->add_option("--limit", options.label_limit, "Label at most this many records");
  auto* verify = app.add_subcommand("verify", "Serve the annotation API over the review log until interrupted");
  auto* train = app.add_subcommand("train", "Split, fit every configured model and write the comparison report");
  auto* evaluate = app.add_subcommand("evaluate", "Re-score the registry on the stored test split");
  auto* analyze = app.add_subcommand("analyze", "Materialize analysis artifacts");
  analyze->add_option("kind", options.analyze_kind, "topics|network|liwc|sentiment|keyterms|tsne|embedding|all");
  analyze->add_option("--k", options.topics, "Topic count or 'auto'");
  analyze->add_option("--liwc-dictionary", liwc_dictionary, "LIWC-format dictionary");
  analyze->add_option("--sentiment-lexicon", sentiment_lexicon, "Sentiment lexicon (word and polarity per line)");
  auto* exp = app.add_subcommand("export", "Write the verified corpus from the review log");

  CLI11_PARSE(app, argc, argv);

  try {
    cli::PipelineConfig config = config_path.empty() ? cli::default_config() : cli::load_config(config_path);
    cli::apply_env_overrides(config);
    if (seed) cli::override_seed(config, *seed);
    if (!liwc_dictionary.empty()) config.paths.liwc_dictionary = liwc_dictionary;
    if (!sentiment_lexicon.empty()) config.paths.sentiment_lexicon = sentiment_lexicon;
    options.format = cli::parse_output_format(format);
    for (auto [text, slot, flag] : {std::tuple{&from, &config.ingest.from, "--from"}, std::tuple{&to, &config.ingest.to, "--to"}}) {
      if (text->empty()) continue;
      *slot = parse_timestamp(*text);
      if (!*slot) throw Error(ErrorCode::kInvalidArgument, std::string(flag) + ": unparseable date '" + *text + "'");
    }
    // A bare date as the upper bound covers that whole day.
    if (!to.empty() && to.size() == 10) *config.ingest.to += std::chrono::seconds(86399);

    if (ingest->parsed()) return cli::cmd_ingest(config, options, std::cout, std::cerr);
    if (label->parsed()) return cli::cmd_label(config, options, std::cout, std::cerr);
    if (verify->parsed()) {
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      options.stop = &g_stop;
      return cli::cmd_verify(config, options, std::cout, std::cerr);
    }
    if (train->parsed()) return cli::cmd_train(config, options, std::cout, std::cerr);
    if (evaluate->parsed()) return cli::cmd_evaluate(config, options, std::cout, std::cerr);
    if (analyze->parsed()) return cli::cmd_analyze(config, options, std::cout, std::cerr);
    if (exp->parsed()) return cli::cmd_export(config, options, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidArgument || e.code() == ErrorCode::kParse ? cli::kExitUsage
                                                                                     : cli::kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitFailure;
  }
  return cli::kExitUsage;
}
