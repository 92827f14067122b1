#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fakewatch/common/time.hpp"
#include "fakewatch/corpus/types.hpp"
#include "fakewatch/model_hub/model_spec.hpp"

namespace fakewatch::cli {

struct PathsConfig {
  std::string corpus = "out/corpus.jsonl";
  std::string registry = "out/models";
  std::string reports = "out/reports";
  std::string analysis = "out/analysis";
  std::string event_log = "out/labels.events.jsonl";
  std::string verified = "out/verified.jsonl";
  std::string stopwords;  // empty = no stopword removal
  std::string sentiment_lexicon;
  std::string liwc_dictionary;
};

struct IngestConfig {
  std::vector<std::string> feeds;  // RSS/Atom files or directories of them
  std::string benchmark;           // CSV or JSONL; empty = none
  std::string benchmark_label_provenance = "none";
  std::size_t benchmark_limit = 0;
  std::optional<Timestamp> from;
  std::optional<Timestamp> to;
  std::size_t max_sentences = 5;
};

struct LabelingConfig {
  std::string labeler = "mock:hash";
  std::string prompt_template;  // empty = built-in template
  std::size_t max_article_chars = 4000;
  std::size_t max_attempts = 3;
  std::size_t checkpoint_every = 25;
};

struct SplitConfig {
  double train_fraction = 0.8;
  bool upsample = true;
};

struct FeatureConfig {
  std::size_t min_df = 2;
  std::size_t max_features = 50000;
  std::size_t min_token_length = 2;
};

struct AnalysisConfig {
  std::size_t topics = 0;  // 0 = choose by coherence over [k_min, k_max]
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  std::size_t lda_iterations = 1000;
  double lda_alpha = 0.0;  // 0 = 50 / K
  double lda_beta = 0.01;
  std::size_t top_terms = 10;
  double edge_threshold = 0.5;
  double negative_threshold = -0.05;
  double positive_threshold = 0.05;
  std::string similarity = "jsd";  // or "cosine"
  std::size_t histogram_bins = 20;
  double perplexity = 30.0;
  std::size_t tsne_iterations = 1000;
  std::size_t tsne_max_points = 2000;
  std::size_t liwc_per_class = 200;  // profiles sampled per class
  std::vector<std::string> key_terms;
};

struct ServiceSettings {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string roster;
  bool blind_review = true;
};

struct PipelineConfig {
  std::uint64_t seed = 42;
  PathsConfig paths;
  IngestConfig ingest;
  std::vector<corpus::KeywordGroup> keyword_groups;
  LabelingConfig labeling;
  SplitConfig split;
  FeatureConfig features;
  std::vector<model_hub::ModelSpec> models;  // all algorithms with defaults unless configured
  AnalysisConfig analysis;
  ServiceSettings service;
};

// TOML document. Unknown sections or keys, wrong value types and invalid model
// hyperparameters are rejected with kInvalidArgument naming the key. Relative
// paths are resolved against base_dir when it is non-empty.
PipelineConfig parse_config(std::string_view toml_text, const std::string& base_dir = "");
PipelineConfig load_config(const std::string& path);
PipelineConfig default_config();

// FAKEWATCH_PORT and FAKEWATCH_ROSTER override service.port / service.roster.
void apply_env_overrides(PipelineConfig& config);

// Reseeds the pipeline and every model spec.
void override_seed(PipelineConfig& config, std::uint64_t seed);

}  // namespace fakewatch::cli
