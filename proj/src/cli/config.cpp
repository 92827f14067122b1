#include "fakewatch/cli/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <set>
#include <toml.hpp>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/strings.hpp"

namespace fakewatch::cli {
namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "config key '" + key + "': " + what);
}

void check_keys(const toml::table& t, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : t) {
    std::string key(k.str());
    if (!allowed.count(key)) bad(where.empty() ? key : where + "." + key, "unknown key");
  }
}

std::string join_key(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

void read(const toml::table& t, const std::string& section, const char* key, std::string& out) {
  if (auto* n = t.get(key)) {
    if (!n->is_string()) bad(join_key(section, key), "expected a string");
    out = n->as_string()->get();
  }
}

void read(const toml::table& t, const std::string& section, const char* key, bool& out) {
  if (auto* n = t.get(key)) {
    if (!n->is_boolean()) bad(join_key(section, key), "expected true or false");
    out = n->as_boolean()->get();
  }
}

void read(const toml::table& t, const std::string& section, const char* key, double& out) {
  if (auto* n = t.get(key)) {
    if (n->is_floating_point()) {
      out = n->as_floating_point()->get();
    } else if (n->is_integer()) {
      out = static_cast<double>(n->as_integer()->get());
    } else {
      bad(join_key(section, key), "expected a number");
    }
  }
}

void read(const toml::table& t, const std::string& section, const char* key, std::size_t& out) {
  if (auto* n = t.get(key)) {
    if (!n->is_integer() || n->as_integer()->get() < 0) bad(join_key(section, key), "expected a non-negative integer");
    out = static_cast<std::size_t>(n->as_integer()->get());
  }
}

void read(const toml::table& t, const std::string& section, const char* key, std::vector<std::string>& out) {
  if (auto* n = t.get(key)) {
    auto* arr = n->as_array();
    if (!arr) bad(join_key(section, key), "expected an array of strings");
    out.clear();
    for (const auto& e : *arr) {
      if (!e.is_string()) bad(join_key(section, key), "expected an array of strings");
      out.push_back(e.as_string()->get());
    }
  }
}

// A bare date as an upper bound covers the whole day.
void read_date(const toml::table& t, const std::string& section, const char* key, std::optional<Timestamp>& out,
               bool end_of_day = false) {
  if (auto* n = t.get(key)) {
    std::string text;
    if (n->is_string()) {
      text = n->as_string()->get();
    } else if (n->is_date()) {
      auto d = n->as_date()->get();
      char buf[16];
      std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", static_cast<int>(d.year), static_cast<int>(d.month),
                    static_cast<int>(d.day));
      text = buf;
    } else {
      bad(join_key(section, key), "expected a date");
    }
    out = parse_timestamp(text);
    if (!out) bad(join_key(section, key), "unparseable date '" + text + "'");
    if (end_of_day && text.size() == 10) *out += std::chrono::seconds(86399);
  }
}

const toml::table& section_table(const toml::table& root, const char* name) {
  static const toml::table empty;
  auto* n = root.get(name);
  if (!n) return empty;
  if (!n->is_table()) bad(name, "expected a section");
  return *n->as_table();
}

model_hub::ParamValue to_param(const toml::node& n, const std::string& key) {
  if (n.is_boolean()) return n.as_boolean()->get();
  if (n.is_integer()) return n.as_integer()->get();
  if (n.is_floating_point()) return n.as_floating_point()->get();
  if (n.is_string()) return n.as_string()->get();
  bad(key, "hyperparameters must be booleans, numbers or strings");
}

void resolve(std::string& path, const std::string& base) {
  if (path.empty() || base.empty() || std::filesystem::path(path).is_absolute()) return;
  path = (std::filesystem::path(base) / path).lexically_normal().string();
}

}  // namespace

PipelineConfig default_config() {
  PipelineConfig c;
  for (auto a : model_hub::all_algorithms()) c.models.push_back(model_hub::default_spec(a, c.seed));
  return c;
}

PipelineConfig parse_config(std::string_view toml_text, const std::string& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + std::string(e.description()) + " at line " +
                                       std::to_string(e.source().begin.line));
  }
  check_keys(root, "", {"seed", "paths", "ingest", "keyword_group", "labeling", "split", "features", "models",
                        "analysis", "service"});
  PipelineConfig c;
  if (auto* n = root.get("seed")) {
    if (!n->is_integer() || n->as_integer()->get() < 0) bad("seed", "expected a non-negative integer");
    c.seed = static_cast<std::uint64_t>(n->as_integer()->get());
  }

  const auto& paths = section_table(root, "paths");
  check_keys(paths, "paths", {"corpus", "registry", "reports", "analysis", "event_log", "verified", "stopwords",
                              "sentiment_lexicon", "liwc_dictionary"});
  read(paths, "paths", "corpus", c.paths.corpus);
  read(paths, "paths", "registry", c.paths.registry);
  read(paths, "paths", "reports", c.paths.reports);
  read(paths, "paths", "analysis", c.paths.analysis);
  read(paths, "paths", "event_log", c.paths.event_log);
  read(paths, "paths", "verified", c.paths.verified);
  read(paths, "paths", "stopwords", c.paths.stopwords);
  read(paths, "paths", "sentiment_lexicon", c.paths.sentiment_lexicon);
  read(paths, "paths", "liwc_dictionary", c.paths.liwc_dictionary);

  const auto& ingest = section_table(root, "ingest");
  check_keys(ingest, "ingest", {"feeds", "benchmark", "benchmark_label_provenance", "benchmark_limit", "from", "to",
                                "max_sentences"});
  read(ingest, "ingest", "feeds", c.ingest.feeds);
  read(ingest, "ingest", "benchmark", c.ingest.benchmark);
  read(ingest, "ingest", "benchmark_label_provenance", c.ingest.benchmark_label_provenance);
  corpus::parse_label_provenance(c.ingest.benchmark_label_provenance);
  read(ingest, "ingest", "benchmark_limit", c.ingest.benchmark_limit);
  read_date(ingest, "ingest", "from", c.ingest.from);
  read_date(ingest, "ingest", "to", c.ingest.to, true);
  read(ingest, "ingest", "max_sentences", c.ingest.max_sentences);
  if (c.ingest.max_sentences == 0) bad("ingest.max_sentences", "must be positive");

  if (auto* n = root.get("keyword_group")) {
    auto* arr = n->as_array();
    if (!arr || !arr->is_array_of_tables()) bad("keyword_group", "expected [[keyword_group]] entries");
    std::set<std::string> names;
    for (const auto& e : *arr) {
      const auto& t = *e.as_table();
      check_keys(t, "keyword_group", {"name", "terms"});
      corpus::KeywordGroup g;
      read(t, "keyword_group", "name", g.name);
      read(t, "keyword_group", "terms", g.terms);
      if (g.name.empty()) bad("keyword_group.name", "missing or empty");
      if (g.terms.empty()) bad("keyword_group.terms", "group '" + g.name + "' has no terms");
      if (!names.insert(g.name).second) bad("keyword_group.name", "duplicate group '" + g.name + "'");
      for (auto& term : g.terms) term = to_lower(term);
      c.keyword_groups.push_back(std::move(g));
    }
  }

  const auto& labeling = section_table(root, "labeling");
  check_keys(labeling, "labeling", {"labeler", "prompt_template", "max_article_chars", "max_attempts", "checkpoint_every"});
  read(labeling, "labeling", "labeler", c.labeling.labeler);
  read(labeling, "labeling", "prompt_template", c.labeling.prompt_template);
  read(labeling, "labeling", "max_article_chars", c.labeling.max_article_chars);
  read(labeling, "labeling", "max_attempts", c.labeling.max_attempts);
  read(labeling, "labeling", "checkpoint_every", c.labeling.checkpoint_every);
  if (c.labeling.max_attempts == 0) bad("labeling.max_attempts", "must be positive");

  const auto& split = section_table(root, "split");
  check_keys(split, "split", {"train_fraction", "upsample"});
  read(split, "split", "train_fraction", c.split.train_fraction);
  read(split, "split", "upsample", c.split.upsample);
  if (!(c.split.train_fraction > 0.0 && c.split.train_fraction < 1.0)) bad("split.train_fraction", "must be in (0, 1)");

  const auto& feats = section_table(root, "features");
  check_keys(feats, "features", {"min_df", "max_features", "min_token_length"});
  read(feats, "features", "min_df", c.features.min_df);
  read(feats, "features", "max_features", c.features.max_features);
  read(feats, "features", "min_token_length", c.features.min_token_length);

  const auto& models = section_table(root, "models");
  std::set<std::string> model_keys = {"enabled"};
  for (auto a : model_hub::all_algorithms()) model_keys.insert(std::string(model_hub::algorithm_name(a)));
  check_keys(models, "models", model_keys);
  std::vector<std::string> enabled;
  for (auto a : model_hub::all_algorithms()) enabled.emplace_back(model_hub::algorithm_name(a));
  read(models, "models", "enabled", enabled);
  for (const auto& name : enabled) {
    model_hub::Algorithm algo;
    try {
      algo = model_hub::parse_algorithm(name);
    } catch (const Error&) {
      bad("models.enabled", "unknown algorithm '" + name + "'");
    }
    auto spec = model_hub::default_spec(algo, c.seed);
    if (auto* n = models.get(name)) {
      if (!n->is_table()) bad("models." + name, "expected a section");
      for (const auto& [k, v] : *n->as_table()) {
        std::string key(k.str());
        if (key == "seed") {
          if (!v.is_integer() || v.as_integer()->get() < 0) bad("models." + name + ".seed", "expected a non-negative integer");
          spec.seed = static_cast<std::uint64_t>(v.as_integer()->get());
          continue;
        }
        spec.hyperparameters[key] = to_param(v, "models." + name + "." + key);
      }
    }
    try {
      model_hub::validate_spec(spec);
    } catch (const Error& e) {
      bad("models." + name, e.what());
    }
    c.models.push_back(std::move(spec));
  }

  const auto& an = section_table(root, "analysis");
  check_keys(an, "analysis", {"topics", "k_min", "k_max", "lda_iterations", "lda_alpha", "lda_beta", "top_terms",
                              "edge_threshold", "negative_threshold", "positive_threshold", "similarity",
                              "histogram_bins", "perplexity", "tsne_iterations", "tsne_max_points", "liwc_per_class",
                              "key_terms"});
  auto& a = c.analysis;
  read(an, "analysis", "topics", a.topics);
  read(an, "analysis", "k_min", a.k_min);
  read(an, "analysis", "k_max", a.k_max);
  read(an, "analysis", "lda_iterations", a.lda_iterations);
  read(an, "analysis", "lda_alpha", a.lda_alpha);
  read(an, "analysis", "lda_beta", a.lda_beta);
  read(an, "analysis", "top_terms", a.top_terms);
  read(an, "analysis", "edge_threshold", a.edge_threshold);
  read(an, "analysis", "negative_threshold", a.negative_threshold);
  read(an, "analysis", "positive_threshold", a.positive_threshold);
  read(an, "analysis", "similarity", a.similarity);
  read(an, "analysis", "histogram_bins", a.histogram_bins);
  read(an, "analysis", "perplexity", a.perplexity);
  read(an, "analysis", "tsne_iterations", a.tsne_iterations);
  read(an, "analysis", "tsne_max_points", a.tsne_max_points);
  read(an, "analysis", "liwc_per_class", a.liwc_per_class);
  read(an, "analysis", "key_terms", a.key_terms);
  if (a.k_min < 1 || a.k_max < a.k_min) bad("analysis.k_min", "need 1 <= k_min <= k_max");
  if (a.similarity != "jsd" && a.similarity != "cosine") bad("analysis.similarity", "expected \"jsd\" or \"cosine\"");
  if (a.negative_threshold > a.positive_threshold) bad("analysis.negative_threshold", "exceeds positive_threshold");
  if (a.histogram_bins == 0) bad("analysis.histogram_bins", "must be positive");

  const auto& svc = section_table(root, "service");
  check_keys(svc, "service", {"host", "port", "roster", "blind_review"});
  read(svc, "service", "host", c.service.host);
  std::size_t port = static_cast<std::size_t>(c.service.port);
  read(svc, "service", "port", port);
  if (port > 65535) bad("service.port", "out of range");
  c.service.port = static_cast<int>(port);
  read(svc, "service", "roster", c.service.roster);
  read(svc, "service", "blind_review", c.service.blind_review);

  for (std::string* p : {&c.paths.corpus, &c.paths.registry, &c.paths.reports, &c.paths.analysis, &c.paths.event_log,
                         &c.paths.verified, &c.paths.stopwords, &c.paths.sentiment_lexicon, &c.paths.liwc_dictionary,
                         &c.ingest.benchmark, &c.service.roster}) {
    resolve(*p, base_dir);
  }
  for (auto& f : c.ingest.feeds) resolve(f, base_dir);
  return c;
}

PipelineConfig load_config(const std::string& path) {
  return parse_config(read_file(path), std::filesystem::path(path).parent_path().string());
}

void apply_env_overrides(PipelineConfig& config) {
  if (const char* port = std::getenv("FAKEWATCH_PORT"); port && *port) {
    char* end = nullptr;
    long v = std::strtol(port, &end, 10);
    if (*end != '\0' || v < 0 || v > 65535) bad("FAKEWATCH_PORT", std::string("not a port: ") + port);
    config.service.port = static_cast<int>(v);
  }
  if (const char* roster = std::getenv("FAKEWATCH_ROSTER"); roster && *roster) config.service.roster = roster;
}

void override_seed(PipelineConfig& config, std::uint64_t seed) {
  config.seed = seed;
  for (auto& spec : config.models) spec.seed = seed;
}

}  // namespace fakewatch::cli
