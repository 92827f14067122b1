#include "fakewatch/cli/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <future>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include "fakewatch/analysis/lda.hpp"
#include "fakewatch/analysis/liwc.hpp"
#include "fakewatch/analysis/sentiment.hpp"
#include "fakewatch/analysis/topic_network.hpp"
#include "fakewatch/analysis/tsne.hpp"
#include "fakewatch/common/error.hpp"
#include "fakewatch/common/hash.hpp"
#include "fakewatch/common/rng.hpp"
#include "fakewatch/common/strings.hpp"
#include "fakewatch/corpus/corpus.hpp"
#include "fakewatch/corpus/feed.hpp"
#include "fakewatch/corpus/io.hpp"
#include "fakewatch/corpus/text.hpp"
#include "fakewatch/evaluation/comparison.hpp"
#include "fakewatch/evaluation/metrics.hpp"
#include "fakewatch/evaluation/roc.hpp"
#include "fakewatch/features/key_terms.hpp"
#include "fakewatch/features/tfidf.hpp"
#include "fakewatch/features/tokenizer.hpp"
#include "fakewatch/labeling/labeler.hpp"
#include "fakewatch/labeling/prompt.hpp"
#include "fakewatch/labeling/workflow.hpp"
#include "fakewatch/model_hub/hub.hpp"
#include "fakewatch/model_hub/registry.hpp"
#include "fakewatch/service/api.hpp"
#include "fakewatch/service/http_server.hpp"

namespace fakewatch::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

OutputFormat parse_output_format(const std::string& name) {
  if (name == "text") return OutputFormat::kText;
  if (name == "json") return OutputFormat::kJson;
  if (name == "csv") return OutputFormat::kCsv;
  throw Error(ErrorCode::kInvalidArgument, "--format must be json, csv or text, got '" + name + "'");
}

void write_output(const std::string& path, const std::string& contents) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  write_file(tmp.string(), contents);
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot replace " + path + ": " + ec.message());
}

namespace {

std::string json_text(const ordered_json& j) {
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

// Flat key/value summary printed on stdout in the requested format.
class Summary {
 public:
  template <typename T>
  void add(const std::string& key, T value) {
    data_[key] = value;
  }
  void print(std::ostream& out, OutputFormat format) const {
    if (format == OutputFormat::kJson) {
      out << json_text(data_);
      return;
    }
    if (format == OutputFormat::kCsv) out << "key,value\n";
    for (const auto& [k, v] : data_.items()) {
      std::string value = v.is_string() ? v.get<std::string>() : v.dump();
      if (format == OutputFormat::kCsv) {
        out << corpus::csv_escape(k) << ',' << corpus::csv_escape(value) << '\n';
      } else {
        out << k << ": " << value << '\n';
      }
    }
  }

 private:
  ordered_json data_ = ordered_json::object();
};

void write_meta(const std::string& primary_path, ordered_json extra) {
  ordered_json meta;
  meta["generated_at"] = format_iso8601(now_utc());
  meta["output"] = fs::path(primary_path).filename().string();
  for (auto& [k, v] : extra.items()) meta[k] = v;
  write_output(primary_path + ".meta.json", json_text(meta));
}

std::vector<std::string> feed_files(const std::vector<std::string>& sources) {
  std::vector<std::string> files;
  for (const auto& src : sources) {
    if (fs::is_directory(src)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(src)) {
        if (entry.is_regular_file()) found.push_back(entry.path().string());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(src)) {
      files.push_back(src);
    } else {
      throw Error(ErrorCode::kNotFound, "feed source not found: " + src);
    }
  }
  return files;
}

bool in_range(Timestamp ts, const IngestConfig& cfg) {
  return !((cfg.from && ts < *cfg.from) || (cfg.to && ts > *cfg.to));
}

features::TokenizerConfig tokenizer_for(const PipelineConfig& config) {
  features::TokenizerConfig tok;
  tok.min_token_length = config.features.min_token_length;
  if (!config.paths.stopwords.empty()) tok.stopwords = features::load_stopwords(config.paths.stopwords);
  return tok;
}

std::string corpus_input(const PipelineConfig& config, const CommandOptions& options) {
  return options.input.empty() ? config.paths.corpus : options.input;
}

// Training reads the verified export when one exists, else the labeled corpus.
std::string training_input(const PipelineConfig& config, const CommandOptions& options) {
  if (!options.input.empty()) return options.input;
  if (!config.paths.verified.empty() && fs::exists(config.paths.verified)) return config.paths.verified;
  return config.paths.corpus;
}

corpus::Corpus require_corpus(const std::string& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kNotFound, "corpus not found: " + path + " (run `fakewatch ingest`)");
  return corpus::load_corpus(path);
}

// n indices out of `pool`, sampled under the seed and returned in pool order.
std::vector<std::size_t> sample_indices(std::vector<std::size_t> pool, std::size_t n, std::uint64_t seed) {
  if (n == 0 || pool.size() <= n) return pool;
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(pool));
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<std::string> annotators_from(const std::vector<service::ApiSession>& roster) {
  std::set<std::string> ids;
  for (const auto& s : roster) ids.insert(s.annotator_id);
  return {ids.begin(), ids.end()};
}

// ---- train / evaluate ------------------------------------------------------

struct FittedModel {
  std::string name;
  model_hub::TrainedModel model;
};

struct Failure {
  std::string name;
  std::string message;
};

struct EvaluationRun {
  std::vector<evaluation::ComparisonRow> rows;
  std::vector<std::pair<std::string, evaluation::RocCurve>> roc;  // registry name -> curve
  std::vector<Failure> failures;
};

EvaluationRun evaluate_models(const std::vector<FittedModel>& models, const std::vector<corpus::Record>& test) {
  EvaluationRun run;
  std::vector<int> labels;
  for (const auto& r : test) labels.push_back(r.label_value());
  std::vector<evaluation::ComparisonInput> inputs;
  for (const auto& fm : models) {
    try {
      if (!fm.model.featurizer) throw Error(ErrorCode::kState, "model has no featurizer");
      std::vector<double> scores;
      std::vector<int> predictions;
      for (const auto& r : test) {
        auto score = model_hub::decision_score(fm.model, fm.model.featurizer->vectorize(r.text));
        scores.push_back(score.value);
        predictions.push_back(model_hub::label_from_score(score.value, score.kind));
      }
      evaluation::ComparisonInput in;
      in.name = std::string(model_hub::algorithm_display_name(fm.model.spec.algorithm));
      in.report = evaluation::classification_metrics(evaluation::confusion_matrix(predictions, labels));
      try {
        auto curve = evaluation::roc_curve_auc(scores, labels);
        in.auc = curve.auc;
        run.roc.emplace_back(fm.name, std::move(curve));
      } catch (const Error&) {
        // single-class test partition: AUC undefined
      }
      inputs.push_back(std::move(in));
    } catch (const std::exception& e) {
      run.failures.push_back({fm.name, e.what()});
    }
  }
  run.rows = evaluation::model_comparison_table(std::move(inputs));
  return run;
}

std::string roc_csv(const evaluation::RocCurve& curve) {
  std::string out = "fpr,tpr,threshold\n";
  char buf[96];
  for (const auto& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.fpr, p.tpr, p.threshold);
    out += buf;
  }
  return out;
}

// Writes report.{csv,json,txt} and roc/<model>.csv under `dir`.
void write_reports(const std::string& dir, const EvaluationRun& run, std::uint64_t seed, std::size_t train_size,
                   std::size_t test_size, const std::vector<Failure>& fit_failures) {
  std::vector<Failure> failures = fit_failures;
  failures.insert(failures.end(), run.failures.begin(), run.failures.end());
  std::sort(failures.begin(), failures.end(), [](const Failure& a, const Failure& b) { return a.name < b.name; });

  std::string csv = "# seed=" + std::to_string(seed) + "\n" + evaluation::comparison_csv(run.rows);
  for (const auto& f : failures) csv += "# failed " + f.name + ": " + f.message + "\n";

  ordered_json j;
  j["seed"] = seed;
  j["train_size"] = train_size;
  j["test_size"] = test_size;
  j["models"] = ordered_json::parse(evaluation::comparison_json(run.rows));
  j["failures"] = ordered_json::array();
  for (const auto& f : failures) j["failures"].push_back({{"model", f.name}, {"error", f.message}});

  std::string txt = "seed: " + std::to_string(seed) + "\ntrain: " + std::to_string(train_size) +
                    "  test: " + std::to_string(test_size) + "\n\n" + evaluation::comparison_text(run.rows);
  if (!failures.empty()) {
    txt += "\nfailed:\n";
    for (const auto& f : failures) txt += "  " + f.name + ": " + f.message + "\n";
  }

  write_output((fs::path(dir) / "report.csv").string(), csv);
  write_output((fs::path(dir) / "report.json").string(), json_text(j));
  write_output((fs::path(dir) / "report.txt").string(), txt);
  for (const auto& [name, curve] : run.roc) {
    write_output((fs::path(dir) / "roc" / (name + ".csv")).string(), roc_csv(curve));
  }
}

void print_report(std::ostream& out, const EvaluationRun& run, OutputFormat format) {
  switch (format) {
    case OutputFormat::kJson: out << evaluation::comparison_json(run.rows); break;
    case OutputFormat::kCsv: out << evaluation::comparison_csv(run.rows); break;
    case OutputFormat::kText: out << evaluation::comparison_text(run.rows); break;
  }
}

constexpr const char* kTestSetFile = "test_set.jsonl";
constexpr const char* kManifestFile = "manifest.json";

// ---- analyze ---------------------------------------------------------------

struct AnalyzeContext {
  const PipelineConfig& config;
  const CommandOptions& options;
  const corpus::Corpus& corpus;
  std::string dir;
  std::ostream& out;
};

std::string artifact(const AnalyzeContext& ctx, const std::string& name) { return (fs::path(ctx.dir) / name).string(); }

analysis::SentimentLexicon require_lexicon(const PipelineConfig& config) {
  if (config.paths.sentiment_lexicon.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no sentiment lexicon configured; pass --sentiment-lexicon or set paths.sentiment_lexicon");
  }
  if (!fs::exists(config.paths.sentiment_lexicon)) {
    throw Error(ErrorCode::kNotFound, "sentiment lexicon not found: " + config.paths.sentiment_lexicon +
                                          " (check --sentiment-lexicon or paths.sentiment_lexicon)");
  }
  return analysis::load_sentiment_lexicon(config.paths.sentiment_lexicon);
}

void analyze_topics(const AnalyzeContext& ctx) {
  const auto& a = ctx.config.analysis;
  auto lexicon = require_lexicon(ctx.config);
  auto tok = tokenizer_for(ctx.config);
  std::vector<features::TokenizedDoc> docs;
  for (const auto& r : ctx.corpus.records) docs.push_back(features::tokenize(r.text, tok));

  analysis::LdaOptions lda;
  lda.alpha = a.lda_alpha;
  lda.beta = a.lda_beta;
  lda.iterations = a.lda_iterations;
  lda.seed = ctx.config.seed;

  std::size_t k = a.topics;
  if (!ctx.options.topics.empty()) {
    if (ctx.options.topics == "auto") {
      k = 0;
    } else {
      try {
        k = static_cast<std::size_t>(std::stoul(ctx.options.topics));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kInvalidArgument, "--k must be 'auto' or a positive count");
      }
      if (k == 0) throw Error(ErrorCode::kInvalidArgument, "--k must be 'auto' or a positive count");
    }
  }
  std::optional<analysis::TopicCountSelection> selection;
  if (k == 0) {
    std::vector<std::size_t> candidates;
    for (std::size_t c = a.k_min; c <= a.k_max; ++c) candidates.push_back(c);
    selection = analysis::select_topic_count(docs, candidates, lda, a.top_terms);
    k = selection->topics;
  }
  lda.topics = k;
  auto model = analysis::lda_fit(docs, lda);
  std::size_t top_n = std::min(a.top_terms, model.vocabulary_size());
  auto coherence = analysis::topic_coherence(model, docs, top_n);

  analysis::NetworkOptions net;
  net.edge_threshold = a.edge_threshold;
  net.negative_threshold = a.negative_threshold;
  net.positive_threshold = a.positive_threshold;
  net.metric = a.similarity == "cosine" ? analysis::SimilarityMetric::kCosine : analysis::SimilarityMetric::kJensenShannon;
  net.top_terms = top_n;
  auto network = analysis::build_topic_network(model, ctx.corpus, lexicon, net);

  ordered_json j;
  j["seed"] = ctx.config.seed;
  j["topics"] = k;
  j["alpha"] = model.alpha;
  j["beta"] = model.beta;
  j["iterations"] = model.iterations;
  j["vocabulary_size"] = model.vocabulary_size();
  j["selection"] = ordered_json::array();
  if (selection) {
    for (const auto& s : selection->scores) {
      j["selection"].push_back({{"topics", s.topics}, {"mean_coherence", s.mean_coherence}});
    }
  }
  j["mean_coherence"] = 0.0;
  double total = 0.0;
  for (double c : coherence) total += c;
  j["mean_coherence"] = coherence.empty() ? 0.0 : total / static_cast<double>(coherence.size());
  ordered_json items = ordered_json::array();
  std::string csv = "topic,article_count,coherence,top_terms\n";
  for (std::size_t t = 0; t < k; ++t) {
    ordered_json item;
    item["topic"] = t;
    item["article_count"] = network.nodes[t].article_count;
    item["coherence"] = coherence[t];
    ordered_json terms = ordered_json::array();
    for (auto idx : model.top_term_indices(t, top_n)) terms.push_back({{"term", model.terms[idx]}, {"weight", model.phi[t][idx]}});
    item["terms"] = terms;
    items.push_back(item);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", coherence[t]);
    csv += std::to_string(t) + "," + std::to_string(network.nodes[t].article_count) + "," + buf + "," +
           corpus::csv_escape(join(model.top_terms(t, top_n), " ")) + "\n";
  }
  j["items"] = items;
  ordered_json docs_json = ordered_json::array();
  for (std::size_t d = 0; d < ctx.corpus.records.size(); ++d) {
    docs_json.push_back({{"id", ctx.corpus.records[d].id}, {"topic", analysis::dominant_topic(model, d)}});
  }
  j["documents"] = docs_json;

  write_output(artifact(ctx, "topics.json"), json_text(j));
  write_output(artifact(ctx, "topics.csv"), csv);
  write_output(artifact(ctx, "network.json"), network_json(network));
  write_output(artifact(ctx, "network_nodes.csv"), network_nodes_csv(network));
  write_output(artifact(ctx, "network_edges.csv"), network_edges_csv(network));
  ctx.out << "topics: K=" << k << (selection ? " (chosen by coherence)" : "") << ", " << network.edges.size()
          << " network edges\n";
}

void analyze_liwc(const AnalyzeContext& ctx) {
  if (ctx.config.paths.liwc_dictionary.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no LIWC dictionary configured; pass --liwc-dictionary or set paths.liwc_dictionary");
  }
  if (!fs::exists(ctx.config.paths.liwc_dictionary)) {
    throw Error(ErrorCode::kNotFound, "LIWC dictionary not found: " + ctx.config.paths.liwc_dictionary +
                                          " (check --liwc-dictionary or paths.liwc_dictionary)");
  }
  auto dict = analysis::load_liwc_dictionary(ctx.config.paths.liwc_dictionary);
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < ctx.corpus.records.size(); ++i) {
    const auto& r = ctx.corpus.records[i];
    if (r.is_labeled() && !analysis::analysis_tokens(r.text).empty()) {
      by_class[static_cast<std::size_t>(r.label_value())].push_back(i);
    }
  }
  std::array<std::vector<analysis::LiwcProfile>, 2> profiles;
  for (std::size_t c = 0; c < 2; ++c) {
    for (auto i : sample_indices(by_class[c], ctx.config.analysis.liwc_per_class, mix_seed(ctx.config.seed, c))) {
      profiles[c].push_back(analysis::liwc_profile(ctx.corpus.records[i].text, dict));
    }
  }
  auto rows = analysis::liwc_comparison(profiles[1], profiles[0], dict.categories());
  ordered_json j;
  j["seed"] = ctx.config.seed;
  j["fake_documents"] = profiles[1].size();
  j["real_documents"] = profiles[0].size();
  j["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"category", r.category},
                         {"mean_fake", r.mean_fake},
                         {"mean_real", r.mean_real},
                         {"difference", r.difference},
                         {"p_value", r.p_value},
                         {"significant", r.significant}});
  }
  write_output(artifact(ctx, "liwc.json"), json_text(j));
  write_output(artifact(ctx, "liwc.csv"), analysis::liwc_comparison_csv(rows));
  std::size_t significant = 0;
  for (const auto& r : rows) significant += r.significant ? 1 : 0;
  ctx.out << "liwc: " << rows.size() << " categories, " << significant << " significant\n";
}

void analyze_sentiment(const AnalyzeContext& ctx) {
  auto lexicon = require_lexicon(ctx.config);
  auto hist = analysis::polarity_histogram(ctx.corpus, lexicon, ctx.config.analysis.histogram_bins);
  ordered_json j;
  j["seed"] = ctx.config.seed;
  j["edges"] = hist.edges;
  j["fake"] = hist.fake;
  j["real"] = hist.real;
  j["unlabeled"] = hist.unlabeled;
  std::string csv = "bin_lo,bin_hi,fake,real,unlabeled\n";
  char buf[64];
  for (std::size_t b = 0; b + 1 < hist.edges.size(); ++b) {
    std::snprintf(buf, sizeof buf, "%.4f,%.4f,", hist.edges[b], hist.edges[b + 1]);
    csv += buf + std::to_string(hist.fake[b]) + "," + std::to_string(hist.real[b]) + "," +
           std::to_string(hist.unlabeled[b]) + "\n";
  }
  write_output(artifact(ctx, "sentiment.json"), json_text(j));
  write_output(artifact(ctx, "sentiment.csv"), csv);
  ctx.out << "sentiment: " << ctx.corpus.records.size() << " documents in " << ctx.config.analysis.histogram_bins
          << " bins\n";
}

void analyze_keyterms(const AnalyzeContext& ctx) {
  std::vector<std::string> terms = ctx.config.analysis.key_terms;
  if (terms.empty()) {
    std::set<std::string> all;
    for (const auto& g : ctx.config.keyword_groups) all.insert(g.terms.begin(), g.terms.end());
    terms.assign(all.begin(), all.end());
  }
  if (terms.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no key terms; set analysis.key_terms or define keyword groups");
  }
  auto all = features::key_term_frequencies(ctx.corpus, terms, features::KeyTermScope::kAll);
  auto fake = features::key_term_frequencies(ctx.corpus, terms, features::KeyTermScope::kFakeOnly);
  auto real = features::key_term_frequencies(ctx.corpus, terms, features::KeyTermScope::kRealOnly);
  ordered_json j;
  j["seed"] = ctx.config.seed;
  j["terms"] = ordered_json::array();
  std::string csv = "term,all,fake,real\n";
  for (const auto& [term, count] : all) {
    j["terms"].push_back({{"term", term}, {"all", count}, {"fake", fake.at(term)}, {"real", real.at(term)}});
    csv += corpus::csv_escape(term) + "," + std::to_string(count) + "," + std::to_string(fake.at(term)) + "," +
           std::to_string(real.at(term)) + "\n";
  }
  write_output(artifact(ctx, "keyterms.json"), json_text(j));
  write_output(artifact(ctx, "keyterms.csv"), csv);
  ctx.out << "keyterms: " << all.size() << " terms\n";
}

void analyze_tsne(const AnalyzeContext& ctx) {
  const auto& a = ctx.config.analysis;
  std::vector<std::size_t> all(ctx.corpus.records.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto picked = sample_indices(all, a.tsne_max_points, mix_seed(ctx.config.seed, 0x74736e65ULL));
  if (picked.size() < 4) throw Error(ErrorCode::kEmptyInput, "t-SNE needs at least 4 documents");

  auto tok = tokenizer_for(ctx.config);
  std::vector<features::TokenizedDoc> docs;
  for (auto i : picked) docs.push_back(features::tokenize(ctx.corpus.records[i].text, tok));
  features::TfidfOptions tf;
  tf.min_df = std::min<std::size_t>(ctx.config.features.min_df, 2);
  tf.max_features = ctx.config.features.max_features;
  auto tfidf = features::TfidfModel::fit(docs, tf);
  auto vectors = tfidf.transform_all(docs);

  analysis::TsneOptions opt;
  // Perplexity must stay below the point count; small corpora get n/3.
  opt.perplexity = std::min(a.perplexity, std::max(1.0, static_cast<double>(picked.size() - 1) / 3.0));
  opt.iterations = a.tsne_iterations;
  opt.seed = ctx.config.seed;
  auto emb = analysis::tsne_embed(vectors, opt);

  std::vector<std::string> ids;
  std::vector<int> labels;
  ordered_json points = ordered_json::array();
  for (std::size_t k = 0; k < picked.size(); ++k) {
    const auto& r = ctx.corpus.records[picked[k]];
    ids.push_back(r.id);
    labels.push_back(r.label_value());
    points.push_back({{"id", r.id}, {"x", emb.points[k][0]}, {"y", emb.points[k][1]}, {"label", r.label_value()}});
  }
  ordered_json j;
  j["seed"] = ctx.config.seed;
  j["perplexity"] = opt.perplexity;
  j["iterations"] = opt.iterations;
  j["initial_kl"] = emb.initial_kl;
  j["final_kl"] = emb.final_kl;
  j["points"] = points;
  write_output(artifact(ctx, "embedding.json"), json_text(j));
  write_output(artifact(ctx, "embedding.csv"), analysis::embedding_csv(emb, ids, labels));
  ctx.out << "tsne: " << picked.size() << " points, KL " << emb.initial_kl << " -> " << emb.final_kl << "\n";
}

}  // namespace

// ---- commands --------------------------------------------------------------

int cmd_ingest(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const auto& ic = config.ingest;
  if (ic.feeds.empty() && ic.benchmark.empty()) {
    err << "error: nothing to ingest; set ingest.feeds and/or ingest.benchmark\n";
    return kExitUsage;
  }

  std::vector<corpus::Record> curated;
  std::set<std::string> seen_ids;
  std::size_t items = 0, out_of_range = 0, empty_text = 0, repeated = 0;
  std::vector<std::string> feed_errors;
  for (const auto& file : feed_files(ic.feeds)) {
    std::vector<corpus::RawFeedItem> parsed;
    try {
      parsed = corpus::parse_feed(read_file(file));
    } catch (const Error& e) {
      feed_errors.push_back(file + ": " + e.what());
      continue;
    }
    for (const auto& item : parsed) {
      ++items;
      corpus::Article article;
      article.url = item.link.empty() ? item.title : item.link;
      article.id = corpus::article_id(article.url);
      article.source = item.source_name.empty() ? fs::path(file).stem().string() : item.source_name;
      article.published_at = item.published_at.value_or(kSentinelTimestamp);
      if (!in_range(article.published_at, ic)) {
        ++out_of_range;
        continue;
      }
      std::string body = corpus::strip_html(item.summary);
      if (trim(body).empty()) body = item.title;
      if (trim(body).empty()) {
        ++empty_text;
        continue;
      }
      article.text = corpus::extract_article_text(body, ic.max_sentences);
      article.keyword_group = corpus::categorize_article(article.text, config.keyword_groups);
      article.text = corpus::sanitize_text(article.text);
      if (trim(article.text).empty()) {
        ++empty_text;
        continue;
      }
      if (!seen_ids.insert(article.id).second) {
        ++repeated;
        continue;
      }
      curated.push_back(corpus::record_from_article(article));
    }
  }

  std::vector<corpus::Record> benchmark;
  std::optional<corpus::BenchmarkLoadResult> bench_result;
  if (!ic.benchmark.empty()) {
    corpus::BenchmarkLoadOptions bo;
    bo.label_provenance = corpus::parse_label_provenance(ic.benchmark_label_provenance);
    bo.from = ic.from;
    bo.to = ic.to;
    bo.limit = ic.benchmark_limit;
    bool jsonl = fs::path(ic.benchmark).extension() == ".jsonl";
    bench_result = corpus::load_benchmark(read_file(ic.benchmark), jsonl, bo);
    for (auto& r : bench_result->records) {
      r.text = corpus::sanitize_text(r.text);
      if (trim(r.text).empty()) continue;
      r.metadata["keyword_group"] = corpus::categorize_article(r.text, config.keyword_groups);
      benchmark.push_back(std::move(r));
    }
  }

  auto merged = corpus::consolidate(curated, benchmark);
  auto deduped = corpus::dedupe_records(merged);

  for (const auto& e : feed_errors) err << "warning: unreadable feed " << e << "\n";
  if (deduped.records.empty()) {
    err << "error: zero records ingested (" << items << " feed items, " << out_of_range << " outside the date range, "
        << empty_text << " without text";
    if (bench_result) {
      err << "; benchmark: " << bench_result->outside_date_range << " outside the date range, "
          << bench_result->dropped_missing_text << " without text";
    }
    err << ")\n";
    return kExitFailure;
  }

  std::map<std::string, std::size_t> groups;
  for (const auto& g : config.keyword_groups) groups[g.name] = 0;
  groups[corpus::kUncategorized] = 0;
  for (const auto& r : deduped.records) {
    auto it = r.metadata.find("keyword_group");
    ++groups[it == r.metadata.end() ? corpus::kUncategorized : it->second];
  }

  std::string path = options.out.empty() ? config.paths.corpus : options.out;
  write_output(path, corpus::corpus_to_jsonl(deduped));
  ordered_json meta;
  meta["seed"] = config.seed;
  meta["feed_items"] = items;
  meta["curated"] = curated.size();
  meta["benchmark"] = benchmark.size();
  write_meta(path, meta);

  Summary s;
  s.add("corpus", path);
  s.add("records", deduped.records.size());
  s.add("curated", curated.size());
  s.add("benchmark", benchmark.size());
  s.add("duplicates_removed", merged.records.size() - deduped.records.size() + repeated);
  s.add("outside_date_range", out_of_range + (bench_result ? bench_result->outside_date_range : 0));
  if (bench_result) s.add("benchmark_missing_dates", bench_result->missing_dates);
  for (const auto& [g, n] : groups) s.add("group." + g, n);
  s.print(out, options.format);
  return feed_errors.empty() ? kExitOk : kExitFailure;
}

int cmd_label(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  std::string input = corpus_input(config, options);
  std::string path = options.out.empty() ? input : options.out;
  auto corpus = require_corpus(input);
  auto client = labeling::make_labeler_client(config.labeling.labeler);
  labeling::LabelPrompt prompt(
      config.labeling.prompt_template.empty() ? std::string(labeling::kDefaultPromptTemplate)
                                              : read_file(config.labeling.prompt_template),
      config.labeling.max_article_chars);
  labeling::RetryPolicy retry{config.labeling.max_attempts};

  std::size_t already = 0, labeled = 0, since_checkpoint = 0;
  std::vector<Failure> failures;
  bool unreachable = false;
  for (auto& r : corpus.records) {
    if (r.is_labeled()) {
      ++already;
      continue;
    }
    if (options.label_limit > 0 && labeled >= options.label_limit) break;
    try {
      labeling::request_llm_label(r, *client, prompt, retry);
      ++labeled;
      if (++since_checkpoint >= std::max<std::size_t>(1, config.labeling.checkpoint_every)) {
        write_output(path, corpus::corpus_to_jsonl(corpus));
        since_checkpoint = 0;
      }
    } catch (const Error& e) {
      failures.push_back({r.id, e.what()});
      if (e.code() == ErrorCode::kTransport) {
        unreachable = true;
        break;
      }
    }
  }
  write_output(path, corpus::corpus_to_jsonl(corpus));

  std::size_t remaining = 0;
  for (const auto& r : corpus.records) remaining += r.is_labeled() ? 0 : 1;
  Summary s;
  s.add("corpus", path);
  s.add("labeler", client->id());
  s.add("labeled_now", labeled);
  s.add("already_labeled", already);
  s.add("remaining", remaining);
  s.add("failures", failures.size());
  s.print(out, options.format);
  for (const auto& f : failures) err << "failed " << f.name << ": " << f.message << "\n";
  if (unreachable) err << "labeler unreachable; progress saved, rerun `fakewatch label` to resume\n";
  return failures.empty() ? kExitOk : kExitFailure;
}

int cmd_verify(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  if (config.service.roster.empty()) {
    err << "error: no roster configured; set service.roster or FAKEWATCH_ROSTER\n";
    return kExitUsage;
  }
  auto roster = service::load_roster(config.service.roster);
  auto corpus = require_corpus(corpus_input(config, options));
  auto workflow = std::make_shared<labeling::ReviewWorkflow>(std::move(corpus), config.paths.event_log);
  workflow->open(annotators_from(roster), config.seed);

  service::ServiceConfig sc;
  sc.roster = std::move(roster);
  sc.blind_review = config.service.blind_review;
  sc.key_terms = config.analysis.key_terms;
  if (sc.key_terms.empty()) {
    for (const auto& g : config.keyword_groups) sc.key_terms.insert(sc.key_terms.end(), g.terms.begin(), g.terms.end());
  }
  sc.analysis_dir = config.paths.analysis;
  sc.registry_dir = config.paths.registry;
  service::ApiService api(std::move(sc), workflow);
  service::HttpServer server(api);
  int port = server.start(config.service.host, config.service.port);
  out << "serving " << workflow->assignments().size() << " review assignments on http://" << config.service.host << ":"
      << port << "/api\n"
      << std::flush;
  if (options.stop) {
    while (!options.stop->load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  } else {
    server.wait();
  }
  out << "stopped\n";
  return kExitOk;
}

int cmd_train(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  std::string input = training_input(config, options);
  auto source = require_corpus(input);
  corpus::Corpus labeled;
  for (const auto& r : source.records) {
    if (r.is_labeled()) labeled.records.push_back(r);
  }
  if (labeled.records.empty()) {
    err << "error: " << input << " holds no labeled records (run `fakewatch label` or `fakewatch export`)\n";
    return kExitFailure;
  }
  auto split = corpus::split_corpus(labeled, config.split.train_fraction, config.seed);
  if (config.split.upsample) split = corpus::upsample_train(split, config.seed);

  std::vector<const corpus::Record*> train_records = split.partition(corpus::Partition::kTrain);
  std::vector<corpus::Record> test;
  for (const auto* r : split.partition(corpus::Partition::kTest)) test.push_back(*r);

  // Vocabulary and idf come from the original training documents; upsampled
  // copies would only inflate document frequencies.
  auto featurizer = std::make_shared<model_hub::Featurizer>();
  featurizer->tokenizer = tokenizer_for(config);
  std::vector<features::TokenizedDoc> vocab_docs;
  for (const auto* r : train_records) {
    if (!r->metadata.contains("upsampled_from")) vocab_docs.push_back(features::tokenize(r->text, featurizer->tokenizer));
  }
  features::TfidfOptions tf;
  tf.min_df = config.features.min_df;
  tf.max_features = config.features.max_features;
  featurizer->tfidf = features::TfidfModel::fit(vocab_docs, tf);

  model_hub::TrainingSet data;
  data.dimension = featurizer->tfidf.dimension();
  for (const auto* r : train_records) {
    data.x.push_back(featurizer->vectorize(r->text));
    data.y.push_back(r->label_value());
  }

  std::vector<std::future<model_hub::TrainedModel>> jobs;
  for (const auto& spec : config.models) {
    jobs.push_back(std::async(std::launch::async, [&spec, &data, &featurizer] {
      auto m = model_hub::fit_model(spec, data, featurizer->tfidf.fingerprint());
      m.featurizer = featurizer;
      return m;
    }));
  }
  std::string registry_root = config.paths.registry;
  model_hub::ModelRegistry registry(registry_root);
  std::vector<FittedModel> fitted;
  std::vector<Failure> fit_failures;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::string name(model_hub::algorithm_name(config.models[i].algorithm));
    try {
      auto m = jobs[i].get();
      registry.store(name, m);
      fitted.push_back({name, std::move(m)});
    } catch (const std::exception& e) {
      fit_failures.push_back({name, e.what()});
    }
  }

  corpus::Corpus test_corpus;
  test_corpus.records = test;
  write_output((fs::path(registry_root) / kTestSetFile).string(), corpus::corpus_to_jsonl(test_corpus));
  ordered_json manifest;
  manifest["seed"] = config.seed;
  manifest["train_size"] = train_records.size();
  manifest["test_size"] = test.size();
  manifest["models"] = ordered_json::array();
  for (const auto& f : fitted) manifest["models"].push_back(f.name);
  manifest["failures"] = ordered_json::array();
  for (const auto& f : fit_failures) manifest["failures"].push_back({{"model", f.name}, {"error", f.message}});
  write_output((fs::path(registry_root) / kManifestFile).string(), json_text(manifest));

  auto run = evaluate_models(fitted, test);
  std::string reports = options.out.empty() ? config.paths.reports : options.out;
  write_reports(reports, run, config.seed, train_records.size(), test.size(), fit_failures);
  write_meta((fs::path(reports) / "report").string(), {{"input", input}, {"registry", registry_root}});

  print_report(out, run, options.format);
  std::size_t failed = fit_failures.size() + run.failures.size();
  for (const auto& f : fit_failures) err << "failed " << f.name << ": " << f.message << "\n";
  for (const auto& f : run.failures) err << "failed " << f.name << ": " << f.message << "\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_evaluate(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  fs::path root(config.paths.registry);
  if (!fs::exists(root / kManifestFile)) {
    err << "error: no trained models under " << root.string() << " (run `fakewatch train`)\n";
    return kExitFailure;
  }
  auto manifest = ordered_json::parse(read_file((root / kManifestFile).string()));
  auto test = corpus::load_corpus(options.input.empty() ? (root / kTestSetFile).string() : options.input);
  model_hub::ModelRegistry registry(root.string());
  std::vector<FittedModel> models;
  std::vector<Failure> failures;
  for (const auto& f : manifest.at("failures")) {
    failures.push_back({f.at("model").get<std::string>(), f.at("error").get<std::string>()});
  }
  for (const auto& name : manifest.at("models")) {
    std::string n = name.get<std::string>();
    try {
      models.push_back({n, registry.load(n)});
    } catch (const Error& e) {
      failures.push_back({n, e.what()});
    }
  }
  auto run = evaluate_models(models, test.records);
  std::string reports = options.out.empty() ? config.paths.reports : options.out;
  write_reports(reports, run, manifest.at("seed").get<std::uint64_t>(), manifest.at("train_size").get<std::size_t>(),
                test.records.size(), failures);
  print_report(out, run, options.format);
  for (const auto& f : failures) err << "failed " << f.name << ": " << f.message << "\n";
  for (const auto& f : run.failures) err << "failed " << f.name << ": " << f.message << "\n";
  return failures.empty() && run.failures.empty() ? kExitOk : kExitFailure;
}

int cmd_analyze(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> kKinds = {"topics", "liwc", "sentiment", "keyterms", "tsne"};
  std::vector<std::string> kinds;
  if (options.analyze_kind == "all") {
    kinds = kKinds;
  } else if (options.analyze_kind == "network") {
    kinds = {"topics"};
  } else if (options.analyze_kind == "embedding") {
    kinds = {"tsne"};
  } else if (std::find(kKinds.begin(), kKinds.end(), options.analyze_kind) != kKinds.end()) {
    kinds = {options.analyze_kind};
  } else {
    err << "error: unknown analysis kind '" << options.analyze_kind << "' (expected " << join(kKinds, ", ")
        << " or all)\n";
    return kExitUsage;
  }
  auto corpus = require_corpus(training_input(config, options));
  AnalyzeContext ctx{config, options, corpus, options.out.empty() ? config.paths.analysis : options.out, out};
  std::vector<Failure> failures;
  for (const auto& kind : kinds) {
    try {
      if (kind == "topics") analyze_topics(ctx);
      else if (kind == "liwc") analyze_liwc(ctx);
      else if (kind == "sentiment") analyze_sentiment(ctx);
      else if (kind == "keyterms") analyze_keyterms(ctx);
      else analyze_tsne(ctx);
    } catch (const Error& e) {
      // A single explicitly requested kind fails like a bad argument.
      if (kinds.size() == 1) throw;
      failures.push_back({kind, e.what()});
    }
  }
  for (const auto& f : failures) err << "failed " << f.name << ": " << f.message << "\n";
  return failures.empty() ? kExitOk : kExitFailure;
}

int cmd_export(const PipelineConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  if (!fs::exists(config.paths.event_log)) {
    err << "error: no review log at " << config.paths.event_log << " (run `fakewatch verify` first)\n";
    return kExitFailure;
  }
  auto corpus = require_corpus(corpus_input(config, options));
  labeling::ReviewWorkflow workflow(std::move(corpus), config.paths.event_log);
  std::vector<std::string> annotators;
  if (!config.service.roster.empty() && fs::exists(config.service.roster)) {
    annotators = annotators_from(service::load_roster(config.service.roster));
  }
  workflow.open(annotators, config.seed);
  auto verified = workflow.export_verified();
  std::string path = options.out.empty() ? config.paths.verified : options.out;
  write_output(path, corpus::corpus_to_jsonl(verified));

  std::size_t open = 0, conflicted = 0, dual = 0;
  for (const auto& a : workflow.assignments()) {
    if (a.verdicts.size() >= 2) ++dual;
    if (a.state == labeling::ReviewState::kConflicted) ++conflicted;
    else if (a.state != labeling::ReviewState::kAgreed && a.state != labeling::ReviewState::kResolved) ++open;
  }
  Summary s;
  s.add("verified", verified.records.size());
  s.add("output", path);
  s.add("open", open);
  s.add("conflicted", conflicted);
  s.add("pairs", dual);
  if (dual > 0) s.add("kappa", workflow.agreement().kappa);
  s.print(out, options.format);
  return kExitOk;
}

}  // namespace fakewatch::cli
