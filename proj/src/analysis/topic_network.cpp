#include "fakewatch/analysis/topic_network.hpp"

#include <cstdio>
#include <json.hpp>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/strings.hpp"

namespace fakewatch::analysis {

const char* to_string(SentimentClass c) {
  switch (c) {
    case SentimentClass::kNegative:
      return "negative";
    case SentimentClass::kNeutral:
      return "neutral";
    case SentimentClass::kPositive:
      return "positive";
  }
  return "neutral";
}

SentimentClass classify_sentiment(double mean, const NetworkOptions& options) {
  if (mean <= options.negative_threshold) return SentimentClass::kNegative;
  if (mean >= options.positive_threshold) return SentimentClass::kPositive;
  return SentimentClass::kNeutral;
}

TopicNetwork build_topic_network(const LdaModel& model, const corpus::Corpus& corpus, const SentimentLexicon& lexicon,
                                 const NetworkOptions& options) {
  if (model.theta.size() != corpus.records.size()) {
    throw Error(ErrorCode::kInvalidArgument, "topic model covers " + std::to_string(model.theta.size()) +
                                                 " documents but the corpus has " +
                                                 std::to_string(corpus.records.size()));
  }
  TopicNetwork net;
  std::vector<double> sentiment_sum(model.topics, 0.0);
  net.nodes.resize(model.topics);
  for (std::size_t k = 0; k < model.topics; ++k) {
    net.nodes[k].topic = k;
    net.nodes[k].top_terms = model.top_terms(k, options.top_terms);
  }
  for (std::size_t d = 0; d < corpus.records.size(); ++d) {
    std::size_t k = dominant_topic(model, d);
    ++net.nodes[k].article_count;
    sentiment_sum[k] += sentiment_polarity(corpus.records[d].text, lexicon);
  }
  for (auto& node : net.nodes) {
    if (node.article_count > 0) node.mean_sentiment = sentiment_sum[node.topic] / static_cast<double>(node.article_count);
    node.sentiment_class = classify_sentiment(node.mean_sentiment, options);
  }
  for (std::size_t i = 0; i < model.topics; ++i) {
    for (std::size_t j = i + 1; j < model.topics; ++j) {
      double w = topic_similarity(model.phi[i], model.phi[j], options.metric);
      if (w >= options.edge_threshold) net.edges.push_back({i, j, w});
    }
  }
  return net;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string network_nodes_csv(const TopicNetwork& network) {
  std::string out = "topic,article_count,mean_sentiment,sentiment_class,top_terms\n";
  for (const auto& n : network.nodes) {
    out += std::to_string(n.topic) + "," + std::to_string(n.article_count) + "," + fmt(n.mean_sentiment) + "," +
           to_string(n.sentiment_class) + "," + join(n.top_terms, " ") + "\n";
  }
  return out;
}

std::string network_edges_csv(const TopicNetwork& network) {
  std::string out = "source,target,weight\n";
  for (const auto& e : network.edges) {
    out += std::to_string(e.source) + "," + std::to_string(e.target) + "," + fmt(e.weight) + "\n";
  }
  return out;
}

std::string network_json(const TopicNetwork& network) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : network.nodes) {
    j["nodes"].push_back({{"topic", n.topic},
                          {"article_count", n.article_count},
                          {"mean_sentiment", n.mean_sentiment},
                          {"sentiment_class", to_string(n.sentiment_class)},
                          {"top_terms", n.top_terms}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : network.edges) {
    j["edges"].push_back({{"source", e.source}, {"target", e.target}, {"weight", e.weight}});
  }
  return j.dump();
}

}  // namespace fakewatch::analysis
