#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fakewatch/analysis/lda.hpp"
#include "fakewatch/analysis/sentiment.hpp"
#include "fakewatch/corpus/types.hpp"

namespace fakewatch::analysis {

enum class SentimentClass { kNegative, kNeutral, kPositive };
const char* to_string(SentimentClass c);

struct TopicNode {
  std::size_t topic = 0;
  std::size_t article_count = 0;  // documents whose dominant topic this is
  double mean_sentiment = 0.0;    // 0 for topics with no documents
  SentimentClass sentiment_class = SentimentClass::kNeutral;
  std::vector<std::string> top_terms;
};

struct TopicEdge {
  std::size_t source = 0;
  std::size_t target = 0;  // source < target
  double weight = 0.0;
};

struct TopicNetwork {
  std::vector<TopicNode> nodes;
  std::vector<TopicEdge> edges;
};

struct NetworkOptions {
  double edge_threshold = 0.5;
  double negative_threshold = -0.05;  // mean sentiment <= this is negative
  double positive_threshold = 0.05;   // >= this is positive
  SimilarityMetric metric = SimilarityMetric::kJensenShannon;
  std::size_t top_terms = 10;
};

SentimentClass classify_sentiment(double mean, const NetworkOptions& options);

// theta rows of `model` must line up with corpus.records.
TopicNetwork build_topic_network(const LdaModel& model, const corpus::Corpus& corpus, const SentimentLexicon& lexicon,
                                 const NetworkOptions& options = {});

// node CSV: topic,article_count,mean_sentiment,sentiment_class,top_terms
// edge CSV: source,target,weight
std::string network_nodes_csv(const TopicNetwork& network);
std::string network_edges_csv(const TopicNetwork& network);
// {"nodes":[...],"edges":[...]}
std::string network_json(const TopicNetwork& network);

}  // namespace fakewatch::analysis
