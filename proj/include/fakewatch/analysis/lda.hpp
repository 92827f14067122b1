#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fakewatch/features/vocabulary.hpp"

namespace fakewatch::analysis {

struct LdaOptions {
  std::size_t topics = 10;
  double alpha = 0.0;  // <= 0 means 50 / topics
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t seed = 42;
};

struct LdaModel {
  std::size_t topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> terms;                 // sorted; column order of phi
  std::vector<std::vector<double>> phi;           // topics x terms
  std::vector<std::vector<double>> theta;         // docs x topics
  std::vector<std::vector<std::uint32_t>> assignments;  // final topic of every token

  std::size_t vocabulary_size() const { return terms.size(); }
  // Indices of the n most probable terms of a topic, ties to the lower index.
  std::vector<std::uint32_t> top_term_indices(std::size_t topic, std::size_t n) const;
  std::vector<std::string> top_terms(std::size_t topic, std::size_t n) const;
};

// Collapsed Gibbs sampling. Topic assignments start uniformly at random under
// the seed; phi and theta are the smoothed final-state counts. Throws
// kEmptyVocabulary when the docs hold no tokens.
LdaModel lda_fit(const std::vector<features::TokenizedDoc>& docs, const LdaOptions& options);

// UMass coherence per topic over the top_n terms (ranked by phi):
// sum over m > l of log((D(w_m, w_l) + 1) / D(w_l)), D = document frequency in
// `docs`. Throws kInvalidArgument when top_n exceeds the vocabulary or a top
// term never occurs in `docs`.
std::vector<double> topic_coherence(const LdaModel& model, const std::vector<features::TokenizedDoc>& docs,
                                    std::size_t top_n = 10);
double mean_coherence(const LdaModel& model, const std::vector<features::TokenizedDoc>& docs,
                      std::size_t top_n = 10);

struct TopicCountScore {
  std::size_t topics = 0;
  double mean_coherence = 0.0;
};

struct TopicCountSelection {
  std::size_t topics = 0;
  std::vector<TopicCountScore> scores;  // ascending topic count
};

// Fits one model per candidate and keeps the best mean coherence; ties go to
// the smaller count. top_n is capped at the vocabulary size.
TopicCountSelection select_topic_count(const std::vector<features::TokenizedDoc>& docs,
                                       std::vector<std::size_t> candidates, const LdaOptions& base,
                                       std::size_t top_n = 10);

// argmax of the document's theta row, ties to the lowest topic.
std::size_t dominant_topic(const LdaModel& model, std::size_t doc);

enum class SimilarityMetric { kJensenShannon, kCosine };

// 1 - JSD (base 2) by default, so identical rows give 1 and disjoint supports
// give 0. Inputs must be non-negative and sum to 1 within 1e-6.
double topic_similarity(std::span<const double> p, std::span<const double> q,
                        SimilarityMetric metric = SimilarityMetric::kJensenShannon);

}  // namespace fakewatch::analysis
