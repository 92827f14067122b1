#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fakewatch/corpus/types.hpp"

namespace fakewatch::analysis {

// Word -> polarity in [-1, 1]; words are stored lowercase.
class SentimentLexicon {
 public:
  SentimentLexicon() = default;
  // Throws kInvalidArgument for polarities outside [-1, 1] or empty words.
  explicit SentimentLexicon(std::map<std::string, double> polarity);

  const std::map<std::string, double>& entries() const { return polarity_; }
  const double* find(const std::string& word) const;
  std::size_t size() const { return polarity_.size(); }

 private:
  std::map<std::string, double> polarity_;
};

// "word<TAB or space>polarity" per line; '#' comments and blank lines skipped.
SentimentLexicon parse_sentiment_lexicon(std::string_view contents);
SentimentLexicon load_sentiment_lexicon(const std::string& path);

// Tokens used by the sentiment and LIWC scorers: lowercase, length >= 1,
// apostrophes kept inside words ("don't").
std::vector<std::string> analysis_tokens(std::string_view text);

// Mean polarity of lexicon-matched tokens (0 when none match). A negator
// ("not", "no", "never") among the two tokens before a match flips its sign.
double sentiment_polarity(std::string_view text, const SentimentLexicon& lexicon);
double sentiment_polarity(const std::vector<std::string>& tokens, const SentimentLexicon& lexicon);

struct PolarityHistogram {
  std::vector<double> edges;  // bins + 1 values from -1 to 1
  std::vector<std::size_t> fake;
  std::vector<std::size_t> real;
  std::vector<std::size_t> unlabeled;
};

// Equal-width bins over [-1, 1]; each bin is [lo, hi) except the last, which
// also holds 1.
std::size_t polarity_bin(double score, std::size_t bins);
PolarityHistogram polarity_histogram(const corpus::Corpus& corpus, const SentimentLexicon& lexicon,
                                     std::size_t bins);

}  // namespace fakewatch::analysis
