#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fakewatch/corpus/types.hpp"

namespace fakewatch::corpus {

// Throws kConflict listing every id that appears more than once.
Corpus consolidate(const std::vector<Record>& curated, const std::vector<Record>& benchmark);

// Keeps the first record of every normalized-text (lowercase, collapsed
// whitespace) duplicate group.
Corpus dedupe_records(const Corpus& corpus);

// Stratified split; train size is round(train_fraction * N) and per-class
// train counts use largest-remainder rounding with ties to the larger class.
Corpus split_corpus(const Corpus& corpus, double train_fraction, std::uint64_t seed);

// Duplicates minority-class training records (sampled with replacement) until
// both training classes have equal counts. Copies get ids "<id>#dup<k>".
Corpus upsample_train(const Corpus& corpus, std::uint64_t seed);

// Stable article id derived from its URL.
std::string article_id(const std::string& url);

Record record_from_article(const Article& article);

}  // namespace fakewatch::corpus
