#pragma once

#include <map>
#include <string>
#include <vector>

#include "fakewatch/corpus/types.hpp"

namespace fakewatch::features {

enum class KeyTermScope { kAll, kFakeOnly, kRealOnly };

// Case-insensitive token-level counts of each term across the corpus (stopwords
// are not removed). Multi-word terms are counted as consecutive token runs.
std::map<std::string, std::size_t> key_term_frequencies(const corpus::Corpus& corpus,
                                                        const std::vector<std::string>& terms,
                                                        KeyTermScope scope = KeyTermScope::kAll);

}  // namespace fakewatch::features
