#include "fakewatch/features/key_terms.hpp"

#include "fakewatch/features/tokenizer.hpp"

namespace fakewatch::features {

std::map<std::string, std::size_t> key_term_frequencies(const corpus::Corpus& corpus,
                                                        const std::vector<std::string>& terms,
                                                        KeyTermScope scope) {
  TokenizerConfig cfg;
  cfg.min_token_length = 1;
  std::map<std::string, std::size_t> counts;
  std::vector<std::pair<std::string, std::vector<std::string>>> patterns;
  for (const std::string& term : terms) {
    auto parts = tokenize(term, cfg);
    counts[term] = 0;
    if (!parts.empty()) patterns.emplace_back(term, std::move(parts));
  }
  for (const corpus::Record& r : corpus.records) {
    if (scope == KeyTermScope::kFakeOnly && r.label != corpus::Label::kFake) continue;
    if (scope == KeyTermScope::kRealOnly && r.label != corpus::Label::kReal) continue;
    auto tokens = tokenize(r.text, cfg);
    for (const auto& [term, parts] : patterns) {
      if (tokens.size() < parts.size()) continue;
      for (std::size_t i = 0; i + parts.size() <= tokens.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < parts.size() && match; ++k) match = tokens[i + k] == parts[k];
        if (match) ++counts[term];
      }
    }
  }
  return counts;
}

}  // namespace fakewatch::features
