#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fakewatch::features {

using TokenizedDoc = std::vector<std::string>;

class Vocabulary {
 public:
  Vocabulary() = default;
  // terms sorted ascending; df[i] belongs to terms[i].
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> df, std::size_t corpus_size);

  std::size_t size() const { return terms_.size(); }
  std::size_t corpus_size() const { return corpus_size_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::uint32_t>& document_frequency() const { return df_; }
  std::optional<std::uint32_t> index_of(const std::string& term) const;

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint32_t> df_;
  std::map<std::string, std::uint32_t> index_;
  std::size_t corpus_size_ = 0;
};

// Keeps terms with df >= min_df; when more than max_features survive (0 = no
// limit), keeps the highest-df terms, ties broken lexicographically. Indices
// follow sorted term order. Throws kEmptyVocabulary if nothing survives.
Vocabulary fit_vocabulary(const std::vector<TokenizedDoc>& docs, std::size_t min_df, std::size_t max_features);

}  // namespace fakewatch::features
