#include "fakewatch/features/vocabulary.hpp"

#include <algorithm>
#include <set>

#include "fakewatch/common/error.hpp"

namespace fakewatch::features {

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> df, std::size_t corpus_size)
    : terms_(std::move(terms)), df_(std::move(df)), corpus_size_(corpus_size) {
  if (terms_.size() != df_.size()) throw Error(ErrorCode::kInvalidArgument, "terms/df length mismatch");
  for (std::uint32_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) {
      throw Error(ErrorCode::kInvalidArgument, "vocabulary terms must be strictly sorted");
    }
    if (df_[i] == 0 || df_[i] > corpus_size_) {
      throw Error(ErrorCode::kInvalidArgument, "document frequency out of range for '" + terms_[i] + "'");
    }
    index_.emplace(terms_[i], i);
  }
}

std::optional<std::uint32_t> Vocabulary::index_of(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary fit_vocabulary(const std::vector<TokenizedDoc>& docs, std::size_t min_df, std::size_t max_features) {
  if (docs.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot fit a vocabulary on zero documents");
  std::map<std::string, std::uint32_t> df;
  for (const TokenizedDoc& doc : docs) {
    std::set<std::string_view> unique(doc.begin(), doc.end());
    for (std::string_view t : unique) ++df[std::string(t)];
  }
  std::vector<std::pair<std::string, std::uint32_t>> kept;
  for (auto& [term, count] : df) {
    if (count >= min_df) kept.emplace_back(term, count);
  }
  if (kept.empty()) throw Error(ErrorCode::kEmptyVocabulary, "no term reaches min_df=" + std::to_string(min_df));
  if (max_features > 0 && kept.size() > max_features) {
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    kept.resize(max_features);
    std::sort(kept.begin(), kept.end());
  }
  std::vector<std::string> terms;
  std::vector<std::uint32_t> counts;
  for (auto& [term, count] : kept) {
    terms.push_back(term);
    counts.push_back(count);
  }
  return Vocabulary(std::move(terms), std::move(counts), docs.size());
}

}  // namespace fakewatch::features
