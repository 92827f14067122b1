#include "fakewatch/features/tfidf.hpp"

#include <cmath>
#include <map>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/hash.hpp"

namespace fakewatch::features {

TfidfModel::TfidfModel(Vocabulary vocabulary, Norm norm) : vocabulary_(std::move(vocabulary)), norm_(norm) {
  const double n = static_cast<double>(vocabulary_.corpus_size());
  idf_.reserve(vocabulary_.size());
  Fnv1a h;
  h.update_u64(vocabulary_.corpus_size()).update_u64(norm_ == Norm::kL2 ? 1 : 0);
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    double df = vocabulary_.document_frequency()[i];
    idf_.push_back(std::log((1.0 + n) / (1.0 + df)) + 1.0);
    h.update(vocabulary_.terms()[i]).update_u64(vocabulary_.document_frequency()[i]);
  }
  fingerprint_ = h.digest();
  fitted_ = true;
}

TfidfModel TfidfModel::fit(const std::vector<TokenizedDoc>& docs, const TfidfOptions& options) {
  return TfidfModel(fit_vocabulary(docs, options.min_df, options.max_features), options.norm);
}

FeatureVector TfidfModel::transform(const TokenizedDoc& doc) const {
  if (!fitted_) throw Error(ErrorCode::kState, "TF-IDF model used before fit");
  std::map<std::uint32_t, double> tf;
  for (const std::string& token : doc) {
    if (auto idx = vocabulary_.index_of(token)) tf[*idx] += 1.0;
  }
  FeatureVector v;
  v.fingerprint = fingerprint_;
  v.indices.reserve(tf.size());
  v.values.reserve(tf.size());
  double sq = 0.0;
  for (auto [idx, count] : tf) {
    double w = count * idf_[idx];
    v.push_back(idx, w);
    sq += w * w;
  }
  if (norm_ == Norm::kL2 && sq > 0.0) {
    double inv = 1.0 / std::sqrt(sq);
    for (double& w : v.values) w *= inv;
  }
  return v;
}

std::vector<FeatureVector> TfidfModel::transform_all(const std::vector<TokenizedDoc>& docs) const {
  std::vector<FeatureVector> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(transform(d));
  return out;
}

}  // namespace fakewatch::features
