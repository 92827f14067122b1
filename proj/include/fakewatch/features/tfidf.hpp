#pragma once

#include <cstdint>
#include <vector>

#include "fakewatch/features/sparse.hpp"
#include "fakewatch/features/vocabulary.hpp"

namespace fakewatch::features {

enum class Norm { kL2, kNone };

struct TfidfOptions {
  std::size_t min_df = 2;
  std::size_t max_features = 50000;
  Norm norm = Norm::kL2;
};

// weight_t = tf_t * (ln((1 + N) / (1 + df_t)) + 1), optionally L2-normalized.
class TfidfModel {
 public:
  TfidfModel() = default;
  TfidfModel(Vocabulary vocabulary, Norm norm);

  static TfidfModel fit(const std::vector<TokenizedDoc>& docs, const TfidfOptions& options);

  bool fitted() const { return fitted_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  Norm norm() const { return norm_; }
  std::size_t dimension() const { return vocabulary_.size(); }
  std::uint64_t fingerprint() const { return fingerprint_; }

  // Out-of-vocabulary tokens are ignored; throws kState before fit.
  FeatureVector transform(const TokenizedDoc& doc) const;
  std::vector<FeatureVector> transform_all(const std::vector<TokenizedDoc>& docs) const;

 private:
  Vocabulary vocabulary_;
  std::vector<double> idf_;
  Norm norm_ = Norm::kL2;
  std::uint64_t fingerprint_ = 0;
  bool fitted_ = false;
};

}  // namespace fakewatch::features
