#include "fakewatch/model_hub/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fakewatch/common/error.hpp"

namespace fakewatch::model_hub {

double cosine_distance(const FeatureVector& a, const FeatureVector& b) {
  double na = features::squared_norm(a);
  double nb = features::squared_norm(b);
  if (na <= 0.0 || nb <= 0.0) return 1.0;
  return 1.0 - features::sparse_dot(a, b) / (std::sqrt(na) * std::sqrt(nb));
}

Knn Knn::fit(const ModelSpec& spec, const TrainingSet& data) {
  Knn knn;
  knn.k_ = static_cast<std::size_t>(spec.get_int("k", 5));
  if (knn.k_ > data.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "k = " + std::to_string(knn.k_) + " exceeds training size " + std::to_string(data.size()));
  }
  knn.points_ = data.x;
  knn.labels_ = data.y;
  for (const auto& p : knn.points_) knn.norms_.push_back(std::sqrt(features::squared_norm(p)));
  return knn;
}

double Knn::decision_score(const FeatureVector& x) const {
  const double nx = std::sqrt(features::squared_norm(x));
  std::vector<std::pair<double, std::size_t>> dist(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double d = 1.0;
    if (nx > 0.0 && norms_[i] > 0.0) d = 1.0 - features::sparse_dot(points_[i], x) / (norms_[i] * nx);
    dist[i] = {d, i};
  }
  const std::size_t k = std::min(k_, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::size_t fake = 0;
  for (std::size_t i = 0; i < k; ++i) fake += labels_[dist[i].second] == 1 ? 1 : 0;
  return k == 0 ? 0.0 : static_cast<double>(fake) / static_cast<double>(k);
}

void Knn::encode(BinaryWriter& out) const {
  out.u64(k_);
  out.u64(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    out.u8(static_cast<std::uint8_t>(labels_[i]));
    out.u32_vec(points_[i].indices);
    out.f64_vec(points_[i].values);
  }
}

Knn Knn::decode(BinaryReader& in) {
  Knn knn;
  knn.k_ = in.u64();
  std::size_t count = in.count(17);
  for (std::size_t i = 0; i < count; ++i) {
    knn.labels_.push_back(in.u8());
    FeatureVector p;
    p.indices = in.u32_vec();
    p.values = in.f64_vec();
    if (p.indices.size() != p.values.size()) throw Error(ErrorCode::kIntegrity, "knn point length mismatch");
    knn.norms_.push_back(std::sqrt(features::squared_norm(p)));
    knn.points_.push_back(std::move(p));
  }
  return knn;
}

}  // namespace fakewatch::model_hub
