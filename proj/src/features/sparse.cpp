#include "fakewatch/features/sparse.hpp"

namespace fakewatch::features {

double sparse_dot(const FeatureVector& a, const FeatureVector& b) {
  double acc = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.indices.size() && j < b.indices.size()) {
    if (a.indices[i] == b.indices[j]) {
      acc += a.values[i] * b.values[j];
      ++i;
      ++j;
    } else if (a.indices[i] < b.indices[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return acc;
}

double squared_norm(const FeatureVector& v) {
  double acc = 0.0;
  for (double x : v.values) acc += x * x;
  return acc;
}

double dot_dense(const FeatureVector& v, std::span<const double> weights) {
  double acc = 0.0;
  for (std::size_t k = 0; k < v.indices.size(); ++k) {
    if (v.indices[k] < weights.size()) acc += v.values[k] * weights[v.indices[k]];
  }
  return acc;
}

void add_scaled(const FeatureVector& v, double alpha, std::span<double> weights) {
  for (std::size_t k = 0; k < v.indices.size(); ++k) {
    if (v.indices[k] < weights.size()) weights[v.indices[k]] += alpha * v.values[k];
  }
}

std::vector<double> to_dense(const FeatureVector& v, std::size_t dim) {
  std::vector<double> out(dim, 0.0);
  for (std::size_t k = 0; k < v.indices.size(); ++k) {
    if (v.indices[k] < dim) out[v.indices[k]] = v.values[k];
  }
  return out;
}

}  // namespace fakewatch::features
