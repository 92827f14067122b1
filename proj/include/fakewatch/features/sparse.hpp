#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fakewatch::features {

// Sparse feature vector; indices strictly increasing. fingerprint identifies
// the vocabulary that produced it (0 = unspecified).
struct FeatureVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::uint64_t fingerprint = 0;

  std::size_t nnz() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  void push_back(std::uint32_t index, double value) {
    indices.push_back(index);
    values.push_back(value);
  }
};

double sparse_dot(const FeatureVector& a, const FeatureVector& b);
double squared_norm(const FeatureVector& v);
// Dense dot with a weight vector; indices beyond weights.size() contribute 0.
double dot_dense(const FeatureVector& v, std::span<const double> weights);
// weights[i] += alpha * v[i]
void add_scaled(const FeatureVector& v, double alpha, std::span<double> weights);
std::vector<double> to_dense(const FeatureVector& v, std::size_t dim);

}  // namespace fakewatch::features
