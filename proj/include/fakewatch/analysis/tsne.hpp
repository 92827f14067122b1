#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fakewatch/features/sparse.hpp"

namespace fakewatch::analysis {

struct TsneOptions {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  std::size_t exaggeration_iterations = 250;  // momentum switches 0.5 -> 0.8 here too
  std::size_t kl_every = 50;
  std::uint64_t seed = 42;
};

struct Embedding2D {
  std::vector<std::array<double, 2>> points;
  double initial_kl = 0.0;
  double final_kl = 0.0;
  // (iteration, KL(P || Q)) with the unexaggerated P; iteration 0 is the
  // random start.
  std::vector<std::pair<std::size_t, double>> kl_trace;
};

// Exact O(n^2) t-SNE: per-point Gaussian bandwidths by bisection on the
// perplexity, symmetrized P, Student-t Q, gradient descent with momentum,
// per-coordinate gains and early exaggeration. Throws kInvalidArgument when
// perplexity >= n or rows differ in length.
Embedding2D tsne_embed(const std::vector<std::vector<double>>& vectors, const TsneOptions& options = {});

// Densifies feature vectors first (dimension = largest index + 1).
Embedding2D tsne_embed(const std::vector<features::FeatureVector>& vectors, const TsneOptions& options = {});

// id,x,y,label
std::string embedding_csv(const Embedding2D& embedding, const std::vector<std::string>& ids,
                          const std::vector<int>& labels);

}  // namespace fakewatch::analysis
