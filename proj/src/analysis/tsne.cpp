#include "fakewatch/analysis/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/rng.hpp"
#include "fakewatch/simd/kernels.hpp"

namespace fakewatch::analysis {
namespace {

constexpr double kMinProb = 1e-12;

// Row i of the conditional affinities, bisecting on the precision beta so the
// entropy matches log(perplexity).
void conditional_row(const std::vector<double>& dist, std::size_t n, std::size_t i, double log_perp, double* row) {
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) dmin = std::min(dmin, dist[i * n + j]);

  double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 200; ++step) {
    double sum = 0.0, weighted = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) {
        row[j] = 0.0;
        continue;
      }
      const double shifted = dist[i * n + j] - dmin;
      row[j] = std::exp(-shifted * beta);
      sum += row[j];
      weighted += shifted * row[j];
    }
    // H = log(sum) + beta * E[d], with distances shifted by dmin.
    const double entropy = std::log(sum) + beta * weighted / sum;
    for (std::size_t j = 0; j < n; ++j) row[j] /= sum;
    const double diff = entropy - log_perp;
    if (std::fabs(diff) < 1e-5) break;
    if (diff > 0.0) {
      lo = beta;
      beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
    } else {
      hi = beta;
      beta = 0.5 * (beta + lo);
    }
  }
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& num, double num_sum) {
  double kl = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    const double q = std::max(num[k] / num_sum, kMinProb);
    kl += p[k] * std::log(p[k] / q);
  }
  return kl;
}

}  // namespace

Embedding2D tsne_embed(const std::vector<std::vector<double>>& vectors, const TsneOptions& options) {
  const std::size_t n = vectors.size();
  if (!(options.perplexity > 0.0) || options.perplexity >= static_cast<double>(n)) {
    throw Error(ErrorCode::kInvalidArgument, "t-SNE perplexity must be positive and below the point count");
  }
  const std::size_t dim = vectors[0].size();
  for (const auto& v : vectors)
    if (v.size() != dim) throw Error(ErrorCode::kInvalidArgument, "t-SNE input rows differ in length");

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = simd::squared_distance(vectors[i], vectors[j]);

  std::vector<double> cond(n * n);
  const double log_perp = std::log(options.perplexity);
  for (std::size_t i = 0; i < n; ++i) conditional_row(dist, n, i, log_perp, &cond[i * n]);
  std::vector<double> p(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) p[i * n + j] = std::max((cond[i * n + j] + cond[j * n + i]) / (2.0 * n), kMinProb);

  Rng rng(options.seed);
  std::vector<double> y(2 * n), update(2 * n, 0.0), gains(2 * n, 1.0), grad(2 * n);
  for (auto& v : y) v = 1e-4 * rng.normal();

  std::vector<double> num(n * n, 0.0);
  auto compute_num = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = y[2 * i] - y[2 * j], dy = y[2 * i + 1] - y[2 * j + 1];
        const double v = 1.0 / (1.0 + dx * dx + dy * dy);
        num[i * n + j] = num[j * n + i] = v;
        total += 2.0 * v;
      }
    }
    return total;
  };

  Embedding2D out;
  double num_sum = compute_num();
  out.initial_kl = kl_divergence(p, num, num_sum);
  out.kl_trace.emplace_back(0, out.initial_kl);

  for (std::size_t it = 0; it < options.iterations; ++it) {
    const bool early = it < options.exaggeration_iterations;
    const double exaggeration = early ? options.early_exaggeration : 1.0;
    const double momentum = early ? 0.5 : 0.8;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double gx = 0.0, gy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double q = num[i * n + j] / num_sum;
        const double m = (exaggeration * p[i * n + j] - q) * num[i * n + j];
        gx += m * (y[2 * i] - y[2 * j]);
        gy += m * (y[2 * i + 1] - y[2 * j + 1]);
      }
      grad[2 * i] = 4.0 * gx;
      grad[2 * i + 1] = 4.0 * gy;
    }
    for (std::size_t k = 0; k < 2 * n; ++k) {
      gains[k] = (grad[k] > 0.0) != (update[k] > 0.0) ? gains[k] + 0.2 : gains[k] * 0.8;
      gains[k] = std::max(gains[k], 0.01);
      update[k] = momentum * update[k] - options.learning_rate * gains[k] * grad[k];
      y[k] += update[k];
    }
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cx += y[2 * i];
      cy += y[2 * i + 1];
    }
    cx /= n;
    cy /= n;
    for (std::size_t i = 0; i < n; ++i) {
      y[2 * i] -= cx;
      y[2 * i + 1] -= cy;
    }
    num_sum = compute_num();
    const std::size_t done = it + 1;
    if ((options.kl_every > 0 && done % options.kl_every == 0) || done == options.iterations) {
      if (out.kl_trace.back().first != done) out.kl_trace.emplace_back(done, kl_divergence(p, num, num_sum));
    }
  }
  out.final_kl = out.kl_trace.back().second;
  out.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.points[i] = {y[2 * i], y[2 * i + 1]};
  for (const auto& pt : out.points)
    if (!std::isfinite(pt[0]) || !std::isfinite(pt[1])) throw Error(ErrorCode::kDivergence, "t-SNE diverged");
  return out;
}

Embedding2D tsne_embed(const std::vector<features::FeatureVector>& vectors, const TsneOptions& options) {
  std::size_t dim = 0;
  for (const auto& v : vectors)
    if (!v.indices.empty()) dim = std::max<std::size_t>(dim, v.indices.back() + 1);
  std::vector<std::vector<double>> dense;
  dense.reserve(vectors.size());
  for (const auto& v : vectors) dense.push_back(features::to_dense(v, dim));
  return tsne_embed(dense, options);
}

std::string embedding_csv(const Embedding2D& embedding, const std::vector<std::string>& ids,
                          const std::vector<int>& labels) {
  if (ids.size() != embedding.points.size() || labels.size() != embedding.points.size()) {
    throw Error(ErrorCode::kInvalidArgument, "embedding export needs one id and label per point");
  }
  std::string out = "id,x,y,label\n";
  char buf[96];
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%d\n", embedding.points[i][0], embedding.points[i][1], labels[i]);
    out += ids[i] + buf;
  }
  return out;
}

}  // namespace fakewatch::analysis
