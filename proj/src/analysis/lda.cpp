#include "fakewatch/analysis/lda.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/rng.hpp"

namespace fakewatch::analysis {

std::vector<std::uint32_t> LdaModel::top_term_indices(std::size_t topic, std::size_t n) const {
  if (topic >= topics) throw Error(ErrorCode::kInvalidArgument, "topic index out of range");
  const auto& row = phi[topic];
  std::vector<std::uint32_t> idx(row.size());
  std::iota(idx.begin(), idx.end(), 0u);
  n = std::min(n, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(),
                    [&](std::uint32_t a, std::uint32_t b) { return row[a] != row[b] ? row[a] > row[b] : a < b; });
  idx.resize(n);
  return idx;
}

std::vector<std::string> LdaModel::top_terms(std::size_t topic, std::size_t n) const {
  std::vector<std::string> out;
  for (auto i : top_term_indices(topic, n)) out.push_back(terms[i]);
  return out;
}

LdaModel lda_fit(const std::vector<features::TokenizedDoc>& docs, const LdaOptions& options) {
  if (options.topics == 0) throw Error(ErrorCode::kInvalidArgument, "LDA needs at least one topic");
  if (!(options.beta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "LDA beta must be positive");

  std::map<std::string, std::uint32_t> index;
  for (const auto& d : docs)
    for (const auto& t : d) index.emplace(t, 0);
  if (index.empty()) throw Error(ErrorCode::kEmptyVocabulary, "LDA input has no tokens");

  LdaModel m;
  m.topics = options.topics;
  m.alpha = options.alpha > 0.0 ? options.alpha : 50.0 / static_cast<double>(options.topics);
  m.beta = options.beta;
  m.iterations = options.iterations;
  m.seed = options.seed;
  for (auto& [term, i] : index) {
    i = static_cast<std::uint32_t>(m.terms.size());
    m.terms.push_back(term);
  }

  const std::size_t K = m.topics;
  const std::size_t V = m.terms.size();
  const std::size_t D = docs.size();
  std::vector<std::vector<std::uint32_t>> words(D);
  for (std::size_t d = 0; d < D; ++d)
    for (const auto& t : docs[d]) words[d].push_back(index.at(t));

  std::vector<std::uint32_t> n_kw(K * V, 0), n_k(K, 0), n_dk(D * K, 0);
  auto& z = m.assignments;
  z.resize(D);
  Rng rng(options.seed);
  for (std::size_t d = 0; d < D; ++d) {
    z[d].resize(words[d].size());
    for (std::size_t i = 0; i < words[d].size(); ++i) {
      auto k = static_cast<std::uint32_t>(rng.uniform_index(K));
      z[d][i] = k;
      ++n_kw[k * V + words[d][i]];
      ++n_k[k];
      ++n_dk[d * K + k];
    }
  }

  const double vbeta = static_cast<double>(V) * m.beta;
  std::vector<double> cumulative(K);
  for (std::size_t it = 0; it < options.iterations; ++it) {
    for (std::size_t d = 0; d < D; ++d) {
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const std::uint32_t w = words[d][i];
        std::uint32_t k = z[d][i];
        --n_kw[k * V + w];
        --n_k[k];
        --n_dk[d * K + k];
        double total = 0.0;
        for (std::size_t t = 0; t < K; ++t) {
          total += (n_dk[d * K + t] + m.alpha) * (n_kw[t * V + w] + m.beta) / (n_k[t] + vbeta);
          cumulative[t] = total;
        }
        const double u = rng.uniform01() * total;
        k = static_cast<std::uint32_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        if (k >= K) k = static_cast<std::uint32_t>(K - 1);
        z[d][i] = k;
        ++n_kw[k * V + w];
        ++n_k[k];
        ++n_dk[d * K + k];
      }
    }
  }

  m.phi.assign(K, std::vector<double>(V));
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t w = 0; w < V; ++w) m.phi[k][w] = (n_kw[k * V + w] + m.beta) / (n_k[k] + vbeta);
  m.theta.assign(D, std::vector<double>(K));
  const double kalpha = static_cast<double>(K) * m.alpha;
  for (std::size_t d = 0; d < D; ++d)
    for (std::size_t k = 0; k < K; ++k)
      m.theta[d][k] = (n_dk[d * K + k] + m.alpha) / (static_cast<double>(words[d].size()) + kalpha);
  return m;
}

std::vector<double> topic_coherence(const LdaModel& model, const std::vector<features::TokenizedDoc>& docs,
                                    std::size_t top_n) {
  if (top_n > model.vocabulary_size()) {
    throw Error(ErrorCode::kInvalidArgument, "coherence top_n " + std::to_string(top_n) + " exceeds vocabulary size " +
                                                 std::to_string(model.vocabulary_size()));
  }
  std::map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < model.terms.size(); ++i) index.emplace(model.terms[i], i);
  std::vector<std::vector<std::uint32_t>> doc_sets;
  doc_sets.reserve(docs.size());
  for (const auto& d : docs) {
    std::set<std::uint32_t> s;
    for (const auto& t : d) {
      auto it = index.find(t);
      if (it != index.end()) s.insert(it->second);
    }
    doc_sets.emplace_back(s.begin(), s.end());
  }
  auto contains = [](const std::vector<std::uint32_t>& s, std::uint32_t w) {
    return std::binary_search(s.begin(), s.end(), w);
  };

  std::vector<double> out;
  for (std::size_t k = 0; k < model.topics; ++k) {
    auto top = model.top_term_indices(k, top_n);
    std::vector<double> df(top.size(), 0.0);
    std::vector<std::vector<double>> co(top.size(), std::vector<double>(top.size(), 0.0));
    for (const auto& s : doc_sets) {
      std::vector<char> present(top.size());
      for (std::size_t a = 0; a < top.size(); ++a) present[a] = contains(s, top[a]);
      for (std::size_t a = 0; a < top.size(); ++a) {
        if (!present[a]) continue;
        df[a] += 1.0;
        for (std::size_t b = 0; b < a; ++b)
          if (present[b]) co[a][b] += 1.0;
      }
    }
    double c = 0.0;
    for (std::size_t m = 1; m < top.size(); ++m) {
      for (std::size_t l = 0; l < m; ++l) {
        if (df[l] == 0.0) {
          throw Error(ErrorCode::kInvalidArgument, "top term '" + model.terms[top[l]] + "' never occurs in the documents");
        }
        c += std::log((co[m][l] + 1.0) / df[l]);
      }
    }
    out.push_back(c);
  }
  return out;
}

double mean_coherence(const LdaModel& model, const std::vector<features::TokenizedDoc>& docs, std::size_t top_n) {
  auto c = topic_coherence(model, docs, top_n);
  return std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
}

TopicCountSelection select_topic_count(const std::vector<features::TokenizedDoc>& docs,
                                       std::vector<std::size_t> candidates, const LdaOptions& base,
                                       std::size_t top_n) {
  if (candidates.empty()) throw Error(ErrorCode::kInvalidArgument, "topic count range is empty");
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  TopicCountSelection sel;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k : candidates) {
    LdaOptions opt = base;
    opt.topics = k;
    LdaModel m = lda_fit(docs, opt);
    double c = mean_coherence(m, docs, std::min(top_n, m.vocabulary_size()));
    sel.scores.push_back({k, c});
    if (sel.topics == 0 || c > best) {
      best = c;
      sel.topics = k;
    }
  }
  return sel;
}

std::size_t dominant_topic(const LdaModel& model, std::size_t doc) {
  if (doc >= model.theta.size()) throw Error(ErrorCode::kInvalidArgument, "document index out of range");
  const auto& row = model.theta[doc];
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

namespace {

void check_distribution(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "distribution has a negative entry");
    s += v;
  }
  if (std::fabs(s - 1.0) > 1e-6) throw Error(ErrorCode::kInvalidArgument, "distribution does not sum to 1");
}

}  // namespace

double topic_similarity(std::span<const double> p, std::span<const double> q, SimilarityMetric metric) {
  if (p.size() != q.size()) throw Error(ErrorCode::kInvalidArgument, "topic rows differ in length");
  check_distribution(p);
  check_distribution(q);
  if (metric == SimilarityMetric::kCosine) {
    double dot = 0.0, np = 0.0, nq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      dot += p[i] * q[i];
      np += p[i] * p[i];
      nq += q[i] * q[i];
    }
    return std::clamp(dot / std::sqrt(np * nq), 0.0, 1.0);
  }
  double jsd = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    const double tp = p[i] > 0.0 ? p[i] * std::log2(p[i] / m) : 0.0;
    const double tq = q[i] > 0.0 ? q[i] * std::log2(q[i] / m) : 0.0;
    jsd += 0.5 * (tp + tq);  // tp + tq keeps the result symmetric bit for bit
  }
  return std::clamp(1.0 - jsd, 0.0, 1.0);
}

}  // namespace fakewatch::analysis
