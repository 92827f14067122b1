#include "fakewatch/corpus/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/hash.hpp"
#include "fakewatch/common/rng.hpp"
#include "fakewatch/common/strings.hpp"

namespace fakewatch::corpus {

Corpus consolidate(const std::vector<Record>& curated, const std::vector<Record>& benchmark) {
  Corpus out;
  out.records.reserve(curated.size() + benchmark.size());
  std::set<std::string> seen;
  std::set<std::string> duplicates;
  for (const auto* part : {&curated, &benchmark}) {
    for (const Record& r : *part) {
      if (!seen.insert(r.id).second) duplicates.insert(r.id);
      out.records.push_back(r);
    }
  }
  if (!duplicates.empty()) {
    throw Error(ErrorCode::kConflict,
                "duplicate record ids: " + join(std::vector<std::string>(duplicates.begin(), duplicates.end()), ", "));
  }
  return out;
}

Corpus dedupe_records(const Corpus& corpus) {
  Corpus out;
  std::unordered_set<std::string> seen;
  for (const Record& r : corpus.records) {
    if (seen.insert(normalize_whitespace_lower(r.text)).second) out.records.push_back(r);
  }
  if (corpus.split) {
    out.split.emplace();
    for (const Record& r : out.records) (*out.split)[r.id] = corpus.split->at(r.id);
  }
  return out;
}

Corpus split_corpus(const Corpus& corpus, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train_fraction must lie in (0, 1)");
  }
  std::vector<std::string> unlabeled;
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const Record& r = corpus.records[i];
    if (!r.is_labeled()) {
      unlabeled.push_back(r.id);
      continue;
    }
    by_class[static_cast<std::size_t>(r.label_value())].push_back(i);
  }
  if (!unlabeled.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot split a corpus with unlabeled records: " + join(unlabeled, ", "));
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[static_cast<std::size_t>(c)].size() < 2) {
      throw Error(ErrorCode::kInvalidArgument,
                  "split needs at least 2 labeled records of class " + std::to_string(c));
    }
  }

  const std::size_t n = corpus.records.size();
  const auto total_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));

  // Largest-remainder apportionment; remainder ties go to the larger class,
  // then to class 0.
  std::array<std::size_t, 2> train_count{};
  std::array<double, 2> remainder{};
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    double quota = train_fraction * static_cast<double>(by_class[c].size());
    train_count[c] = static_cast<std::size_t>(std::floor(quota));
    remainder[c] = quota - std::floor(quota);
    assigned += train_count[c];
  }
  std::array<std::size_t, 2> order = {0, 1};
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    if (by_class[a].size() != by_class[b].size()) return by_class[a].size() > by_class[b].size();
    return a < b;
  });
  for (std::size_t k = 0; assigned < total_train; ++k) {
    std::size_t c = order[k % 2];
    if (train_count[c] < by_class[c].size()) {
      ++train_count[c];
      ++assigned;
    }
  }
  while (assigned > total_train) {
    // Only reachable through floating-point edge cases; trim the smaller class.
    std::size_t c = by_class[0].size() < by_class[1].size() ? 0 : 1;
    --train_count[c];
    --assigned;
  }

  Corpus out = corpus;
  out.split.emplace();
  Rng rng(seed);
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<std::size_t> members = by_class[c];
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t k = 0; k < members.size(); ++k) {
      (*out.split)[corpus.records[members[k]].id] = k < train_count[c] ? Partition::kTrain : Partition::kTest;
    }
  }
  return out;
}

Corpus upsample_train(const Corpus& corpus, std::uint64_t seed) {
  if (!corpus.split) throw Error(ErrorCode::kState, "upsample_train requires a split corpus");
  std::array<std::vector<std::size_t>, 2> train;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const Record& r = corpus.records[i];
    if (corpus.split->at(r.id) != Partition::kTrain) continue;
    if (!r.is_labeled()) throw Error(ErrorCode::kInvalidArgument, "unlabeled training record " + r.id);
    train[static_cast<std::size_t>(r.label_value())].push_back(i);
  }
  for (std::size_t c = 0; c < 2; ++c) {
    if (train[c].empty()) {
      throw Error(ErrorCode::kInvalidArgument, "training partition has no records of class " + std::to_string(c));
    }
  }
  Corpus out = corpus;
  std::size_t minority = train[0].size() < train[1].size() ? 0 : 1;
  std::size_t deficit = train[1 - minority].size() - train[minority].size();
  std::set<std::string> ids;
  for (const Record& r : corpus.records) ids.insert(r.id);
  Rng rng(mix_seed(seed, 0x75707361ULL));
  std::map<std::string, int> copies;
  for (std::size_t k = 0; k < deficit; ++k) {
    const Record& source = corpus.records[train[minority][rng.uniform_index(train[minority].size())]];
    Record copy = source;
    std::string id;
    do {
      id = source.id + "#dup" + std::to_string(++copies[source.id]);
    } while (ids.contains(id));
    ids.insert(id);
    copy.id = id;
    copy.metadata["upsampled_from"] = source.id;
    (*out.split)[id] = Partition::kTrain;
    out.records.push_back(std::move(copy));
  }
  return out;
}

std::string article_id(const std::string& url) { return "cur-" + to_hex(fnv1a(url)); }

Record record_from_article(const Article& article) {
  Record r;
  r.id = article.id.empty() ? article_id(article.url) : article.id;
  r.dataset_origin = DatasetOrigin::kCurated;
  r.text = article.text;
  r.metadata["source"] = article.source;
  r.metadata["url"] = article.url;
  r.metadata["published_at"] = format_iso8601(article.published_at);
  r.metadata["keyword_group"] = article.keyword_group;
  return r;
}

}  // namespace fakewatch::corpus
