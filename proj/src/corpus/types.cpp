#include "fakewatch/corpus/types.hpp"

#include <set>

#include "fakewatch/common/error.hpp"

namespace fakewatch::corpus {

std::vector<const Record*> Corpus::partition(Partition p) const {
  std::vector<const Record*> out;
  if (!split) return out;
  for (const Record& r : records) {
    auto it = split->find(r.id);
    if (it != split->end() && it->second == p) out.push_back(&r);
  }
  return out;
}

const Record* Corpus::find(const std::string& id) const {
  for (const Record& r : records) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

Record* Corpus::find(const std::string& id) {
  for (Record& r : records) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const char* to_string(DatasetOrigin origin) {
  return origin == DatasetOrigin::kCurated ? "curated" : "benchmark";
}

const char* to_string(LabelProvenance provenance) {
  switch (provenance) {
    case LabelProvenance::kNone: return "none";
    case LabelProvenance::kLlm: return "llm";
    case LabelProvenance::kVerified: return "verified";
  }
  return "none";
}

DatasetOrigin parse_dataset_origin(const std::string& s) {
  if (s == "curated") return DatasetOrigin::kCurated;
  if (s == "benchmark") return DatasetOrigin::kBenchmark;
  throw Error(ErrorCode::kFormat, "unknown dataset origin '" + s + "'");
}

LabelProvenance parse_label_provenance(const std::string& s) {
  if (s == "none") return LabelProvenance::kNone;
  if (s == "llm") return LabelProvenance::kLlm;
  if (s == "verified") return LabelProvenance::kVerified;
  throw Error(ErrorCode::kFormat, "unknown label provenance '" + s + "'");
}

Label label_from_int(int v) {
  if (v == 0) return Label::kReal;
  if (v == 1) return Label::kFake;
  throw Error(ErrorCode::kInvalidArgument, "label must be 0 or 1, got " + std::to_string(v));
}

void validate_record(const Record& record) {
  if (record.id.empty()) throw Error(ErrorCode::kInvalidArgument, "record id is empty");
  bool unlabeled = record.label == Label::kUnlabeled;
  bool no_provenance = record.label_provenance == LabelProvenance::kNone;
  if (unlabeled != no_provenance) {
    throw Error(ErrorCode::kInvalidArgument,
                "record " + record.id + ": label and provenance disagree (unlabeled iff provenance none)");
  }
}

void validate_corpus(const Corpus& corpus) {
  std::set<std::string> seen;
  for (const Record& r : corpus.records) {
    validate_record(r);
    if (!seen.insert(r.id).second) throw Error(ErrorCode::kConflict, "duplicate record id " + r.id);
  }
  if (corpus.split) {
    if (corpus.split->size() != corpus.records.size()) {
      throw Error(ErrorCode::kInvalidArgument, "split does not cover every record exactly once");
    }
    for (const Record& r : corpus.records) {
      if (!corpus.split->contains(r.id)) {
        throw Error(ErrorCode::kInvalidArgument, "record " + r.id + " missing from split");
      }
    }
  }
}

}  // namespace fakewatch::corpus
