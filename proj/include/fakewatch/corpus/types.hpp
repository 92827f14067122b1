#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fakewatch/common/time.hpp"

namespace fakewatch::corpus {

struct RawFeedItem {
  std::string title;
  std::string link;
  std::optional<Timestamp> published_at;
  std::string source_name;
  // Description / summary / content body as found in the feed (may contain HTML).
  std::string summary;
};

struct Article {
  std::string id;
  std::string text;
  std::string source;
  Timestamp published_at = kSentinelTimestamp;
  std::string url;
  std::string keyword_group;
  Timestamp retrieved_at = kSentinelTimestamp;
};

struct KeywordGroup {
  std::string name;
  std::vector<std::string> terms;
};

inline constexpr const char* kUncategorized = "uncategorized";

enum class DatasetOrigin { kCurated, kBenchmark };
enum class Label { kReal = 0, kFake = 1, kUnlabeled = -1 };
enum class LabelProvenance { kNone, kLlm, kVerified };

struct Record {
  std::string id;
  DatasetOrigin dataset_origin = DatasetOrigin::kCurated;
  std::string text;
  Label label = Label::kUnlabeled;
  LabelProvenance label_provenance = LabelProvenance::kNone;
  std::map<std::string, std::string> metadata;

  bool is_labeled() const { return label != Label::kUnlabeled; }
  int label_value() const { return static_cast<int>(label); }
};

enum class Partition { kTrain, kTest };

struct Corpus {
  std::vector<Record> records;
  std::optional<std::map<std::string, Partition>> split;

  std::vector<const Record*> partition(Partition p) const;
  const Record* find(const std::string& id) const;
  Record* find(const std::string& id);
};

const char* to_string(DatasetOrigin origin);
const char* to_string(LabelProvenance provenance);
DatasetOrigin parse_dataset_origin(const std::string& s);
LabelProvenance parse_label_provenance(const std::string& s);
Label label_from_int(int v);

// Throws kInvalidArgument when the label/provenance pairing is inconsistent
// or ids repeat.
void validate_record(const Record& record);
void validate_corpus(const Corpus& corpus);

}  // namespace fakewatch::corpus
