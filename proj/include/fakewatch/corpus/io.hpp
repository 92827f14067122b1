#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fakewatch/common/time.hpp"
#include "fakewatch/corpus/types.hpp"

namespace fakewatch::corpus {

// One record per line: {"id","dataset","text","label","label_provenance","metadata"}.
std::string record_to_jsonl(const Record& record);
Record record_from_jsonl(std::string_view line);
std::string corpus_to_jsonl(const Corpus& corpus);
Corpus corpus_from_jsonl(std::string_view contents);
void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

struct BenchmarkLoadOptions {
  LabelProvenance label_provenance = LabelProvenance::kNone;
  std::optional<Timestamp> from;
  std::optional<Timestamp> to;
  // Keep at most this many records after chronological sorting (0 = all).
  std::size_t limit = 0;
};

struct BenchmarkLoadResult {
  std::vector<Record> records;
  std::size_t dropped_missing_text = 0;
  std::size_t missing_dates = 0;
  std::size_t outside_date_range = 0;
};

// CSV (header row) or JSON Lines with columns source,date,text[,label].
// Records without text are dropped; missing dates get the sentinel timestamp.
BenchmarkLoadResult load_benchmark(std::string_view contents, bool is_jsonl,
                                   const BenchmarkLoadOptions& options);

// RFC 4180 reader: quoted fields, doubled quotes, embedded newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view contents);
std::string csv_escape(std::string_view field);

}  // namespace fakewatch::corpus
