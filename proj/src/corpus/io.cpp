#include "fakewatch/corpus/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/strings.hpp"

namespace fakewatch::corpus {

using ordered_json = nlohmann::ordered_json;

std::string record_to_jsonl(const Record& record) {
  ordered_json j;
  j["id"] = record.id;
  j["dataset"] = to_string(record.dataset_origin);
  j["text"] = record.text;
  j["label"] = record.is_labeled() ? ordered_json(record.label_value()) : ordered_json(nullptr);
  j["label_provenance"] = to_string(record.label_provenance);
  j["metadata"] = ordered_json::object();
  for (const auto& [k, v] : record.metadata) j["metadata"][k] = v;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

Record record_from_jsonl(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid corpus line: ") + e.what(), static_cast<long long>(e.byte));
  }
  Record r;
  try {
    r.id = j.at("id").get<std::string>();
    r.dataset_origin = parse_dataset_origin(j.value("dataset", std::string("curated")));
    r.text = j.at("text").get<std::string>();
    const auto& label = j.at("label");
    r.label = label.is_null() ? Label::kUnlabeled : label_from_int(label.get<int>());
    r.label_provenance = parse_label_provenance(j.value("label_provenance", std::string("none")));
    if (j.contains("metadata")) {
      for (const auto& [k, v] : j["metadata"].items()) {
        r.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("corpus line schema: ") + e.what());
  }
  validate_record(r);
  return r;
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const Record& r : corpus.records) {
    out += record_to_jsonl(r);
    out += '\n';
  }
  return out;
}

Corpus corpus_from_jsonl(std::string_view contents) {
  Corpus c;
  std::size_t line_no = 0;
  for (const std::string& line : split(contents, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      c.records.push_back(record_from_jsonl(line));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate_corpus(c);
  return c;
}

void save_corpus(const Corpus& corpus, const std::string& path) { write_file(path, corpus_to_jsonl(corpus)); }

Corpus load_corpus(const std::string& path) { return corpus_from_jsonl(read_file(path)); }

std::vector<std::vector<std::string>> parse_csv(std::string_view contents) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  for (std::size_t i = 0; i < contents.size(); ++i) {
    char c = contents[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < contents.size() && contents[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < contents.size() && contents[i + 1] == '\n') ++i;
      if (field_started || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      field_started = false;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted CSV field", static_cast<long long>(contents.size()));
  if (field_started || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_escape(std::string_view field) {
  bool needs = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

namespace {

struct BenchmarkRow {
  std::string source;
  std::string date;
  std::string text;
  std::string label;
};

}  // namespace

BenchmarkLoadResult load_benchmark(std::string_view contents, bool is_jsonl,
                                   const BenchmarkLoadOptions& options) {
  std::vector<BenchmarkRow> rows;
  if (is_jsonl) {
    for (const std::string& line : split(contents, '\n')) {
      if (trim(line).empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid benchmark line: ") + e.what(), static_cast<long long>(e.byte));
      }
      auto str = [&](const char* key) -> std::string {
        if (!j.contains(key) || j[key].is_null()) return {};
        return j[key].is_string() ? j[key].get<std::string>() : j[key].dump();
      };
      rows.push_back({str("source"), str("date"), str("text"), str("label")});
    }
  } else {
    auto table = parse_csv(contents);
    if (table.empty()) return {};
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < table[0].size(); ++i) col[to_lower(trim(table[0][i]))] = i;
    if (!col.contains("text")) throw Error(ErrorCode::kFormat, "benchmark CSV has no 'text' column");
    auto cell = [&](const std::vector<std::string>& row, const char* name) -> std::string {
      auto it = col.find(name);
      if (it == col.end() || it->second >= row.size()) return {};
      return row[it->second];
    };
    for (std::size_t r = 1; r < table.size(); ++r) {
      rows.push_back({cell(table[r], "source"), cell(table[r], "date"), cell(table[r], "text"),
                      cell(table[r], "label")});
    }
  }

  BenchmarkLoadResult result;
  struct Dated {
    Timestamp when;
    std::size_t row;
  };
  std::vector<Dated> kept;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (trim(rows[i].text).empty()) {
      ++result.dropped_missing_text;
      continue;
    }
    auto when = parse_timestamp(rows[i].date);
    if (!when) ++result.missing_dates;
    Timestamp ts = when.value_or(kSentinelTimestamp);
    if ((options.from && ts < *options.from) || (options.to && ts > *options.to)) {
      ++result.outside_date_range;
      continue;
    }
    kept.push_back({ts, i});
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Dated& a, const Dated& b) { return a.when < b.when; });
  if (options.limit > 0 && kept.size() > options.limit) kept.resize(options.limit);

  for (const Dated& d : kept) {
    const BenchmarkRow& row = rows[d.row];
    Record r;
    r.id = "bench-" + std::to_string(d.row + 1);
    r.dataset_origin = DatasetOrigin::kBenchmark;
    r.text = std::string(trim(row.text));
    r.metadata["source"] = row.source;
    r.metadata["published_at"] = format_iso8601(d.when);
    std::string label = std::string(trim(row.label));
    if (!label.empty()) r.metadata["benchmark_label"] = label;
    if (options.label_provenance != LabelProvenance::kNone && (label == "0" || label == "1")) {
      r.label = label == "1" ? Label::kFake : Label::kReal;
      r.label_provenance = options.label_provenance;
    }
    result.records.push_back(std::move(r));
  }
  return result;
}

}  // namespace fakewatch::corpus
