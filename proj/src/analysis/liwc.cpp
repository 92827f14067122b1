#include "fakewatch/analysis/liwc.hpp"

#include <algorithm>
#include <cstdio>

#include "fakewatch/analysis/sentiment.hpp"
#include "fakewatch/common/error.hpp"
#include "fakewatch/common/strings.hpp"
#include "fakewatch/evaluation/ttest.hpp"

namespace fakewatch::analysis {

LiwcDictionary::LiwcDictionary(std::vector<std::string> categories,
                               std::map<std::string, std::vector<std::size_t>> words,
                               std::map<std::string, std::vector<std::size_t>> stems)
    : categories_(std::move(categories)), words_(std::move(words)), stems_(std::move(stems)) {
  if (categories_.empty()) throw Error(ErrorCode::kInvalidArgument, "LIWC dictionary has no categories");
}

std::vector<std::size_t> LiwcDictionary::match(const std::string& token) const {
  std::vector<std::size_t> out;
  if (auto it = words_.find(token); it != words_.end()) out = it->second;
  // Every prefix of the token is a candidate stem.
  for (std::size_t len = 1; len <= token.size(); ++len) {
    if (auto it = stems_.find(token.substr(0, len)); it != stems_.end()) {
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LiwcDictionary parse_liwc_dictionary(std::string_view contents) {
  std::vector<std::string> categories;
  std::map<std::string, std::size_t> id_to_index;
  std::map<std::string, std::vector<std::size_t>> words, stems;
  int section = 0;  // 0 before header, 1 in header, 2 in word list
  std::size_t line_no = 0;
  for (const std::string& raw : split(contents, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    auto where = [&] { return "LIWC dictionary line " + std::to_string(line_no) + ": "; };
    if (line == "%") {
      if (section == 2) throw Error(ErrorCode::kParse, where() + "unexpected '%'");
      ++section;
      continue;
    }
    std::vector<std::string> fields;
    for (auto& f : split(line, '\t'))
      for (auto& g : split(f, ' '))
        if (!trim(g).empty()) fields.emplace_back(trim(g));
    if (section == 0) throw Error(ErrorCode::kParse, where() + "expected '%' header");
    if (section == 1) {
      if (fields.size() != 2) throw Error(ErrorCode::kParse, where() + "expected '<id> <category>'");
      if (!id_to_index.emplace(fields[0], categories.size()).second) {
        throw Error(ErrorCode::kParse, where() + "duplicate category id " + fields[0]);
      }
      categories.push_back(fields[1]);
      continue;
    }
    if (fields.size() < 2) throw Error(ErrorCode::kParse, where() + "word without categories");
    std::string word = to_lower(fields[0]);
    bool stem = word.size() > 1 && word.back() == '*';
    if (stem) word.pop_back();
    auto& target = stem ? stems[word] : words[word];
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto it = id_to_index.find(fields[i]);
      if (it == id_to_index.end()) throw Error(ErrorCode::kParse, where() + "unknown category id " + fields[i]);
      target.push_back(it->second);
    }
  }
  if (section != 2) throw Error(ErrorCode::kParse, "LIWC dictionary is missing its '%' header block");
  return LiwcDictionary(std::move(categories), std::move(words), std::move(stems));
}

LiwcDictionary load_liwc_dictionary(const std::string& path) { return parse_liwc_dictionary(read_file(path)); }

LiwcProfile liwc_profile(std::string_view text, const LiwcDictionary& dictionary) {
  auto tokens = analysis_tokens(text);
  if (tokens.empty()) throw Error(ErrorCode::kEmptyInput, "LIWC profile of empty text");
  std::vector<std::size_t> counts(dictionary.categories().size(), 0);
  for (const auto& t : tokens)
    for (std::size_t c : dictionary.match(t)) ++counts[c];
  LiwcProfile p;
  p.token_count = tokens.size();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    p.percentages[dictionary.categories()[c]] = 100.0 * static_cast<double>(counts[c]) / tokens.size();
  }
  return p;
}

std::vector<LiwcComparisonRow> liwc_comparison(const std::vector<LiwcProfile>& fake,
                                               const std::vector<LiwcProfile>& real,
                                               const std::vector<std::string>& categories, double alpha) {
  if (fake.size() < 2 || real.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "LIWC comparison needs at least two profiles per class");
  }
  auto column = [](const std::vector<LiwcProfile>& ps, const std::string& cat) {
    std::vector<double> v;
    for (const auto& p : ps) {
      auto it = p.percentages.find(cat);
      v.push_back(it == p.percentages.end() ? 0.0 : it->second);
    }
    return v;
  };
  std::vector<LiwcComparisonRow> rows;
  for (const auto& cat : categories) {
    auto a = column(fake, cat);
    auto b = column(real, cat);
    LiwcComparisonRow row;
    row.category = cat;
    const bool a_const = std::all_of(a.begin(), a.end(), [&](double x) { return x == a[0]; });
    const bool b_const = std::all_of(b.begin(), b.end(), [&](double x) { return x == b[0]; });
    if (a_const && b_const) {
      row.mean_fake = a[0];
      row.mean_real = b[0];
      row.p_value = a[0] == b[0] ? 1.0 : 0.0;
    } else {
      auto t = evaluation::welch_ttest(a, b, alpha);
      row.mean_fake = t.mean_a;
      row.mean_real = t.mean_b;
      row.p_value = t.p_value;
    }
    row.difference = row.mean_fake - row.mean_real;
    row.significant = row.p_value < alpha;
    rows.push_back(row);
  }
  return rows;
}

std::string liwc_comparison_csv(const std::vector<LiwcComparisonRow>& rows) {
  std::string out = "category,mean_fake,mean_real,difference,p_value,significant\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%.6g,%s\n", r.mean_fake, r.mean_real, r.difference, r.p_value,
                  r.significant ? "true" : "false");
    out += r.category + buf;
  }
  return out;
}

}  // namespace fakewatch::analysis
