#include "fakewatch/analysis/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/strings.hpp"

namespace fakewatch::analysis {

SentimentLexicon::SentimentLexicon(std::map<std::string, double> polarity) {
  for (auto& [word, value] : polarity) {
    if (word.empty()) throw Error(ErrorCode::kInvalidArgument, "sentiment lexicon has an empty word");
    if (!(value >= -1.0 && value <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "polarity of '" + word + "' is outside [-1, 1]");
    }
    polarity_[to_lower(word)] = value;
  }
}

const double* SentimentLexicon::find(const std::string& word) const {
  auto it = polarity_.find(word);
  return it == polarity_.end() ? nullptr : &it->second;
}

SentimentLexicon parse_sentiment_lexicon(std::string_view contents) {
  std::map<std::string, double> entries;
  std::size_t line_no = 0;
  for (const std::string& raw : split(contents, '\n')) {
    std::string_view line = raw;
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::size_t gap = line.find_first_of(" \t");
    if (gap == std::string_view::npos) {
      throw Error(ErrorCode::kParse, "sentiment lexicon line " + std::to_string(line_no) + ": missing polarity");
    }
    std::string word(line.substr(0, gap));
    std::string_view num = trim(line.substr(gap));
    double value = 0.0;
    auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc() || end != num.data() + num.size()) {
      throw Error(ErrorCode::kParse, "sentiment lexicon line " + std::to_string(line_no) + ": bad polarity");
    }
    entries[to_lower(word)] = value;
  }
  return SentimentLexicon(std::move(entries));
}

SentimentLexicon load_sentiment_lexicon(const std::string& path) { return parse_sentiment_lexicon(read_file(path)); }

std::vector<std::string> analysis_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto word_byte = [](unsigned char c) { return std::isalnum(c) || c >= 0x80; };
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (word_byte(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == '\'' && !cur.empty() && i + 1 < text.size() &&
               word_byte(static_cast<unsigned char>(text[i + 1]))) {
      cur.push_back('\'');
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

namespace {

bool is_negator(const std::string& t) { return t == "not" || t == "no" || t == "never"; }

}  // namespace

double sentiment_polarity(const std::vector<std::string>& tokens, const SentimentLexicon& lexicon) {
  double total = 0.0;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const double* p = lexicon.find(tokens[i]);
    if (!p) continue;
    bool negated = (i >= 1 && is_negator(tokens[i - 1])) || (i >= 2 && is_negator(tokens[i - 2]));
    total += negated ? -*p : *p;
    ++matched;
  }
  return matched == 0 ? 0.0 : total / static_cast<double>(matched);
}

double sentiment_polarity(std::string_view text, const SentimentLexicon& lexicon) {
  return sentiment_polarity(analysis_tokens(text), lexicon);
}

std::size_t polarity_bin(double score, std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::kInvalidArgument, "histogram needs at least one bin");
  double pos = (std::clamp(score, -1.0, 1.0) + 1.0) / 2.0 * static_cast<double>(bins);
  return std::min(static_cast<std::size_t>(pos), bins - 1);
}

PolarityHistogram polarity_histogram(const corpus::Corpus& corpus, const SentimentLexicon& lexicon,
                                     std::size_t bins) {
  PolarityHistogram h;
  if (bins == 0) throw Error(ErrorCode::kInvalidArgument, "histogram needs at least one bin");
  for (std::size_t i = 0; i <= bins; ++i) h.edges.push_back(-1.0 + 2.0 * static_cast<double>(i) / bins);
  h.fake.assign(bins, 0);
  h.real.assign(bins, 0);
  h.unlabeled.assign(bins, 0);
  for (const auto& r : corpus.records) {
    std::size_t b = polarity_bin(sentiment_polarity(r.text, lexicon), bins);
    switch (r.label) {
      case corpus::Label::kFake:
        ++h.fake[b];
        break;
      case corpus::Label::kReal:
        ++h.real[b];
        break;
      case corpus::Label::kUnlabeled:
        ++h.unlabeled[b];
        break;
    }
  }
  return h;
}

}  // namespace fakewatch::analysis
