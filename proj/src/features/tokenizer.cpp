#include "fakewatch/features/tokenizer.hpp"

#include "fakewatch/common/strings.hpp"

namespace fakewatch::features {
namespace {

bool is_token_byte(char c) { return is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_token_byte(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_token_byte(text[j])) ++j;
    if (j - i >= cfg.min_token_length) {
      std::string token(text.substr(i, j - i));
      if (cfg.lowercase) token = to_lower(token);
      if (!cfg.stopwords.contains(cfg.lowercase ? token : to_lower(token))) tokens.push_back(std::move(token));
    }
    i = j;
  }
  return tokens;
}

std::set<std::string> parse_stopwords(std::string_view contents) {
  std::set<std::string> words;
  for (const std::string& line : split(contents, '\n')) {
    std::string_view w = trim(line);
    if (w.empty() || w.front() == '#') continue;
    words.insert(to_lower(w));
  }
  return words;
}

std::set<std::string> load_stopwords(const std::string& path) { return parse_stopwords(read_file(path)); }

}  // namespace fakewatch::features
