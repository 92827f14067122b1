#include "fakewatch/service/highlight.hpp"

#include <algorithm>

#include "fakewatch/common/strings.hpp"

namespace fakewatch::service {
namespace {

struct Token {
  std::size_t begin;
  std::size_t end;
  std::string lower;
};

bool token_byte(unsigned char c) { return is_ascii_alnum(static_cast<char>(c)) || c >= 0x80; }

std::vector<Token> scan(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!token_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && token_byte(static_cast<unsigned char>(text[j]))) ++j;
    out.push_back({i, j, to_lower(text.substr(i, j - i))});
    i = j;
  }
  return out;
}

}  // namespace

std::vector<HighlightSpan> highlight_key_terms(std::string_view text, const std::vector<std::string>& terms) {
  auto tokens = scan(text);
  std::vector<HighlightSpan> spans;
  for (const auto& term : terms) {
    auto parts = scan(term);
    if (parts.empty() || parts.size() > tokens.size()) continue;
    for (std::size_t i = 0; i + parts.size() <= tokens.size(); ++i) {
      bool match = true;
      for (std::size_t k = 0; k < parts.size() && match; ++k) match = tokens[i + k].lower == parts[k].lower;
      if (match) spans.push_back({tokens[i].begin, tokens[i + parts.size() - 1].end, term});
    }
  }
  std::sort(spans.begin(), spans.end(), [](const HighlightSpan& a, const HighlightSpan& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    if (a.end != b.end) return a.end < b.end;
    return a.term < b.term;
  });
  return spans;
}

}  // namespace fakewatch::service
