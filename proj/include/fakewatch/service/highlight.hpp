#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fakewatch::service {

struct HighlightSpan {
  std::size_t begin = 0;  // byte offsets into the text, end exclusive
  std::size_t end = 0;
  std::string term;
};

// Every occurrence of every term as a case-insensitive run of whole tokens
// (the same token rule the key-term counter uses), ordered by (begin, end,
// term). Spans of different terms may overlap.
std::vector<HighlightSpan> highlight_key_terms(std::string_view text, const std::vector<std::string>& terms);

}  // namespace fakewatch::service
