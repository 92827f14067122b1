#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fakewatch/corpus/types.hpp"

namespace fakewatch::corpus {

// Sentence boundary: '.', '!' or '?' (optionally followed by closing quotes or
// brackets), then whitespace, then an uppercase letter, a quote/bracket or a
// digit. A '.' ending a stop-listed abbreviation ("Dr.", "U.S.", "e.g.") or a
// single-letter initial is never a boundary.
std::vector<std::string> split_sentences(std::string_view text);

// First min(max_sentences, available) sentences joined by single spaces.
// Throws kEmptyInput on a blank body.
std::string extract_article_text(std::string_view body, std::size_t max_sentences = 5);

// Group with the most case-insensitive whole-phrase hits; ties go to the
// earlier group; no hits yields kUncategorized. groups must be non-empty.
std::string categorize_article(std::string_view article_text, const std::vector<KeywordGroup>& groups);

// Replaces URLs with [URL], emails with [EMAIL] and @-handles with [USER].
std::string sanitize_text(std::string_view text);

}  // namespace fakewatch::corpus
