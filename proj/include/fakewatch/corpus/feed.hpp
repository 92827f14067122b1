#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fakewatch/corpus/types.hpp"

namespace fakewatch::corpus {

// RSS 2.0 (<rss><channel><item>) or Atom (<feed><entry>). Items come back in
// document order. Malformed XML raises ParseError with the byte offset;
// any other root element raises kFormat.
std::vector<RawFeedItem> parse_feed(std::string_view feed_document);

// Minimal tag stripper for fetched article pages: drops tags, script/style
// bodies and comments, decodes common entities, collapses whitespace.
std::string strip_html(std::string_view html);

}  // namespace fakewatch::corpus
