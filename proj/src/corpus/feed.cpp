#include "fakewatch/corpus/feed.hpp"

#include <expat.h>

#include <memory>
#include <optional>
#include <string>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/strings.hpp"

namespace fakewatch::corpus {
namespace {

enum class FeedKind { kUnknown, kRss, kAtom };

std::string local_name(const XML_Char* name) {
  std::string_view n(name);
  auto colon = n.rfind(':');
  return std::string(colon == std::string_view::npos ? n : n.substr(colon + 1));
}

std::string_view attribute(const XML_Char** attrs, std::string_view key) {
  for (int i = 0; attrs[i] != nullptr; i += 2) {
    if (key == attrs[i]) return attrs[i + 1];
  }
  return {};
}

class FeedParser {
 public:
  std::vector<RawFeedItem> items;
  std::optional<std::string> format_error;

  void start(const XML_Char* raw_name, const XML_Char** attrs) {
    std::string name = local_name(raw_name);
    ++depth_;
    if (depth_ == 1) {
      if (name == "rss") {
        kind_ = FeedKind::kRss;
      } else if (name == "feed") {
        kind_ = FeedKind::kAtom;
      } else {
        format_error = "unsupported feed root element <" + name + ">";
      }
      return;
    }
    if (!in_item_) {
      bool item_start = kind_ == FeedKind::kRss ? (name == "item" && depth_ == 3)
                                                : (name == "entry" && depth_ == 2);
      if (item_start) {
        in_item_ = true;
        item_depth_ = depth_;
        current_ = RawFeedItem{};
        date_ = {};
        atom_updated_ = {};
        return;
      }
      // Channel / feed title, used as the fallback source name.
      int title_depth = kind_ == FeedKind::kRss ? 3 : 2;
      if (name == "title" && depth_ == title_depth) begin_capture(&channel_title_);
      return;
    }

    // Inside an item.
    if (depth_ == item_depth_ + 1) {
      if (name == "title") {
        begin_capture(&current_.title);
      } else if (name == "link") {
        if (kind_ == FeedKind::kRss) {
          begin_capture(&current_.link);
        } else {
          std::string_view rel = attribute(attrs, "rel");
          std::string_view href = attribute(attrs, "href");
          if ((rel.empty() || rel == "alternate") && current_.link.empty()) current_.link = href;
        }
      } else if (name == "pubDate" || name == "date" || name == "published") {
        date_.clear();
        begin_capture(&date_);
      } else if (name == "updated") {
        begin_capture(&atom_updated_);
      } else if (name == "source") {
        if (kind_ == FeedKind::kRss) begin_capture(&current_.source_name);
      } else if (name == "description" || name == "summary") {
        if (current_.summary.empty()) begin_capture(&current_.summary);
      } else if (name == "encoded" || name == "content") {
        current_.summary.clear();
        begin_capture(&current_.summary);
      }
    } else if (kind_ == FeedKind::kAtom && depth_ == item_depth_ + 2 && name == "title" &&
               parent_ == "source") {
      begin_capture(&current_.source_name);
    } else if (kind_ == FeedKind::kAtom && depth_ == item_depth_ + 2 && name == "name" &&
               parent_ == "author" && current_.source_name.empty()) {
      begin_capture(&author_name_);
    }
    if (depth_ == item_depth_ + 1) parent_ = name;
  }

  void end(const XML_Char* raw_name) {
    std::string name = local_name(raw_name);
    if (capture_depth_ == depth_) capture_ = nullptr;
    if (in_item_ && depth_ == item_depth_) {
      finish_item();
      in_item_ = false;
    }
    --depth_;
  }

  void text(const XML_Char* s, int len) {
    if (capture_) capture_->append(s, static_cast<std::size_t>(len));
  }

 private:
  void begin_capture(std::string* target) {
    capture_ = target;
    capture_depth_ = depth_;
  }

  void finish_item() {
    current_.title = std::string(trim(current_.title));
    current_.link = std::string(trim(current_.link));
    current_.source_name = std::string(trim(current_.source_name));
    if (current_.source_name.empty()) current_.source_name = std::string(trim(author_name_));
    if (current_.source_name.empty()) current_.source_name = std::string(trim(channel_title_));
    std::string_view when = trim(date_);
    if (when.empty()) when = trim(atom_updated_);
    current_.published_at = when.empty() ? std::nullopt : parse_timestamp(when);
    current_.summary = std::string(trim(current_.summary));
    items.push_back(std::move(current_));
    current_ = RawFeedItem{};
    author_name_.clear();
  }

  FeedKind kind_ = FeedKind::kUnknown;
  int depth_ = 0;
  bool in_item_ = false;
  int item_depth_ = 0;
  RawFeedItem current_;
  std::string date_;
  std::string atom_updated_;
  std::string channel_title_;
  std::string author_name_;
  std::string parent_;
  std::string* capture_ = nullptr;
  int capture_depth_ = -1;
};

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

}  // namespace

std::vector<RawFeedItem> parse_feed(std::string_view feed_document) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(XML_ParserCreate(nullptr));
  if (!parser) throw Error(ErrorCode::kIo, "cannot allocate XML parser");
  FeedParser state;
  XML_SetUserData(parser.get(), &state);
  XML_SetElementHandler(
      parser.get(),
      [](void* user, const XML_Char* name, const XML_Char** attrs) {
        auto* self = static_cast<FeedParser*>(user);
        self->start(name, attrs);
      },
      [](void* user, const XML_Char* name) { static_cast<FeedParser*>(user)->end(name); });
  XML_SetCharacterDataHandler(parser.get(), [](void* user, const XML_Char* s, int len) {
    static_cast<FeedParser*>(user)->text(s, len);
  });

  XML_Status status = XML_Parse(parser.get(), feed_document.data(),
                                static_cast<int>(feed_document.size()), XML_TRUE);
  if (status != XML_STATUS_OK) {
    throw ParseError(std::string("malformed feed XML: ") +
                         XML_ErrorString(XML_GetErrorCode(parser.get())),
                     XML_GetCurrentByteIndex(parser.get()));
  }
  if (state.format_error) throw Error(ErrorCode::kFormat, *state.format_error);
  for (std::size_t i = 0; i < state.items.size(); ++i) {
    if (state.items[i].link.empty()) {
      throw Error(ErrorCode::kFormat, "feed entry " + std::to_string(i) + " has no link");
    }
  }
  return std::move(state.items);
}

namespace {

std::string decode_entity(std::string_view name) {
  if (name == "amp") return "&";
  if (name == "lt") return "<";
  if (name == "gt") return ">";
  if (name == "quot") return "\"";
  if (name == "apos" || name == "#39") return "'";
  if (name == "nbsp") return " ";
  if (!name.empty() && name[0] == '#') {
    unsigned long cp = 0;
    try {
      cp = (name.size() > 1 && (name[1] == 'x' || name[1] == 'X'))
               ? std::stoul(std::string(name.substr(2)), nullptr, 16)
               : std::stoul(std::string(name.substr(1)));
    } catch (const std::exception&) {
      return {};
    }
    std::string out;
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x110000) {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
  }
  return {};
}

}  // namespace

std::string strip_html(std::string_view html) {
  std::string out;
  out.reserve(html.size());
  std::size_t i = 0;
  auto skip_until = [&](std::string_view close) {
    std::size_t pos = html.find(close, i);
    i = pos == std::string_view::npos ? html.size() : pos + close.size();
  };
  while (i < html.size()) {
    char c = html[i];
    if (c == '<') {
      if (html.substr(i, 4) == "<!--") {
        skip_until("-->");
        continue;
      }
      std::size_t close = html.find('>', i);
      if (close == std::string_view::npos) break;
      std::string tag = to_lower(html.substr(i + 1, close - i - 1));
      i = close + 1;
      if (tag.rfind("script", 0) == 0) {
        std::size_t end = to_lower(html.substr(i)).find("</script");
        i = end == std::string::npos ? html.size() : i + end;
        continue;
      }
      if (tag.rfind("style", 0) == 0) {
        std::size_t end = to_lower(html.substr(i)).find("</style");
        i = end == std::string::npos ? html.size() : i + end;
        continue;
      }
      out.push_back(' ');
      continue;
    }
    if (c == '&') {
      std::size_t semi = html.find(';', i);
      if (semi != std::string_view::npos && semi - i <= 10) {
        std::string decoded = decode_entity(html.substr(i + 1, semi - i - 1));
        if (!decoded.empty()) {
          out += decoded;
          i = semi + 1;
          continue;
        }
      }
    }
    out.push_back(c);
    ++i;
  }
  // Collapse whitespace without lowercasing.
  std::string collapsed;
  bool space = false;
  for (char ch : out) {
    if (is_ascii_space(ch)) {
      space = !collapsed.empty();
      continue;
    }
    if (space) collapsed.push_back(' ');
    space = false;
    collapsed.push_back(ch);
  }
  return collapsed;
}

}  // namespace fakewatch::corpus
