#include "fakewatch/corpus/text.hpp"

#include <algorithm>
#include <array>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/strings.hpp"

namespace fakewatch::corpus {
namespace {

constexpr std::array<std::string_view, 44> kAbbreviations = {
    "dr",  "mr",  "mrs",  "ms",   "prof", "sr",  "jr",  "st",  "mt",  "gen", "sen",
    "rep", "gov", "lt",   "col",  "capt", "sgt", "rev", "hon", "pres", "e.g", "i.e",
    "etc", "vs",  "inc",  "ltd",  "co",   "corp", "jan", "feb", "mar", "apr", "jun",
    "jul", "aug", "sep",  "sept", "oct",  "nov", "dec", "a.m", "p.m", "approx", "dept"};

bool is_closing(std::string_view s, std::size_t i, std::size_t& width) {
  char c = s[i];
  if (c == '"' || c == '\'' || c == ')' || c == ']') {
    width = 1;
    return true;
  }
  // U+201D / U+2019 right double / single quotation marks.
  if (i + 2 < s.size() + 0 && static_cast<unsigned char>(c) == 0xE2 &&
      static_cast<unsigned char>(s[i + 1]) == 0x80 &&
      (static_cast<unsigned char>(s[i + 2]) == 0x9D || static_cast<unsigned char>(s[i + 2]) == 0x99)) {
    width = 3;
    return true;
  }
  return false;
}

bool starts_sentence(std::string_view s, std::size_t i) {
  char c = s[i];
  if (is_ascii_upper(c) || is_ascii_digit(c)) return true;
  if (c == '"' || c == '\'' || c == '(' || c == '[') return true;
  // U+201C / U+2018 left quotation marks.
  return i + 2 < s.size() && static_cast<unsigned char>(c) == 0xE2 &&
         static_cast<unsigned char>(s[i + 1]) == 0x80 &&
         (static_cast<unsigned char>(s[i + 2]) == 0x9C || static_cast<unsigned char>(s[i + 2]) == 0x98);
}

// Token ending at the '.' at position dot, without leading brackets/quotes.
bool is_abbreviation(std::string_view s, std::size_t dot) {
  std::size_t start = dot;
  while (start > 0 && !is_ascii_space(s[start - 1])) --start;
  std::string_view token = s.substr(start, dot - start);
  while (!token.empty() && (token.front() == '(' || token.front() == '"' || token.front() == '\'' ||
                            token.front() == '[')) {
    token.remove_prefix(1);
  }
  if (token.empty()) return false;
  if (token.size() == 1 && is_ascii_upper(token[0])) return true;  // initial: "John F. Kennedy"
  std::string lower = to_lower(token);
  if (std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end()) {
    return true;
  }
  // Dotted single-letter sequences: U.S, D.C, U.K
  bool dotted = token.size() >= 3;
  for (std::size_t k = 0; k < token.size() && dotted; ++k) {
    dotted = (k % 2 == 0) ? is_ascii_alpha(token[k]) : token[k] == '.';
  }
  return dotted;
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    std::string_view piece = trim(text.substr(start, end - start));
    if (!piece.empty()) sentences.emplace_back(piece);
    start = end;
  };
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
    std::size_t width = 0;
    while (j < text.size() && is_closing(text, j, width)) j += width;
    if (j >= text.size() || !is_ascii_space(text[j])) {
      i = j;
      continue;
    }
    std::size_t k = j;
    while (k < text.size() && is_ascii_space(text[k])) ++k;
    bool boundary = k >= text.size() || starts_sentence(text, k);
    if (boundary && c == '.' && j == i + 1 && is_abbreviation(text, i)) boundary = false;
    if (boundary && c == '.' && j > i + 1 && text[j - 1] == '.' && is_abbreviation(text, j - 1)) {
      boundary = false;
    }
    if (boundary) emit(j);
    i = k;
  }
  emit(text.size());
  return sentences;
}

std::string extract_article_text(std::string_view body, std::size_t max_sentences) {
  if (trim(body).empty()) throw Error(ErrorCode::kEmptyInput, "article body is empty");
  std::vector<std::string> sentences = split_sentences(body);
  if (sentences.size() > max_sentences) sentences.resize(max_sentences);
  return join(sentences, " ");
}

std::string categorize_article(std::string_view article_text, const std::vector<KeywordGroup>& groups) {
  if (groups.empty()) throw Error(ErrorCode::kInvalidArgument, "no keyword groups configured");
  const std::string haystack = normalize_whitespace_lower(article_text);
  auto count_hits = [&](const std::string& phrase) {
    std::size_t hits = 0;
    if (phrase.empty()) return hits;
    for (std::size_t pos = haystack.find(phrase); pos != std::string::npos;
         pos = haystack.find(phrase, pos + 1)) {
      bool left_ok = pos == 0 || !is_ascii_alnum(haystack[pos - 1]);
      std::size_t end = pos + phrase.size();
      bool right_ok = end >= haystack.size() || !is_ascii_alnum(haystack[end]);
      if (left_ok && right_ok) ++hits;
    }
    return hits;
  };
  std::size_t best_hits = 0;
  const KeywordGroup* best = nullptr;
  for (const KeywordGroup& group : groups) {
    std::size_t hits = 0;
    for (const std::string& term : group.terms) hits += count_hits(normalize_whitespace_lower(term));
    if (hits > best_hits) {
      best_hits = hits;
      best = &group;
    }
  }
  return best ? best->name : std::string(kUncategorized);
}

namespace {

bool is_word_char(char c) { return is_ascii_alnum(c) || c == '_'; }
bool is_email_local_char(char c) {
  return is_ascii_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}
bool is_domain_label_char(char c) { return is_ascii_alnum(c) || c == '-'; }
bool is_url_char(char c) { return !is_ascii_space(c) && c != '<' && c != '>' && c != '"'; }
bool is_trailing_punct(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == ')' ||
         c == ']' || c == '}' || c == '\'';
}

// Length of a URL match at i, or 0.
std::size_t match_url(std::string_view s, std::size_t i, char prev) {
  std::size_t body = 0;
  if (starts_with_icase(s.substr(i), "https://")) body = i + 8;
  else if (starts_with_icase(s.substr(i), "http://")) body = i + 7;
  else if (starts_with_icase(s.substr(i), "ftp://")) body = i + 6;
  else if (!is_word_char(prev) && starts_with_icase(s.substr(i), "www.")) body = i + 4;
  if (body == 0) return 0;
  std::size_t end = body;
  while (end < s.size() && is_url_char(s[end])) ++end;
  while (end > body && is_trailing_punct(s[end - 1])) --end;
  return end - i;
}

// Length of an email match at i, or 0: local@label(.label)+
std::size_t match_email(std::string_view s, std::size_t i) {
  std::size_t j = i;
  while (j < s.size() && is_email_local_char(s[j])) ++j;
  if (j == i || j >= s.size() || s[j] != '@') return 0;
  std::size_t k = j + 1;
  std::size_t label_start = k;
  while (k < s.size() && is_domain_label_char(s[k])) ++k;
  if (k == label_start) return 0;
  int extra_labels = 0;
  while (k + 1 < s.size() && s[k] == '.' && is_domain_label_char(s[k + 1])) {
    ++k;
    while (k < s.size() && is_domain_label_char(s[k])) ++k;
    ++extra_labels;
  }
  return extra_labels > 0 ? k - i : 0;
}

std::size_t match_handle(std::string_view s, std::size_t i, char prev) {
  if (s[i] != '@' || is_word_char(prev)) return 0;
  std::size_t j = i + 1;
  while (j < s.size() && is_word_char(s[j])) ++j;
  return j > i + 1 ? j - i : 0;
}

}  // namespace

std::string sanitize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char prev = out.empty() ? '\0' : out.back();
    if (std::size_t n = match_url(text, i, prev)) {
      out += "[URL]";
      i += n;
    } else if (std::size_t m = match_email(text, i)) {
      out += "[EMAIL]";
      i += m;
    } else if (std::size_t h = match_handle(text, i, prev)) {
      out += "[USER]";
      i += h;
    } else {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

}  // namespace fakewatch::corpus
