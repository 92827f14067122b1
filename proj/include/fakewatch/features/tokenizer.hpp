#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fakewatch::features {

// Tokens are maximal runs of ASCII letters, digits or non-ASCII bytes that
// are at least min_token_length bytes long.
struct TokenizerConfig {
  bool lowercase = true;
  std::size_t min_token_length = 2;
  std::set<std::string> stopwords;  // stored lowercase
};

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg);

// One word per line; '#' starts a comment line. Words are lowercased.
std::set<std::string> parse_stopwords(std::string_view contents);
std::set<std::string> load_stopwords(const std::string& path);

}  // namespace fakewatch::features
