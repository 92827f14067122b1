#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fakewatch::analysis {

// Category dictionary in the usual text layout:
//   %
//   1<TAB>posemo
//   2<TAB>negemo
//   %
//   happy<TAB>1
//   hate*<TAB>2
// A trailing '*' marks a stem that matches by prefix.
class LiwcDictionary {
 public:
  LiwcDictionary() = default;
  LiwcDictionary(std::vector<std::string> categories, std::map<std::string, std::vector<std::size_t>> words,
                 std::map<std::string, std::vector<std::size_t>> stems);

  const std::vector<std::string>& categories() const { return categories_; }
  // Category indices a token belongs to (exact entry plus every matching stem),
  // sorted and without repeats.
  std::vector<std::size_t> match(const std::string& token) const;

 private:
  std::vector<std::string> categories_;
  std::map<std::string, std::vector<std::size_t>> words_;
  std::map<std::string, std::vector<std::size_t>> stems_;
};

LiwcDictionary parse_liwc_dictionary(std::string_view contents);
LiwcDictionary load_liwc_dictionary(const std::string& path);

struct LiwcProfile {
  std::map<std::string, double> percentages;  // category -> % of tokens
  std::size_t token_count = 0;
};

// 100 * matched tokens / all tokens per category. Throws kEmptyInput for text
// without tokens.
LiwcProfile liwc_profile(std::string_view text, const LiwcDictionary& dictionary);

struct LiwcComparisonRow {
  std::string category;
  double mean_fake = 0.0;
  double mean_real = 0.0;
  double difference = 0.0;  // fake - real
  double p_value = 1.0;     // Welch
  bool significant = false;
};

// Categories in dictionary order. Both sides need at least two profiles.
// Categories where both sides are constant get p = 1 when the constants agree
// and p = 0 otherwise.
std::vector<LiwcComparisonRow> liwc_comparison(const std::vector<LiwcProfile>& fake,
                                               const std::vector<LiwcProfile>& real,
                                               const std::vector<std::string>& categories, double alpha = 0.05);

// category,mean_fake,mean_real,difference,p_value,significant
std::string liwc_comparison_csv(const std::vector<LiwcComparisonRow>& rows);

}  // namespace fakewatch::analysis
