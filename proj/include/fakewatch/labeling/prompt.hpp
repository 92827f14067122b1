#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "fakewatch/corpus/types.hpp"

namespace fakewatch::labeling {

inline constexpr std::string_view kArticlePlaceholder = "{article}";

inline constexpr std::string_view kDefaultPromptTemplate =
    "You are assessing news articles about North American elections.\n"
    "Decide whether the following article is likely fake (1) or real (0).\n"
    "Answer with a first line of the form LABEL=<0|1>;CONF=<0..1>, then a short rationale.\n\n"
    "Article:\n{article}\n";

class LabelPrompt {
 public:
  // Throws kInvalidArgument unless the template contains {article} exactly once
  // and max_article_chars > 0.
  LabelPrompt(std::string template_text, std::size_t max_article_chars);

  const std::string& template_text() const { return template_; }
  std::size_t max_article_chars() const { return max_chars_; }

 private:
  std::string template_;
  std::size_t max_chars_;
};

// Substitutes the record text, cut at the last whole word that fits in
// max_article_chars (a single over-long word is cut at the limit).
std::string build_label_prompt(const LabelPrompt& prompt, const corpus::Record& record);

// Longest prefix of `text` of at most max_chars bytes ending on a word boundary.
std::string truncate_at_word(std::string_view text, std::size_t max_chars);

}  // namespace fakewatch::labeling
