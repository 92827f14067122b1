#include "fakewatch/labeling/prompt.hpp"

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/strings.hpp"

namespace fakewatch::labeling {

LabelPrompt::LabelPrompt(std::string template_text, std::size_t max_article_chars)
    : template_(std::move(template_text)), max_chars_(max_article_chars) {
  std::size_t first = template_.find(kArticlePlaceholder);
  if (first == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "label prompt template has no {article} placeholder");
  }
  if (template_.find(kArticlePlaceholder, first + 1) != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "label prompt template repeats the {article} placeholder");
  }
  if (max_chars_ == 0) throw Error(ErrorCode::kInvalidArgument, "max_article_chars must be positive");
}

std::string truncate_at_word(std::string_view text, std::size_t max_chars) {
  if (text.size() <= max_chars) return std::string(text);
  // The cut is on a word boundary if the next byte starts whitespace.
  std::size_t cut = max_chars;
  if (!is_ascii_space(text[cut])) {
    std::size_t back = cut;
    while (back > 0 && !is_ascii_space(text[back - 1])) --back;
    if (back > 0) {
      cut = back;
    } else {
      // One word longer than the limit; avoid splitting a UTF-8 sequence.
      while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
    }
  }
  return std::string(trim(text.substr(0, cut)));
}

std::string build_label_prompt(const LabelPrompt& prompt, const corpus::Record& record) {
  if (trim(record.text).empty()) {
    throw Error(ErrorCode::kEmptyInput, "record " + record.id + " has no text to label");
  }
  std::string out = prompt.template_text();
  std::size_t pos = out.find(kArticlePlaceholder);
  out.replace(pos, kArticlePlaceholder.size(), truncate_at_word(record.text, prompt.max_article_chars()));
  return out;
}

}  // namespace fakewatch::labeling
