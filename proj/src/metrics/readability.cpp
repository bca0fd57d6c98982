#include "reframe/metrics/readability.hpp"

#include <cctype>

#include "reframe/core/error.hpp"

namespace reframe::metrics {
namespace {

bool is_terminal(char c) noexcept { return c == '.' || c == '?' || c == '!'; }

}  // namespace

ReadabilityResult readability(std::string_view text)
{
  ReadabilityStats st;
  bool in_word = false;
  bool word_has_alnum = false;
  bool in_terminal_run = false;
  auto end_word = [&] {
    if (in_word && word_has_alnum) ++st.words;
    in_word = false;
    word_has_alnum = false;
  };

  for (const char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalpha(u) != 0) ++st.letters;

    if (is_terminal(c)) {
      if (!in_terminal_run) ++st.sentences;
      in_terminal_run = true;
    }
    else {
      in_terminal_run = false;
    }

    if (std::isspace(u) != 0) {
      end_word();
    }
    else {
      in_word = true;
      word_has_alnum = word_has_alnum || std::isalnum(u) != 0;
    }
  }
  end_word();

  if (st.words == 0 || st.letters == 0) {
    throw Error(ErrorCode::NoWords, "readability needs at least one word with letters");
  }
  if (st.sentences == 0) st.sentences = 1;

  st.letters_per_100 = 100.0 * st.letters / st.words;
  st.sentences_per_100 = 100.0 * st.sentences / st.words;
  const double cli = 0.0588 * st.letters_per_100 - 0.296 * st.sentences_per_100 - 15.8;
  return {cli, st};
}

}  // namespace reframe::metrics
