#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stylepatch {

using TokenSeq = std::vector<std::string>;

/// Padding symbol used wherever a neighbor window runs past a sentence edge.
inline constexpr std::string_view kBoundary = "⟨B⟩";
/// Stand-in for tokens the fluency model never saw.
inline constexpr std::string_view kUnknown = "⟨UNK⟩";

/// A tokenized piece of text.
///
/// `tokens` keeps surface forms for display, `folded` holds the case-folded
/// forms used for every comparison. The last `augmented` tokens were appended
/// by context rewriting; they take part in retrieval but are not part of the
/// visible text.
struct Utterance {
  std::string raw;
  TokenSeq tokens;
  TokenSeq folded;
  std::size_t augmented = 0;

  [[nodiscard]] std::size_t size() const { return tokens.size(); }
  [[nodiscard]] bool empty() const { return tokens.empty(); }
  [[nodiscard]] std::span<const std::string> visible_tokens() const {
    return std::span(tokens).first(tokens.size() - augmented);
  }

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

/// Splits on whitespace and detaches punctuation into standalone tokens.
///
/// Hyphens and apostrophes between word characters stay inside the word
/// ("multi-threaded", "isn't"), as do '.' and ',' between digits ("3.5").
/// ASCII punctuation plus the common CJK / fullwidth / general punctuation
/// blocks count as punctuation; every other code point is a word character.
Utterance tokenize(std::string_view text);

/// Builds an utterance from already segmented tokens.
Utterance from_tokens(TokenSeq tokens);

/// ASCII case folding. Non-ASCII bytes pass through unchanged.
std::string fold(std::string_view token);
TokenSeq fold_all(std::span<const std::string> tokens);

/// True when every code point of the token is punctuation.
bool is_punctuation_token(std::string_view token);

/// Space-joined tokens; the canonical serialization of an utterance.
std::string join(std::span<const std::string> tokens, std::string_view sep = " ");

/// Display rendering: tokens joined by spaces with no space before
/// punctuation tokens.
std::string render(std::span<const std::string> tokens);

}  // namespace stylepatch
