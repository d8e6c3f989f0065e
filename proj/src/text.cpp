#include "stylepatch/text.hpp"

#include <cstdint>

namespace stylepatch {
namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;  // bytes
};

// Malformed sequences decode byte-by-byte as U+FFFD so tokenization never fails.
CodePoint decode(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (pos + len > s.size()) return {0xFFFD, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
         cp == 0x3000 || cp == 0x00A0;
}

bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) || (cp >= 0x5B && cp <= 0x60) ||
           (cp >= 0x7B && cp <= 0x7E);
  }
  return (cp >= 0x2000 && cp <= 0x206F) ||  // general punctuation
         (cp >= 0x3001 && cp <= 0x303F) ||  // CJK symbols and punctuation
         (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
         (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65) ||
         cp == 0x00A1 || cp == 0x00AB || cp == 0x00BB || cp == 0x00BF;
}

bool is_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

bool is_word(char32_t cp) { return !is_space(cp) && !is_punct(cp); }

// Punctuation that stays inside a token when flanked by the right characters.
bool is_infix(char32_t prev, char32_t cur, char32_t next) {
  if (cur == '-' || cur == '\'') return is_word(prev) && is_word(next);
  if (cur == '.' || cur == ',') return is_digit(prev) && is_digit(next);
  return false;
}

}  // namespace

std::string fold(std::string_view token) {
  std::string out(token);
  for (auto& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

TokenSeq fold_all(std::span<const std::string> tokens) {
  TokenSeq out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(fold(t));
  return out;
}

bool is_punctuation_token(std::string_view token) {
  if (token.empty()) return false;
  for (std::size_t pos = 0; pos < token.size();) {
    const auto cp = decode(token, pos);
    if (!is_punct(cp.value)) return false;
    pos += cp.length;
  }
  return true;
}

Utterance tokenize(std::string_view text) {
  std::vector<CodePoint> cps;
  std::vector<std::size_t> offsets;
  for (std::size_t pos = 0; pos < text.size();) {
    const auto cp = decode(text, pos);
    cps.push_back(cp);
    offsets.push_back(pos);
    pos += cp.length;
  }

  TokenSeq tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i].value;
    const auto bytes = text.substr(offsets[i], cps[i].length);
    if (is_space(cp)) {
      flush();
      continue;
    }
    if (is_punct(cp)) {
      const char32_t prev = current.empty() ? U' ' : cps[i - 1].value;
      const char32_t next = i + 1 < cps.size() ? cps[i + 1].value : U' ';
      if (is_infix(prev, cp, next)) {
        current.append(bytes);
        continue;
      }
      flush();
      tokens.emplace_back(bytes);
      continue;
    }
    current.append(bytes);
  }
  flush();

  Utterance u;
  u.raw = std::string(text);
  u.folded = fold_all(tokens);
  u.tokens = std::move(tokens);
  return u;
}

Utterance from_tokens(TokenSeq tokens) {
  Utterance u;
  u.raw = join(tokens);
  u.folded = fold_all(tokens);
  u.tokens = std::move(tokens);
  return u;
}

std::string join(std::span<const std::string> tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(tokens[i]);
  }
  return out;
}

std::string render(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && !is_punctuation_token(tokens[i])) out.push_back(' ');
    out.append(tokens[i]);
  }
  return out;
}

}  // namespace stylepatch
