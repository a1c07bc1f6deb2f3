#pragma once

// Token-level conventions shared by text cleaning, feature extraction and
// hashtag analytics.

#include <string>
#include <string_view>
#include <vector>

#include "sst/utf8.hpp"
#include "sst/util.hpp"

namespace sst::text {

inline bool is_url_token(std::string_view tok) {
  return iequals_prefix(tok, "http://") || iequals_prefix(tok, "https://") ||
         iequals_prefix(tok, "www.");
}

/// "@" + 1..15 of [A-Za-z0-9_], optionally followed by trailing punctuation
/// only (e.g. "@foo:" or "@foo,").
inline bool is_mention_token(std::string_view tok) {
  if (tok.size() < 2 || tok[0] != '@') return false;
  std::size_t i = 1;
  while (i < tok.size() && is_word_char(tok[i])) ++i;
  const std::size_t name_len = i - 1;
  if (name_len < 1 || name_len > 15) return false;
  for (; i < tok.size(); ++i) {
    const auto c = static_cast<unsigned char>(tok[i]);
    if (c >= 0x80 || is_word_char(tok[i]) || tok[i] == '@') return false;
  }
  return true;
}

// Characters allowed in a hashtag body: ASCII word characters plus
// non-ASCII letters (anything outside punctuation/symbol/emoji blocks).
inline bool is_hashtag_code_point(char32_t cp) {
  if (cp < 0x80) return is_word_char(static_cast<char>(cp));
  if (cp == utf8::kReplacement || utf8::is_emoji(cp)) return false;
  if (cp <= 0xBF) return false;                      // Latin-1 punctuation
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;    // punctuation, symbols
  if (cp >= 0x3000 && cp <= 0x303F) return false;    // CJK punctuation
  if (cp >= 0xFE00 && cp <= 0xFE0F) return false;    // variation selectors
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;    // fullwidth punctuation
  return true;
}

// Length in bytes of the hashtag body starting at s[pos] (0 if none).
inline std::size_t hashtag_body_length(std::string_view s, std::size_t pos) {
  std::size_t i = pos;
  while (i < s.size()) {
    std::size_t j = i;
    const char32_t cp = utf8::next(s, j);
    if (!is_hashtag_code_point(cp)) break;
    i = j;
  }
  return i - pos;
}

inline bool is_hashtag_token(std::string_view tok) {
  return tok.size() >= 2 && tok[0] == '#' && hashtag_body_length(tok, 1) > 0;
}

/// Hashtag occurrences in order of appearance, "#"-stripped and ASCII
/// case-folded. URL tokens are skipped; a '#' only opens a hashtag at token
/// start or after a non-word character.
inline std::vector<std::string> extract_hashtags(std::string_view text) {
  std::vector<std::string> out;
  for (auto tok : split_whitespace(text)) {
    if (is_url_token(tok)) continue;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (tok[i] != '#') continue;
      if (i > 0 && (is_word_char(tok[i - 1]) || tok[i - 1] == '&')) continue;
      const std::size_t len = hashtag_body_length(tok, i + 1);
      if (len == 0) continue;
      out.push_back(to_lower_ascii(tok.substr(i + 1, len)));
      i += len;
    }
  }
  return out;
}

/// Strips a leading "#" and case-folds, for lexicon lookups.
inline std::string normalize_hashtag(std::string_view tag) {
  tag = trim(tag);
  if (!tag.empty() && tag.front() == '#') tag.remove_prefix(1);
  return to_lower_ascii(tag);
}

}  // namespace sst::text
