#pragma once

// Per-tweet linguistic measurements: readability, binary content features,
// lengths, word frequencies and the sentiment labeling rule.

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sst/corpus.hpp"
#include "sst/text.hpp"
#include "sst/utf8.hpp"
#include "sst/util.hpp"

namespace sst {

inline constexpr double kReadabilityOutlierGrade = 25.0;

struct ReadabilityScore {
  double grade = 0;
  bool excluded = false;  // grade above the outlier cut
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
};

struct FeatureVector {
  bool has_mention = false;
  bool has_hashtag = false;
  bool has_media = false;
  bool has_emoji = false;
  bool has_exclamation = false;
  bool has_question = false;
  bool has_all_caps = false;
  std::size_t raw_length = 0;       // code points without URLs, mentions, hashtags
  std::size_t unedited_length = 0;  // code points of the original text

  bool operator==(const FeatureVector&) const = default;
};

inline constexpr std::array<std::string_view, 7> kBinaryFeatureNames{
    "has_mention", "has_hashtag",  "has_media",   "has_emoji",
    "has_exclamation", "has_question", "has_all_caps"};

inline std::array<bool, 7> binary_features(const FeatureVector& f) {
  return {f.has_mention,     f.has_hashtag,  f.has_media,   f.has_emoji,
          f.has_exclamation, f.has_question, f.has_all_caps};
}

namespace detail {

// Word core of a token: edges trimmed to letter/digit code points.
inline std::string_view word_core(std::string_view tok) {
  std::size_t b = 0;
  while (b < tok.size()) {
    std::size_t j = b;
    if (text::is_hashtag_code_point(utf8::next(tok, j)) && tok[b] != '_') break;
    b = j;
  }
  std::size_t e = tok.size();
  while (e > b) {
    std::size_t k = e - 1;
    while (k > b && (static_cast<unsigned char>(tok[k]) & 0xC0) == 0x80) --k;
    std::size_t j = k;
    if (text::is_hashtag_code_point(utf8::next(tok, j)) && tok[k] != '_') break;
    e = k;
  }
  return tok.substr(b, e - b);
}

inline bool has_letter(std::string_view w) {
  for (std::size_t i = 0; i < w.size();) {
    const char32_t cp = utf8::next(w, i);
    if (cp < 0x80 ? is_ascii_alpha(static_cast<char>(cp)) : text::is_hashtag_code_point(cp))
      return true;
  }
  return false;
}

inline bool is_sentence_mark(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace detail

/// Vowel-group syllable estimate: runs of [aeiouy] count once, a trailing
/// silent "e" is dropped unless the word ends in "le", minimum one.
inline std::size_t count_syllables(std::string_view word) {
  std::string w;
  for (char c : word)
    if (is_ascii_alpha(c)) w.push_back(ascii_lower(c));
  auto vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  std::size_t n = 0;
  bool prev = false;
  for (char c : w) {
    const bool v = vowel(c);
    if (v && !prev) ++n;
    prev = v;
  }
  if (w.size() >= 2 && w.back() == 'e' && w[w.size() - 2] != 'l' && n > 1) --n;
  return std::max<std::size_t>(n, 1);
}

/// Words and sentence count of cleaned text. A sentence ends at a run of
/// . ! ? followed by whitespace or end of text; trailing words without a
/// terminator form a final sentence.
inline std::pair<std::vector<std::string_view>, std::size_t> words_and_sentences(
    std::string_view cleaned) {
  std::vector<std::string_view> words;
  std::size_t sentences = 0;
  bool words_since_boundary = false;
  for (auto tok : split_whitespace(cleaned)) {
    const auto core = detail::word_core(tok);
    if (!core.empty() && (detail::has_letter(core) ||
                          std::any_of(core.begin(), core.end(), is_ascii_digit))) {
      words.push_back(core);
      words_since_boundary = true;
    }
    if (detail::is_sentence_mark(tok.back()) && words_since_boundary) {
      ++sentences;
      words_since_boundary = false;
    }
  }
  if (words_since_boundary) ++sentences;
  return {std::move(words), std::max<std::size_t>(sentences, 1)};
}

/// Flesch-Kincaid grade level of already-cleaned text.
inline ReadabilityScore flesch_kincaid(std::string_view cleaned_text) {
  auto [words, sentences] = words_and_sentences(cleaned_text);
  if (words.empty()) throw Error("unreadable text");
  std::size_t syllables = 0;
  for (auto w : words) syllables += count_syllables(w);
  const double nw = static_cast<double>(words.size());
  const double grade = 0.39 * (nw / static_cast<double>(sentences)) +
                       11.8 * (static_cast<double>(syllables) / nw) - 15.59;
  return {grade, grade > kReadabilityOutlierGrade, words.size(), sentences, syllables};
}

inline FeatureVector extract_features(const RetweetRecord& record) {
  FeatureVector f;
  f.has_media = record.has_media;
  f.unedited_length = utf8::length(record.text);
  std::vector<std::string_view> plain;
  for (auto tok : split_whitespace(record.text)) {
    if (text::is_url_token(tok)) continue;
    if (text::is_mention_token(tok)) {
      f.has_mention = true;
      continue;
    }
    if (text::is_hashtag_token(tok)) {
      f.has_hashtag = true;
      continue;
    }
    plain.push_back(tok);
    std::size_t b = 0;
    std::size_t e = tok.size();
    while (b < e && !is_ascii_alpha(tok[b])) ++b;
    while (e > b && !is_ascii_alpha(tok[e - 1])) --e;
    const auto core = tok.substr(b, e - b);
    if (core.size() >= 2 &&
        std::all_of(core.begin(), core.end(), [](char c) { return c >= 'A' && c <= 'Z'; }))
      f.has_all_caps = true;
  }
  for (std::size_t i = 0; i < record.text.size();) {
    const char32_t cp = utf8::next(record.text, i);
    if (utf8::is_emoji(cp)) f.has_emoji = true;
    if (cp == '!' || cp == 0xFF01) f.has_exclamation = true;
    if (cp == '?' || cp == 0xFF1F) f.has_question = true;
  }
  f.raw_length = utf8::length(join(plain, " "));
  return f;
}

enum class SentimentLabel : std::uint8_t { Positive, Neutral, Negative };

inline constexpr std::array<SentimentLabel, 3> kAllSentimentLabels{
    SentimentLabel::Positive, SentimentLabel::Neutral, SentimentLabel::Negative};

inline std::string_view to_string(SentimentLabel s) {
  switch (s) {
    case SentimentLabel::Positive: return "positive";
    case SentimentLabel::Neutral: return "neutral";
    case SentimentLabel::Negative: return "negative";
  }
  return "";
}

inline SentimentLabel sentiment_label(double compound) {
  if (compound > 0.001) return SentimentLabel::Positive;
  if (compound < -0.001) return SentimentLabel::Negative;
  return SentimentLabel::Neutral;
}

// Default English filler-word list (192 entries).
inline constexpr std::array<std::string_view, 192> kDefaultStopwords{
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an",
    "and", "any", "are", "aren't", "as", "at", "be", "because", "been", "before",
    "being", "below", "between", "both", "but", "by", "can", "can't", "cannot", "com",
    "could", "couldn't", "did", "didn't", "do", "does", "doesn't", "doing", "don't", "down",
    "during", "each", "else", "ever", "few", "for", "from", "further", "get", "had",
    "hadn't", "has", "hasn't", "have", "haven't", "having", "he", "he'd", "he'll", "he's",
    "hence", "her", "here", "here's", "hers", "herself", "him", "himself", "his", "how",
    "how's", "however", "http", "i", "i'd", "i'll", "i'm", "i've", "if", "in",
    "into", "is", "isn't", "it", "it's", "its", "itself", "just", "k", "let's",
    "like", "me", "more", "most", "mustn't", "my", "myself", "no", "nor", "not",
    "of", "off", "on", "once", "only", "or", "other", "otherwise", "ought", "our",
    "ours", "ourselves", "out", "over", "own", "r", "same", "shall", "shan't", "she",
    "she'd", "she'll", "she's", "should", "shouldn't", "since", "so", "some", "such", "than",
    "that", "that's", "the", "their", "theirs", "them", "themselves", "then", "there", "there's",
    "therefore", "these", "they", "they'd", "they'll", "they're", "they've", "this", "those", "through",
    "to", "too", "under", "until", "up", "very", "was", "wasn't", "we", "we'd",
    "we'll", "we're", "we've", "were", "weren't", "what", "what's", "when", "when's", "where",
    "where's", "which", "while", "who", "who's", "whom", "why", "why's", "with", "won't",
    "would", "wouldn't", "www", "you", "you'd", "you'll", "you're", "you've", "your", "yours",
    "yourself", "yourselves"};

using StopwordSet = std::set<std::string, std::less<>>;

inline StopwordSet default_stopwords() {
  return {kDefaultStopwords.begin(), kDefaultStopwords.end()};
}

/// One word per line; blank lines ignored; case-folded.
inline StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file '" + path + "'");
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    const auto w = trim(line);
    if (!w.empty()) out.insert(to_lower_ascii(w));
  }
  return out;
}

struct WordFrequencyOptions {
  bool include_hashtags = false;  // count "#tag" as "tag"
};

/// Case-folded word tokens of cleaned text with curly apostrophes unified.
inline std::vector<std::string> word_tokens(std::string_view cleaned,
                                            const WordFrequencyOptions& opts = {}) {
  std::vector<std::string> out;
  for (auto tok : split_whitespace(cleaned)) {
    std::string t;
    for (std::size_t i = 0; i < tok.size();) {
      const std::size_t b = i;
      const char32_t cp = utf8::next(tok, i);
      if (cp == 0x2019) t.push_back('\'');
      else t.append(tok.substr(b, i - b));
    }
    if (text::is_hashtag_token(t)) {
      if (!opts.include_hashtags) continue;
      t.erase(0, 1);
    }
    const auto core = detail::word_core(t);
    if (core.empty() || !detail::has_letter(core)) continue;
    out.push_back(to_lower_ascii(core));
  }
  return out;
}

using WordCount = std::pair<std::string, std::uint64_t>;

/// Ranked (word, count): count descending, word ascending on ties.
inline std::vector<WordCount> word_frequency(const std::vector<std::string>& texts,
                                             const StopwordSet& stopwords,
                                             const WordFrequencyOptions& opts = {}) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& t : texts)
    for (auto& w : word_tokens(t, opts))
      if (!stopwords.count(w)) ++counts[std::move(w)];
  std::vector<WordCount> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace sst
