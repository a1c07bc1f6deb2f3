#pragma once

// Canonical retweet data model, record-stream ingestion and the
// preprocessing filters (completeness, dedup, conspiracy).

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sst/csv.hpp"
#include "sst/text.hpp"
#include "sst/time.hpp"
#include "sst/utf8.hpp"
#include "sst/util.hpp"

namespace sst {

enum class Emotion : std::uint8_t {
  Anger,
  Disgust,
  Fear,
  Joy,
  Sadness,
  Surprise,
  Neutral
};

inline constexpr std::array<Emotion, 7> kAllEmotions{
    Emotion::Anger, Emotion::Disgust,  Emotion::Fear,   Emotion::Joy,
    Emotion::Sadness, Emotion::Surprise, Emotion::Neutral};

inline std::string_view to_string(Emotion e) {
  switch (e) {
    case Emotion::Anger: return "anger";
    case Emotion::Disgust: return "disgust";
    case Emotion::Fear: return "fear";
    case Emotion::Joy: return "joy";
    case Emotion::Sadness: return "sadness";
    case Emotion::Surprise: return "surprise";
    case Emotion::Neutral: return "neutral";
  }
  return "neutral";
}

inline std::optional<Emotion> parse_emotion(std::string_view s) {
  const std::string lower = to_lower_ascii(trim(s));
  for (Emotion e : kAllEmotions)
    if (lower == to_string(e)) return e;
  return std::nullopt;
}

/// One retweet event: `retweeter_id` retweeted a tweet authored by
/// `original_user_id`. Engagement counts describe the original tweet.
struct RetweetRecord {
  std::string record_id;
  std::string retweeter_id;
  std::string original_user_id;
  Instant timestamp;
  std::string text;
  std::uint64_t retweet_count = 0;
  std::uint64_t reply_count = 0;
  std::uint64_t like_count = 0;
  std::uint64_t quote_count = 0;
  std::uint64_t retweeter_followers = 0;
  bool has_media = false;
  std::optional<double> conspiracy_prob;
  std::optional<double> bot_score;  // of the original author
  std::optional<double> sentiment_compound;
  std::optional<double> toxicity;
  std::optional<Emotion> emotion_label;

  bool operator==(const RetweetRecord&) const = default;
};

struct UserProfile {
  std::string user_id;
  std::uint64_t follower_count = 0;
  std::optional<double> bot_score;
  Instant first_tweet_time;
  std::uint64_t conspiracy_tweet_count = 0;

  bool operator==(const UserProfile&) const = default;
};

struct Corpus {
  std::vector<RetweetRecord> records;
  std::map<std::string, UserProfile> users;
  Instant reference_time;
  double conspiracy_threshold = 0.9;  // threshold behind conspiracy_tweet_count

  bool operator==(const Corpus&) const = default;
};

/// Identity of an authored tweet reconstructed from retweet records.
using TweetKey = std::pair<std::string, std::string>;  // (author, text)

inline TweetKey tweet_key(const RetweetRecord& r) {
  return {r.original_user_id, r.text};
}

struct IngestOptions {
  double conspiracy_threshold = 0.9;
};

/// Outcome tallies; every input record lands in exactly one bucket.
struct IngestStats {
  std::size_t records_read = 0;
  std::size_t malformed = 0;
  std::size_t non_retweet = 0;
  std::size_t bad_timestamp = 0;
  std::size_t missing_engagement = 0;
  std::size_t duplicates = 0;
  std::size_t retained = 0;
  std::vector<std::string> diagnostics;

  std::size_t accounted() const {
    return malformed + non_retweet + bad_timestamp + missing_engagement +
           duplicates + retained;
  }
};

struct IngestResult {
  Corpus corpus;
  IngestStats stats;
};

namespace detail {

struct MalformedField : Error {
  using Error::Error;
};

using Json = nlohmann::json;

inline const Json* field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  if (it->is_string() && trim(it->get_ref<const std::string&>()).empty())
    return nullptr;
  return &*it;
}

inline std::optional<std::string> get_id(const Json& obj, const char* key) {
  const Json* v = field(obj, key);
  if (!v) return std::nullopt;
  if (v->is_string()) return std::string(trim(v->get_ref<const std::string&>()));
  if (v->is_number_integer()) return v->dump();
  throw MalformedField(std::string("field '") + key + "' is not an identifier");
}

inline std::optional<std::uint64_t> get_count(const Json& obj, const char* key) {
  const Json* v = field(obj, key);
  if (!v) return std::nullopt;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer()) {
    if (v->get<std::int64_t>() < 0)
      throw MalformedField(std::string("negative count in '") + key + "'");
    return static_cast<std::uint64_t>(v->get<std::int64_t>());
  }
  if (v->is_number_float()) {
    const double d = v->get<double>();
    if (!(d >= 0) || d != std::floor(d) || d > 1.8e19)
      throw MalformedField(std::string("non-integral count in '") + key + "'");
    return static_cast<std::uint64_t>(d);
  }
  if (v->is_string()) {
    const auto s = trim(v->get_ref<const std::string&>());
    std::uint64_t out = 0;
    for (char c : s) {
      if (!is_ascii_digit(c))
        throw MalformedField(std::string("non-integral count in '") + key + "'");
      out = out * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return out;
  }
  throw MalformedField(std::string("field '") + key + "' is not a count");
}

inline std::optional<double> get_real(const Json& obj, const char* key, double lo,
                                      double hi) {
  const Json* v = field(obj, key);
  if (!v) return std::nullopt;
  double d = 0;
  if (v->is_number()) {
    d = v->get<double>();
  } else if (v->is_string()) {
    const std::string s(trim(v->get_ref<const std::string&>()));
    std::size_t used = 0;
    try {
      d = std::stod(s, &used);
    } catch (const std::exception&) {
      throw MalformedField(std::string("field '") + key + "' is not a number");
    }
    if (used != s.size())
      throw MalformedField(std::string("field '") + key + "' is not a number");
  } else {
    throw MalformedField(std::string("field '") + key + "' is not a number");
  }
  if (!(d >= lo && d <= hi))
    throw MalformedField(std::string("field '") + key + "' out of range");
  return d;
}

inline bool get_bool(const Json& obj, const char* key) {
  const Json* v = field(obj, key);
  if (!v) return false;
  if (v->is_boolean()) return v->get<bool>();
  if (v->is_number_integer()) return v->get<std::int64_t>() != 0;
  if (v->is_string()) {
    const std::string s = to_lower_ascii(trim(v->get_ref<const std::string&>()));
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
  }
  throw MalformedField(std::string("field '") + key + "' is not a boolean");
}

enum class Outcome { Ok, Malformed, NonRetweet, BadTimestamp, MissingEngagement };

inline std::string synthesized_record_id(const RetweetRecord& r) {
  std::string key = r.retweeter_id;
  key += '\x1f';
  key += r.original_user_id;
  key += '\x1f';
  key += std::to_string(r.timestamp.seconds);
  key += '\x1f';
  key += to_hex(fnv1a64(r.text));
  return "h" + to_hex(fnv1a64(key));
}

inline Outcome parse_record(const Json& obj, std::size_t line, RetweetRecord& out,
                            std::vector<std::string>& diagnostics) {
  auto diag = [&](const std::string& msg) {
    diagnostics.push_back("line " + std::to_string(line) + ": " + msg);
  };
  if (!obj.is_object()) {
    diag("record is not an object");
    return Outcome::Malformed;
  }
  try {
    RetweetRecord r;
    const auto original = get_id(obj, "original_user_id");
    if (!original) {
      diag("missing original_user_id");
      return Outcome::Malformed;
    }
    r.original_user_id = *original;
    const auto retweeter = get_id(obj, "retweeter_id");
    if (!retweeter) return Outcome::NonRetweet;
    r.retweeter_id = *retweeter;

    const Json* ts = field(obj, "timestamp");
    std::optional<Instant> when;
    if (ts && ts->is_string()) when = parse_iso8601(trim(ts->get_ref<const std::string&>()));
    if (!when || *when < kEarliestInstant) {
      diag("unparseable timestamp '" + (ts ? (ts->is_string() ? ts->get<std::string>() : ts->dump()) : std::string()) + "'");
      return Outcome::BadTimestamp;
    }
    r.timestamp = *when;

    if (const Json* t = field(obj, "text")) {
      if (!t->is_string()) throw MalformedField("field 'text' is not a string");
      r.text = t->get<std::string>();
    } else if (auto it = obj.find("text"); it != obj.end() && it->is_string()) {
      r.text = it->get<std::string>();  // whitespace-only text is kept verbatim
    }
    if (!utf8::is_valid(r.text)) throw MalformedField("text is not valid UTF-8");

    const auto rt = get_count(obj, "retweet_count");
    const auto rp = get_count(obj, "reply_count");
    const auto lk = get_count(obj, "like_count");
    const auto qt = get_count(obj, "quote_count");
    r.retweeter_followers = get_count(obj, "retweeter_followers").value_or(0);
    r.has_media = get_bool(obj, "has_media");
    r.conspiracy_prob = get_real(obj, "conspiracy_prob", 0.0, 1.0);
    r.bot_score = get_real(obj, "bot_score", 0.0, 1.0);
    r.sentiment_compound = get_real(obj, "sentiment_compound", -1.0, 1.0);
    r.toxicity = get_real(obj, "toxicity", 0.0, 1.0);
    if (const Json* e = field(obj, "emotion_label")) {
      if (!e->is_string()) throw MalformedField("field 'emotion_label' is not a string");
      r.emotion_label = parse_emotion(e->get_ref<const std::string&>());
      if (!r.emotion_label) throw MalformedField("unknown emotion_label");
    }
    if (!rt || !rp || !lk || !qt) return Outcome::MissingEngagement;
    r.retweet_count = *rt;
    r.reply_count = *rp;
    r.like_count = *lk;
    r.quote_count = *qt;

    const auto id = get_id(obj, "record_id");
    r.record_id = id ? *id : synthesized_record_id(r);
    out = std::move(r);
    return Outcome::Ok;
  } catch (const MalformedField& e) {
    diag(e.what());
    return Outcome::Malformed;
  }
}

inline std::uint64_t count_conspiracy_tweets(const std::vector<const RetweetRecord*>& authored,
                                             double threshold) {
  std::set<std::string_view> tweets;
  for (const RetweetRecord* r : authored)
    if (r->conspiracy_prob && *r->conspiracy_prob > threshold) tweets.insert(r->text);
  return tweets.size();
}

}  // namespace detail

/// Derives user profiles and the reference time for an already-filtered
/// record sequence. Throws on an empty sequence.
inline Corpus build_corpus(std::vector<RetweetRecord> records,
                           double conspiracy_threshold = 0.9) {
  if (records.empty()) throw Error("empty corpus");
  Corpus c;
  c.conspiracy_threshold = conspiracy_threshold;
  c.records = std::move(records);
  c.reference_time = c.records.front().timestamp;
  std::map<std::string, std::vector<const RetweetRecord*>> authored;
  auto touch = [&](const std::string& id, Instant t) -> UserProfile& {
    auto [it, inserted] = c.users.try_emplace(id);
    if (inserted) {
      it->second.user_id = id;
      it->second.first_tweet_time = t;
    } else if (t < it->second.first_tweet_time) {
      it->second.first_tweet_time = t;
    }
    return it->second;
  };
  for (const auto& r : c.records) {
    c.reference_time = std::max(c.reference_time, r.timestamp);
    UserProfile& author = touch(r.original_user_id, r.timestamp);
    if (!author.bot_score && r.bot_score) author.bot_score = r.bot_score;
    UserProfile& retweeter = touch(r.retweeter_id, r.timestamp);
    retweeter.follower_count = std::max(retweeter.follower_count, r.retweeter_followers);
    authored[r.original_user_id].push_back(&r);
  }
  for (auto& [id, recs] : authored)
    c.users[id].conspiracy_tweet_count =
        detail::count_conspiracy_tweets(recs, conspiracy_threshold);
  return c;
}

/// Single-pass fold over a newline-delimited JSON or CSV record stream:
/// completeness filter, then dedup by record_id. Malformed lines are
/// counted. Throws "empty corpus" when nothing survives.
inline IngestResult ingest(std::istream& in, const IngestOptions& opts = {}) {
  IngestStats stats;
  std::vector<RetweetRecord> kept;
  std::unordered_set<std::string> seen;

  auto accept = [&](const detail::Json& obj, std::size_t line) {
    ++stats.records_read;
    RetweetRecord r;
    switch (detail::parse_record(obj, line, r, stats.diagnostics)) {
      case detail::Outcome::Malformed: ++stats.malformed; return;
      case detail::Outcome::NonRetweet: ++stats.non_retweet; return;
      case detail::Outcome::BadTimestamp: ++stats.bad_timestamp; return;
      case detail::Outcome::MissingEngagement: ++stats.missing_engagement; return;
      case detail::Outcome::Ok: break;
    }
    if (!seen.insert(r.record_id).second) {
      ++stats.duplicates;
      return;
    }
    ++stats.retained;
    kept.push_back(std::move(r));
  };

  // Sniff: a leading '{' means JSON lines, anything else a CSV header.
  in >> std::ws;
  const int first = in.peek();
  if (first == '{') {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      auto obj = detail::Json::parse(line, nullptr, false);
      if (obj.is_discarded()) {
        ++stats.records_read;
        ++stats.malformed;
        stats.diagnostics.push_back("line " + std::to_string(lineno) + ": invalid JSON");
        continue;
      }
      accept(obj, lineno);
    }
  } else if (first != std::char_traits<char>::eof()) {
    csv::Reader reader(in);
    std::vector<std::string> header;
    reader.read(header);
    for (auto& h : header) h = std::string(trim(h));
    if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
    std::vector<std::string> row;
    while (reader.read(row)) {
      if (row.size() == 1 && trim(row[0]).empty()) continue;
      if (row.size() != header.size()) {
        ++stats.records_read;
        ++stats.malformed;
        stats.diagnostics.push_back("line " + std::to_string(reader.line()) +
                                    ": expected " + std::to_string(header.size()) +
                                    " fields, got " + std::to_string(row.size()));
        continue;
      }
      detail::Json obj = detail::Json::object();
      for (std::size_t i = 0; i < header.size(); ++i)
        if (!row[i].empty()) obj[header[i]] = row[i];
      accept(obj, reader.line());
    }
  }
  if (kept.empty()) throw Error("empty corpus");
  return {build_corpus(std::move(kept), opts.conspiracy_threshold), std::move(stats)};
}

inline IngestResult ingest_file(const std::string& path, const IngestOptions& opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file '" + path + "'");
  return ingest(in, opts);
}

/// Keeps every record authored by a user with at least one record whose
/// conspiracy probability strictly exceeds `threshold`.
inline Corpus filter_conspiracy(const Corpus& corpus, double threshold = 0.9) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw Error("conspiracy threshold must lie in [0,1]");
  std::unordered_set<std::string_view> endorsing;
  bool any_scored = false;
  for (const auto& r : corpus.records) {
    if (!r.conspiracy_prob) continue;
    any_scored = true;
    if (*r.conspiracy_prob > threshold) endorsing.insert(r.original_user_id);
  }
  if (!any_scored) throw Error("no classifier scores present");
  std::vector<RetweetRecord> kept;
  for (const auto& r : corpus.records)
    if (endorsing.count(r.original_user_id)) kept.push_back(r);
  if (kept.empty()) throw Error("empty corpus");

  Corpus out = build_corpus(std::move(kept), threshold);
  // Profile attributes observed before filtering stay authoritative.
  for (auto& [id, profile] : out.users) {
    const auto& before = corpus.users.at(id);
    profile.follower_count = before.follower_count;
    profile.bot_score = before.bot_score;
    profile.first_tweet_time = before.first_tweet_time;
  }
  return out;
}

/// Removes URLs, a leading retweet tag ("RT @name:") and @-mentions; keeps
/// hashtags; collapses whitespace.
inline std::string clean_text(std::string_view text) {
  auto tokens = split_whitespace(text);
  std::size_t start = 0;
  if (tokens.size() >= 2 && tokens[0].size() == 2 && iequals_prefix(tokens[0], "rt") &&
      text::is_mention_token(tokens[1]))
    start = 2;
  std::vector<std::string_view> kept;
  for (std::size_t i = start; i < tokens.size(); ++i) {
    if (text::is_url_token(tokens[i]) || text::is_mention_token(tokens[i])) continue;
    if (tokens[i] == ":" && i == start && start == 2) continue;
    kept.push_back(tokens[i]);
  }
  return join(kept, " ");
}

inline nlohmann::ordered_json to_json(const RetweetRecord& r) {
  nlohmann::ordered_json j;
  j["record_id"] = r.record_id;
  j["retweeter_id"] = r.retweeter_id;
  j["original_user_id"] = r.original_user_id;
  j["timestamp"] = format_iso8601(r.timestamp);
  j["text"] = r.text;
  j["retweet_count"] = r.retweet_count;
  j["reply_count"] = r.reply_count;
  j["like_count"] = r.like_count;
  j["quote_count"] = r.quote_count;
  j["retweeter_followers"] = r.retweeter_followers;
  j["has_media"] = r.has_media;
  if (r.conspiracy_prob) j["conspiracy_prob"] = *r.conspiracy_prob;
  if (r.bot_score) j["bot_score"] = *r.bot_score;
  if (r.sentiment_compound) j["sentiment_compound"] = *r.sentiment_compound;
  if (r.toxicity) j["toxicity"] = *r.toxicity;
  if (r.emotion_label) j["emotion_label"] = std::string(to_string(*r.emotion_label));
  return j;
}

inline void write_records(std::ostream& out, const std::vector<RetweetRecord>& records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

/// Canonical newline-delimited serialization with a fixed field order.
inline void write_corpus(std::ostream& out, const Corpus& corpus) {
  write_records(out, corpus.records);
}

}  // namespace sst
