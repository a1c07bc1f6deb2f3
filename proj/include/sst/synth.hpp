#pragma once

// Seeded synthetic retweet corpora for fixtures and benchmarks. Only the
// raw 64-bit engine output is used (its sequence is fixed by the standard);
// all distributions are derived here so files are reproducible.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sst/corpus.hpp"
#include "sst/time.hpp"
#include "sst/util.hpp"

namespace sst::synth {

struct Options {
  std::size_t users = 1000;          // distinct original tweeters
  double exponent = 1.5;             // Zipf exponent of per-user tweet counts
  std::size_t max_tweets_per_user = 200;
  std::uint64_t seed = 42;
  double bot_fraction = 0.13;
  double spreader_fraction = 0.85;
  double missing_bot_score_fraction = 0.02;
  std::size_t max_records = 0;       // 0 = no cap
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  }

  bool chance(double p) { return uniform() < p; }

  // Box-Muller; one variate per call.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Pareto with scale xm and tail index alpha.
  double pareto(double xm, double alpha) { return xm * std::pow(1.0 - uniform(), -1.0 / alpha); }

  template <class Seq>
  const auto& pick(const Seq& seq) {
    return seq[static_cast<std::size_t>(below(seq.size()))];
  }

 private:
  std::mt19937_64 engine_;
};

/// Cumulative weights k^-exponent for k = 1..max; exponent 0 is uniform.
inline std::vector<double> zipf_cdf(std::size_t max, double exponent) {
  std::vector<double> cdf(max);
  double acc = 0;
  for (std::size_t k = 1; k <= max; ++k) {
    acc += std::pow(static_cast<double>(k), -exponent);
    cdf[k - 1] = acc;
  }
  for (double& c : cdf) c /= acc;
  return cdf;
}

inline std::size_t sample_zipf(Rng& rng, const std::vector<double>& cdf) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1) + 1;
}

namespace vocab {

inline constexpr std::array<std::string_view, 96> kWords{
    "people", "president", "media", "virus", "lockdown", "vaccine", "truth", "government",
    "police", "america", "democrats", "biden", "china", "masks", "doctors", "hospital",
    "freedom", "election", "news", "world", "country", "state", "million", "deaths",
    "cases", "testing", "numbers", "fake", "real", "plan", "control", "money",
    "children", "schools", "open", "close", "week", "today", "tomorrow", "everyone",
    "nobody", "know", "think", "believe", "watch", "share", "read", "listen",
    "wake", "stop", "fight", "stand", "protect", "rights", "citizens", "patriots",
    "black", "city", "streets", "riots", "protest", "leaders", "experts", "science",
    "data", "report", "study", "lies", "cover", "story", "video", "interview",
    "governor", "mayor", "senate", "congress", "vote", "ballot", "mail", "fraud",
    "economy", "jobs", "business", "workers", "families", "health", "hydroxychloroquine", "cure",
    "gates", "agenda", "elites", "globalists", "network", "towers", "portland", "antifa"};

inline constexpr std::array<std::string_view, 14> kGeneralTags{
    "covid19", "coronavirus", "covid", "breaking", "news", "foxnews", "blacklivesmatter",
    "blm", "georgefloyd", "fact", "lockdown", "stayhome", "usa", "health"};

inline constexpr std::array<std::string_view, 12> kPoliticalTags{
    "maga", "trump2020", "kag", "trump", "americafirst", "walkaway",
    "joebiden", "biden2020", "resist", "bluewave", "obamagate", "fakenews"};

inline constexpr std::array<std::string_view, 12> kConspiracyTags{
    "qanon", "wwg1wga", "plandemic", "coronahoax", "virushoax", "scamdemic",
    "qarmy", "thegreatawakening", "mog", "filmyourhospital", "deepstate", "5g"};

inline constexpr std::array<std::string_view, 10> kEmoji{
    "\xF0\x9F\x87\xBA\xF0\x9F\x87\xB8", "\xF0\x9F\x94\xA5", "\xF0\x9F\x98\xA1",
    "\xF0\x9F\x91\x87", "\xF0\x9F\x99\x8F", "\xE2\x9D\x97", "\xF0\x9F\x98\x82",
    "\xF0\x9F\x92\xAF", "\xE2\x9A\xA0", "\xF0\x9F\x91\x80"};

}  // namespace vocab

namespace detail {

inline std::string padded(char prefix, std::size_t v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, v);
  return buf;
}

struct Author {
  std::string id;
  bool bot = false;
  bool spreader = false;
  std::optional<double> bot_score;
  double popularity = 1;
  std::uint64_t followers = 0;
};

inline std::string make_text(Rng& rng, const Author& a, bool conspiratorial,
                             std::size_t mention_pool) {
  std::vector<std::string> parts;
  const std::size_t words = 6 + rng.below(13);
  for (std::size_t i = 0; i < words; ++i) parts.emplace_back(rng.pick(vocab::kWords));
  if (rng.chance(a.bot ? 0.10 : 0.02)) {
    std::string& w = parts[rng.below(parts.size())];
    for (char& c : w) c = static_cast<char>(c >= 'a' && c <= 'z' ? c - 32 : c);
  }
  if (rng.chance(0.5)) parts.front()[0] = static_cast<char>(parts.front()[0] - 32);
  const double end = rng.uniform();
  parts.back() += end < (a.bot ? 0.25 : 0.12) ? "!" : end < 0.2 ? "?" : end < 0.7 ? "." : "";
  if (rng.chance(a.bot ? 0.55 : 0.25))
    parts.insert(parts.begin() + static_cast<std::ptrdiff_t>(rng.below(parts.size())),
                 "@" + padded('n', rng.below(mention_pool), 5));
  const std::size_t tags = a.bot ? 1 + rng.below(4) : rng.below(3);
  for (std::size_t i = 0; i < tags; ++i) {
    const double u = rng.uniform();
    std::string_view tag = u < 0.45   ? rng.pick(vocab::kGeneralTags)
                           : u < 0.8 ? rng.pick(vocab::kPoliticalTags)
                                     : rng.pick(vocab::kConspiracyTags);
    parts.push_back("#" + std::string(tag));
  }
  if (conspiratorial && rng.chance(0.5))
    parts.push_back("#" + std::string(rng.pick(vocab::kConspiracyTags)));
  if (rng.chance(a.bot ? 0.3 : 0.08)) parts.emplace_back(rng.pick(vocab::kEmoji));
  if (rng.chance(0.4)) parts.push_back("https://t.co/" + padded('x', rng.below(1000000), 7));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ' ';
    out += parts[i];
  }
  return out;
}

inline Emotion pick_emotion(Rng& rng, bool conspiratorial) {
  const double u = rng.uniform();
  if (conspiratorial) {
    return u < 0.30 ? Emotion::Anger : u < 0.50 ? Emotion::Fear : u < 0.60 ? Emotion::Disgust
         : u < 0.68 ? Emotion::Surprise : u < 0.74 ? Emotion::Sadness : u < 0.80 ? Emotion::Joy
                    : Emotion::Neutral;
  }
  return u < 0.15 ? Emotion::Anger : u < 0.27 ? Emotion::Fear : u < 0.33 ? Emotion::Disgust
       : u < 0.41 ? Emotion::Surprise : u < 0.49 ? Emotion::Sadness : u < 0.60 ? Emotion::Joy
                  : Emotion::Neutral;
}

}  // namespace detail

/// Generates records sorted by (timestamp, record_id). With no record cap,
/// exactly `opts.users` distinct original users appear.
inline std::vector<RetweetRecord> generate(const Options& opts) {
  if (opts.users == 0) throw Error("synthetic corpus needs at least one user");
  Rng rng(opts.seed);
  const auto cdf = zipf_cdf(std::max<std::size_t>(opts.max_tweets_per_user, 1), opts.exponent);
  const Instant start = *parse_iso8601("2020-01-01T00:00:00Z");
  const std::int64_t span = 150LL * 86400;

  std::vector<detail::Author> authors(opts.users);
  for (std::size_t i = 0; i < opts.users; ++i) {
    auto& a = authors[i];
    a.id = detail::padded('u', i + 1, 6);
    a.bot = rng.chance(opts.bot_fraction);
    a.spreader = rng.chance(opts.spreader_fraction);
    const double score = a.bot ? 0.41 + 0.59 * rng.uniform() : 0.4 * rng.uniform();
    if (!rng.chance(opts.missing_bot_score_fraction)) a.bot_score = std::round(score * 1e4) / 1e4;
    a.popularity = std::exp(1.2 * rng.normal()) * (a.bot ? 0.5 : 1.0);
    a.followers = static_cast<std::uint64_t>(std::exp(5.0 + 2.0 * rng.normal()));
  }
  const std::size_t pool = std::max<std::size_t>(opts.users * 3, 50);
  std::vector<std::uint64_t> pool_followers(pool);
  for (auto& f : pool_followers) f = static_cast<std::uint64_t>(std::exp(5.0 + 2.0 * rng.normal()));

  std::vector<RetweetRecord> records;
  std::size_t serial = 0;
  for (const auto& a : authors) {
    const std::size_t tweets = sample_zipf(rng, cdf);
    const std::int64_t first = start.seconds + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(span / 2)));
    for (std::size_t t = 0; t < tweets; ++t) {
      const bool conspiratorial =
          a.spreader && (t == 0 || rng.chance(0.4));
      const double prob = conspiratorial ? 0.905 + 0.095 * rng.uniform() : 0.85 * rng.uniform();
      const auto when = first + static_cast<std::int64_t>(
                                    rng.below(static_cast<std::uint64_t>(start.seconds + span - first)));
      const auto retweets = static_cast<std::uint64_t>(
          std::min(1e6, a.popularity * rng.pareto(2.0, 1.5)));
      const auto replies = static_cast<std::uint64_t>(static_cast<double>(retweets) * 0.3 * rng.uniform());
      const auto likes = static_cast<std::uint64_t>(static_cast<double>(retweets) * (1.0 + 4.0 * rng.uniform()));
      const auto quotes = static_cast<std::uint64_t>(static_cast<double>(retweets) * 0.15 * rng.uniform());
      const std::string text = detail::make_text(rng, a, conspiratorial, opts.users);
      const bool media = rng.chance(a.bot ? 0.45 : 0.3);
      const double sentiment = std::clamp(0.45 * rng.normal() - (conspiratorial ? 0.3 : 0.05), -1.0, 1.0);
      const double toxicity = std::clamp(std::pow(rng.uniform(), a.bot ? 2.0 : 2.5) * (conspiratorial ? 1.0 : 0.8), 0.0, 1.0);
      const Emotion emotion = detail::pick_emotion(rng, conspiratorial);
      const std::size_t observed =
          1 + std::min<std::size_t>(60, static_cast<std::size_t>(static_cast<double>(retweets) * 0.05 + rng.uniform()));
      for (std::size_t k = 0; k < observed; ++k) {
        RetweetRecord r;
        r.record_id = detail::padded('r', ++serial, 9);
        std::uint64_t followers = 0;
        if (rng.chance(0.15) && opts.users > 1) {
          std::size_t other = static_cast<std::size_t>(rng.below(opts.users - 1));
          if (authors[other].id == a.id) other = opts.users - 1;
          r.retweeter_id = authors[other].id;
          followers = authors[other].followers;
        } else {
          const auto idx = static_cast<std::size_t>(rng.below(pool));
          r.retweeter_id = detail::padded('a', idx + 1, 7);
          followers = pool_followers[idx];
        }
        r.original_user_id = a.id;
        r.timestamp = Instant{when + static_cast<std::int64_t>(rng.below(3 * 86400))};
        r.text = text;
        const double seen = k == 0 ? 1.0 : 0.8 + 0.2 * rng.uniform();
        r.retweet_count = static_cast<std::uint64_t>(static_cast<double>(retweets) * seen);
        r.reply_count = static_cast<std::uint64_t>(static_cast<double>(replies) * seen);
        r.like_count = static_cast<std::uint64_t>(static_cast<double>(likes) * seen);
        r.quote_count = static_cast<std::uint64_t>(static_cast<double>(quotes) * seen);
        r.retweeter_followers = followers;
        r.has_media = media;
        r.conspiracy_prob = std::round(prob * 1e4) / 1e4;
        r.bot_score = a.bot_score;
        r.sentiment_compound = std::round(sentiment * 1e4) / 1e4;
        r.toxicity = std::round(toxicity * 1e4) / 1e4;
        r.emotion_label = emotion;
        records.push_back(std::move(r));
      }
    }
  }
  std::sort(records.begin(), records.end(), [](const RetweetRecord& x, const RetweetRecord& y) {
    if (x.timestamp != y.timestamp) return x.timestamp < y.timestamp;
    return x.record_id < y.record_id;
  });
  if (opts.max_records && records.size() > opts.max_records) records.resize(opts.max_records);
  return records;
}

}  // namespace sst::synth
