#pragma once

// The 27 influence metrics: four engagement families over six engagement
// kinds, plus the H-, M- and G-indices.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sst/corpus.hpp"
#include "sst/csv.hpp"
#include "sst/util.hpp"

namespace sst {

enum class EngagementKind : std::uint8_t {
  Retweets,
  Replies,
  Likes,
  Quotes,
  EngagementScore,
  NormalizedEngagementScore
};

inline constexpr std::array<EngagementKind, 6> kAllEngagementKinds{
    EngagementKind::Retweets,        EngagementKind::Replies,
    EngagementKind::Likes,           EngagementKind::Quotes,
    EngagementKind::EngagementScore, EngagementKind::NormalizedEngagementScore};

enum class MetricFamily : std::uint8_t {
  Aggregate,
  PerTweet,
  FollowerWeightedAggregate,
  FollowerWeightedPerTweet
};

inline constexpr std::array<MetricFamily, 4> kAllFamilies{
    MetricFamily::Aggregate, MetricFamily::PerTweet,
    MetricFamily::FollowerWeightedAggregate, MetricFamily::FollowerWeightedPerTweet};

/// Dense id: family * 6 + kind for the 24 family metrics, then the three
/// scholarly indices.
enum class MetricId : std::uint8_t {};

inline constexpr std::size_t kMetricCount = 27;
inline constexpr MetricId kHIndex{24};
inline constexpr MetricId kMIndex{25};
inline constexpr MetricId kGIndex{26};

inline constexpr MetricId family_metric_id(MetricFamily f, EngagementKind k) {
  return MetricId(static_cast<std::uint8_t>(f) * 6 + static_cast<std::uint8_t>(k));
}

inline constexpr std::array<MetricId, kMetricCount> all_metric_ids() {
  std::array<MetricId, kMetricCount> ids{};
  for (std::size_t i = 0; i < kMetricCount; ++i) ids[i] = MetricId(i);
  return ids;
}

inline constexpr auto kAllMetrics = all_metric_ids();

inline std::string_view to_string(EngagementKind k) {
  switch (k) {
    case EngagementKind::Retweets: return "retweets";
    case EngagementKind::Replies: return "replies";
    case EngagementKind::Likes: return "likes";
    case EngagementKind::Quotes: return "quotes";
    case EngagementKind::EngagementScore: return "engagement_score";
    case EngagementKind::NormalizedEngagementScore: return "normalized_engagement_score";
  }
  return "";
}

inline std::string_view to_string(MetricFamily f) {
  switch (f) {
    case MetricFamily::Aggregate: return "aggregate";
    case MetricFamily::PerTweet: return "per_tweet";
    case MetricFamily::FollowerWeightedAggregate: return "follower_weighted_aggregate";
    case MetricFamily::FollowerWeightedPerTweet: return "follower_weighted_per_tweet";
  }
  return "";
}

inline std::string to_string(MetricId id) {
  const auto i = static_cast<std::uint8_t>(id);
  if (id == kHIndex) return "h_index";
  if (id == kMIndex) return "m_index";
  if (id == kGIndex) return "g_index";
  return std::string(to_string(static_cast<MetricFamily>(i / 6))) + "_" +
         std::string(to_string(static_cast<EngagementKind>(i % 6)));
}

/// Accepts the snake_case id ("h_index", "aggregate_likes") or the
/// CamelCase spelling ("HIndex", "AggregateLikes").
inline std::optional<MetricId> parse_metric_id(std::string_view s) {
  std::string norm;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c >= 'A' && c <= 'Z') {
      if (i > 0 && s[i - 1] != '_' && !(s[i - 1] >= 'A' && s[i - 1] <= 'Z')) norm += '_';
      norm += ascii_lower(c);
    } else {
      norm += c;
    }
  }
  if (norm == "hindex") norm = "h_index";
  if (norm == "mindex") norm = "m_index";
  if (norm == "gindex") norm = "g_index";
  for (MetricId id : kAllMetrics)
    if (to_string(id) == norm) return id;
  return std::nullopt;
}

/// Per-user scores for one metric and the derived deterministic ranking
/// (score descending, user_id ascending on ties).
struct MetricTable {
  std::string metric;
  std::map<std::string, double> scores;
  std::vector<std::string> ranking;

  bool operator==(const MetricTable&) const = default;
};

inline MetricTable make_table(std::string metric, std::map<std::string, double> scores) {
  MetricTable t{std::move(metric), std::move(scores), {}};
  std::vector<std::pair<const std::string*, double>> order;
  order.reserve(t.scores.size());
  for (const auto& [user, score] : t.scores) order.emplace_back(&user, score);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return *a.first < *b.first;
  });
  t.ranking.reserve(order.size());
  for (const auto& [user, score] : order) t.ranking.push_back(*user);
  return t;
}

inline std::uint64_t engagement_score(std::uint64_t retweets, std::uint64_t replies,
                                      std::uint64_t likes, std::uint64_t quotes) {
  return retweets + replies + likes + quotes;
}

/// Min-max normalized base engagements of one record (or tweet) and their sum.
struct NormalizedEngagement {
  double retweets = 0;
  double replies = 0;
  double likes = 0;
  double quotes = 0;

  double total() const { return retweets + replies + likes + quotes; }
  bool operator==(const NormalizedEngagement&) const = default;
};

/// Corpus-wide extremes of the four base engagement counts.
struct EngagementRange {
  std::array<std::uint64_t, 4> min{};
  std::array<std::uint64_t, 4> max{};

  static EngagementRange of(const Corpus& corpus) {
    if (corpus.records.empty()) throw Error("empty corpus");
    EngagementRange r;
    const auto& first = corpus.records.front();
    r.min = r.max = {first.retweet_count, first.reply_count, first.like_count,
                     first.quote_count};
    for (const auto& rec : corpus.records) {
      const std::array<std::uint64_t, 4> v{rec.retweet_count, rec.reply_count,
                                           rec.like_count, rec.quote_count};
      for (std::size_t k = 0; k < 4; ++k) {
        r.min[k] = std::min(r.min[k], v[k]);
        r.max[k] = std::max(r.max[k], v[k]);
      }
    }
    return r;
  }

  // (x - min) / (max - min); 0 when max == min.
  double normalize(std::size_t kind, std::uint64_t x) const {
    if (max[kind] == min[kind]) return 0.0;
    return static_cast<double>(x - min[kind]) / static_cast<double>(max[kind] - min[kind]);
  }

  NormalizedEngagement normalize(std::uint64_t rt, std::uint64_t r, std::uint64_t l,
                                 std::uint64_t q) const {
    return {normalize(0, rt), normalize(1, r), normalize(2, l), normalize(3, q)};
  }
};

/// Record-wise normalized engagements, in corpus record order.
inline std::vector<NormalizedEngagement> normalized_engagements(const Corpus& corpus) {
  const auto range = EngagementRange::of(corpus);
  std::vector<NormalizedEngagement> out;
  out.reserve(corpus.records.size());
  for (const auto& r : corpus.records)
    out.push_back(range.normalize(r.retweet_count, r.reply_count, r.like_count, r.quote_count));
  return out;
}

/// Maximum h such that at least h tweets have >= h retweets each.
inline std::uint64_t h_index(std::vector<std::uint64_t> retweet_counts) {
  std::sort(retweet_counts.begin(), retweet_counts.end(), std::greater<>());
  std::uint64_t h = 0;
  while (h < retweet_counts.size() && retweet_counts[h] >= h + 1) ++h;
  return h;
}

/// Maximum g <= N such that the g largest counts sum to at least g^2.
inline std::uint64_t g_index(std::vector<std::uint64_t> retweet_counts) {
  std::sort(retweet_counts.begin(), retweet_counts.end(), std::greater<>());
  std::uint64_t g = 0;
  __extension__ using Wide = unsigned __int128;
  Wide cumulative = 0;
  for (std::size_t i = 0; i < retweet_counts.size(); ++i) {
    cumulative += retweet_counts[i];
    const Wide k = i + 1;
    if (cumulative >= k * k) g = i + 1;
  }
  return g;
}

/// h / T with T = floor(days / 30) + 1 months of activity.
inline double m_index(std::uint64_t h, Instant first_tweet_time, Instant reference_time) {
  const auto months = whole_days_between(first_tweet_time, reference_time) / 30 + 1;
  return static_cast<double>(h) / static_cast<double>(months);
}

/// An authored tweet reconstructed from its retweet records. Engagement
/// counts are the maxima observed across records.
struct AuthoredTweet {
  std::string text;
  std::uint64_t retweets = 0;
  std::uint64_t replies = 0;
  std::uint64_t likes = 0;
  std::uint64_t quotes = 0;
  std::uint64_t max_retweeter_followers = 0;  // f_i
  std::size_t record_count = 0;
};

struct AuthorTweets {
  std::string user_id;
  std::vector<AuthoredTweet> tweets;  // first-appearance order
  std::size_t record_count = 0;
};

/// Groups records by (author, text); authors in user_id order.
inline std::vector<AuthorTweets> index_tweets(const Corpus& corpus) {
  std::map<std::string, AuthorTweets> by_user;
  std::map<TweetKey, std::size_t> slot;
  for (const auto& r : corpus.records) {
    auto& author = by_user[r.original_user_id];
    author.user_id = r.original_user_id;
    ++author.record_count;
    auto [it, inserted] = slot.try_emplace(tweet_key(r), author.tweets.size());
    if (inserted) author.tweets.push_back({r.text, 0, 0, 0, 0, 0, 0});
    auto& t = author.tweets[it->second];
    t.retweets = std::max(t.retweets, r.retweet_count);
    t.replies = std::max(t.replies, r.reply_count);
    t.likes = std::max(t.likes, r.like_count);
    t.quotes = std::max(t.quotes, r.quote_count);
    t.max_retweeter_followers = std::max(t.max_retweeter_followers, r.retweeter_followers);
    ++t.record_count;
  }
  std::vector<AuthorTweets> out;
  out.reserve(by_user.size());
  for (auto& [id, a] : by_user) out.push_back(std::move(a));
  return out;
}

namespace detail {

inline double kind_value(const AuthoredTweet& t, EngagementKind k, const EngagementRange& range) {
  switch (k) {
    case EngagementKind::Retweets: return static_cast<double>(t.retweets);
    case EngagementKind::Replies: return static_cast<double>(t.replies);
    case EngagementKind::Likes: return static_cast<double>(t.likes);
    case EngagementKind::Quotes: return static_cast<double>(t.quotes);
    case EngagementKind::EngagementScore:
      return static_cast<double>(engagement_score(t.retweets, t.replies, t.likes, t.quotes));
    case EngagementKind::NormalizedEngagementScore:
      return range.normalize(t.retweets, t.replies, t.likes, t.quotes).total();
  }
  return 0.0;
}

// All 27 scores of one author, indexed by MetricId.
inline std::array<double, kMetricCount> author_scores(const AuthorTweets& a,
                                                      const EngagementRange& range,
                                                      Instant first_tweet_time,
                                                      Instant reference_time) {
  std::array<double, kMetricCount> s{};
  const double n = static_cast<double>(a.tweets.size());
  for (EngagementKind k : kAllEngagementKinds) {
    double aggregate = 0;
    double weighted = 0;
    for (const auto& t : a.tweets) {
      const double x = kind_value(t, k, range);
      aggregate += x;
      weighted += x * static_cast<double>(t.max_retweeter_followers);
    }
    s[static_cast<std::size_t>(family_metric_id(MetricFamily::Aggregate, k))] = aggregate;
    s[static_cast<std::size_t>(family_metric_id(MetricFamily::PerTweet, k))] = aggregate / n;
    s[static_cast<std::size_t>(family_metric_id(MetricFamily::FollowerWeightedAggregate, k))] =
        weighted;
    s[static_cast<std::size_t>(family_metric_id(MetricFamily::FollowerWeightedPerTweet, k))] =
        weighted / n;
  }
  std::vector<std::uint64_t> rts;
  rts.reserve(a.tweets.size());
  for (const auto& t : a.tweets) rts.push_back(t.retweets);
  const auto h = h_index(rts);
  s[static_cast<std::size_t>(kHIndex)] = static_cast<double>(h);
  s[static_cast<std::size_t>(kMIndex)] = m_index(h, first_tweet_time, reference_time);
  s[static_cast<std::size_t>(kGIndex)] = static_cast<double>(g_index(std::move(rts)));
  return s;
}

inline std::vector<std::array<double, kMetricCount>> score_matrix(
    const Corpus& corpus, const std::vector<AuthorTweets>& authors, unsigned jobs) {
  const auto range = EngagementRange::of(corpus);
  std::vector<std::array<double, kMetricCount>> rows(authors.size());
  parallel_for(authors.size(), jobs, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto& profile = corpus.users.at(authors[i].user_id);
      rows[i] = author_scores(authors[i], range, profile.first_tweet_time,
                              corpus.reference_time);
    }
  });
  return rows;
}

}  // namespace detail

/// Scores every original author under one family/kind combination.
inline MetricTable family_metric(const Corpus& corpus, MetricFamily family,
                                 EngagementKind kind, unsigned jobs = 1) {
  const auto authors = index_tweets(corpus);
  const auto rows = detail::score_matrix(corpus, authors, jobs);
  const auto id = family_metric_id(family, kind);
  std::map<std::string, double> scores;
  for (std::size_t i = 0; i < authors.size(); ++i)
    scores.emplace(authors[i].user_id, rows[i][static_cast<std::size_t>(id)]);
  return make_table(to_string(id), std::move(scores));
}

/// All 27 tables. Output is independent of `jobs`.
inline std::map<MetricId, MetricTable> compute_all_metrics(const Corpus& corpus,
                                                           unsigned jobs = 1) {
  if (corpus.records.empty()) throw Error("empty corpus");
  const auto authors = index_tweets(corpus);
  const auto rows = detail::score_matrix(corpus, authors, jobs);
  std::map<MetricId, MetricTable> out;
  for (MetricId id : kAllMetrics) {
    std::map<std::string, double> scores;
    for (std::size_t i = 0; i < authors.size(); ++i)
      scores.emplace(authors[i].user_id, rows[i][static_cast<std::size_t>(id)]);
    out.emplace(id, make_table(to_string(id), std::move(scores)));
  }
  return out;
}

/// Columns metric_id, rank, user_id, score (rank is 1-based).
inline void write_metric_table(std::ostream& out, const MetricTable& t, bool header = true) {
  if (header) csv::write_row(out, {"metric_id", "rank", "user_id", "score"});
  for (std::size_t i = 0; i < t.ranking.size(); ++i)
    csv::write_row(out, {t.metric, std::to_string(i + 1), t.ranking[i],
                         format_sig9(t.scores.at(t.ranking[i]))});
}

}  // namespace sst
