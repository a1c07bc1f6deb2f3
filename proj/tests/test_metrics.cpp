#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"

namespace sst {
namespace {

using testing::record;

double score(const std::map<MetricId, MetricTable>& all, MetricFamily f, EngagementKind k,
             const std::string& user) {
  return all.at(family_metric_id(f, k)).scores.at(user);
}

TEST(Metrics, IdsAndNames) {
  EXPECT_EQ(kAllMetrics.size(), 27u);
  std::set<std::string> names;
  for (MetricId id : kAllMetrics) {
    names.insert(to_string(id));
    EXPECT_EQ(parse_metric_id(to_string(id)), id);
  }
  EXPECT_EQ(names.size(), 27u);
  EXPECT_EQ(to_string(kHIndex), "h_index");
  EXPECT_EQ(to_string(family_metric_id(MetricFamily::FollowerWeightedPerTweet,
                                       EngagementKind::EngagementScore)),
            "follower_weighted_per_tweet_engagement_score");
  EXPECT_EQ(parse_metric_id("GIndex"), kGIndex);
  EXPECT_EQ(parse_metric_id("PerTweetLikes"),
            family_metric_id(MetricFamily::PerTweet, EngagementKind::Likes));
  EXPECT_FALSE(parse_metric_id("pagerank"));
}

TEST(Metrics, EngagementScoreExamples) {
  EXPECT_EQ(engagement_score(10, 2, 30, 1), 43u);
  EXPECT_EQ(engagement_score(0, 0, 0, 0), 0u);
  EXPECT_EQ(engagement_score(5, 0, 0, 0), 5u);
}

TEST(Metrics, NormalizationEndpointsAndDegenerateRange) {
  auto a = record("1", "A", "x", 0);
  a.like_count = 7;
  auto b = record("2", "A", "y", 10);
  b.like_count = 7;
  b.reply_count = 3;
  b.quote_count = 2;
  const auto norm = normalized_engagements(build_corpus({a, b}));
  EXPECT_EQ(norm[1].retweets, 1.0);
  EXPECT_EQ(norm[0].retweets, 0.0);
  EXPECT_EQ(norm[0].likes, 0.0);
  EXPECT_EQ(norm[1].likes, 0.0);
  EXPECT_EQ(norm[1].total(), 3.0);  // likes are degenerate, the other three at max
}

TEST(Metrics, NormalizedScoreReachesFourAtCorpusMaxima) {
  auto a = record("1", "A", "x", 0);
  auto b = record("2", "B", "y", 9);
  b.reply_count = 4;
  b.like_count = 8;
  b.quote_count = 1;
  const auto norm = normalized_engagements(build_corpus({a, b}));
  EXPECT_EQ(norm[1].total(), 4.0);
}

TEST(Metrics, FamilyExamples) {
  auto l1 = record("1", "L", "first", 1);
  l1.like_count = 4;
  auto l2 = record("2", "L", "second", 1);
  l2.like_count = 6;
  auto f1 = record("3", "F", "solo", 3);
  f1.retweeter_followers = 100;
  auto w1 = record("4", "W", "one", 2);
  w1.retweeter_followers = 10;
  auto w2 = record("5", "W", "two", 5);
  w2.retweeter_followers = 0;
  const auto all = compute_all_metrics(build_corpus({l1, l2, f1, w1, w2}));
  EXPECT_EQ(score(all, MetricFamily::Aggregate, EngagementKind::Likes, "L"), 10.0);
  EXPECT_EQ(score(all, MetricFamily::PerTweet, EngagementKind::Likes, "L"), 5.0);
  EXPECT_EQ(score(all, MetricFamily::FollowerWeightedAggregate, EngagementKind::Retweets, "F"), 300.0);
  EXPECT_EQ(score(all, MetricFamily::FollowerWeightedPerTweet, EngagementKind::Retweets, "W"), 10.0);
}

TEST(Metrics, TweetsAreReconstructedFromRecords) {
  auto a = record("1", "A", "same text", 4, "r1");
  a.retweeter_followers = 50;
  auto b = record("2", "A", "same text", 9, "r2");
  b.retweeter_followers = 20;
  auto c = record("3", "A", "other", 1, "r3");
  const auto all = compute_all_metrics(build_corpus({a, b, c}));
  // Two distinct tweets: retweets max(4, 9) = 9 and 1; f = 50 and 0.
  EXPECT_EQ(score(all, MetricFamily::Aggregate, EngagementKind::Retweets, "A"), 10.0);
  EXPECT_EQ(score(all, MetricFamily::PerTweet, EngagementKind::Retweets, "A"), 5.0);
  EXPECT_EQ(score(all, MetricFamily::FollowerWeightedAggregate, EngagementKind::Retweets, "A"), 450.0);
}

TEST(HIndex, Examples) {
  EXPECT_EQ(h_index(std::vector<std::uint64_t>(10, 10)), 10u);
  EXPECT_EQ(h_index({}), 0u);
  EXPECT_EQ(h_index({3, 1, 4, 1, 5}), 3u);
  EXPECT_EQ(testing::brute_h_index({3, 1, 4, 1, 5}), 3u);
}

TEST(GIndex, Examples) {
  EXPECT_EQ(g_index({10, 5, 3}), 3u);
  EXPECT_EQ(g_index({1, 1, 1}), 1u);
  EXPECT_EQ(g_index({}), 0u);
  EXPECT_EQ(testing::brute_g_index({10, 5, 3}), 3u);
  EXPECT_EQ(testing::brute_g_index({1, 1, 1}), 1u);
}

TEST(MIndex, Examples) {
  const Instant t0{1590000000};
  EXPECT_EQ(m_index(6, t0, Instant{t0.seconds + 89 * 86400}), 2.0);
  EXPECT_EQ(m_index(0, t0, Instant{t0.seconds + 400 * 86400}), 0.0);
  EXPECT_EQ(m_index(5, t0, t0), 5.0);
  EXPECT_EQ(m_index(4, t0, Instant{t0.seconds + 30 * 86400 - 1}), 4.0);
  EXPECT_EQ(m_index(4, t0, Instant{t0.seconds + 30 * 86400}), 2.0);
}

TEST(IndexProperties, OracleAgreementAndOrdering) {
  synth::Rng rng(2024);
  for (int trial = 0; trial < 3000; ++trial) {
    auto counts = testing::random_counts(rng, 30, trial % 2 ? 1000 : 12);
    const auto h = h_index(counts);
    const auto g = g_index(counts);
    ASSERT_EQ(h, testing::brute_h_index(counts));
    ASSERT_EQ(g, testing::brute_g_index(counts));
    EXPECT_LE(h, g);
    EXPECT_LE(h, counts.size());
    EXPECT_LE(g, counts.size());
    counts.push_back(rng.below(1000));
    EXPECT_GE(h_index(counts), h);
  }
}

TEST(GIndex, HugeCountsDoNotOverflow) {
  const std::uint64_t big = std::numeric_limits<std::uint64_t>::max() / 2;
  EXPECT_EQ(g_index({big, big, big}), 3u);
}

// Independent recomputation of every family score straight from records.
std::map<std::string, std::array<double, 24>> oracle_family_scores(const Corpus& c) {
  std::array<std::uint64_t, 4> lo{}, hi{};
  bool first = true;
  for (const auto& r : c.records) {
    const std::array<std::uint64_t, 4> v{r.retweet_count, r.reply_count, r.like_count, r.quote_count};
    for (int k = 0; k < 4; ++k) {
      lo[k] = first ? v[k] : std::min(lo[k], v[k]);
      hi[k] = first ? v[k] : std::max(hi[k], v[k]);
    }
    first = false;
  }
  struct Tweet {
    std::array<std::uint64_t, 4> v{};
    std::uint64_t f = 0;
  };
  std::map<std::string, std::map<std::string, Tweet>> tweets;
  for (const auto& r : c.records) {
    auto& t = tweets[r.original_user_id][r.text];
    const std::array<std::uint64_t, 4> v{r.retweet_count, r.reply_count, r.like_count, r.quote_count};
    for (int k = 0; k < 4; ++k) t.v[k] = std::max(t.v[k], v[k]);
    t.f = std::max(t.f, r.retweeter_followers);
  }
  std::map<std::string, std::array<double, 24>> out;
  for (const auto& [user, ts] : tweets) {
    std::array<double, 24> s{};
    for (int kind = 0; kind < 6; ++kind) {
      double agg = 0, w = 0;
      for (const auto& [text, t] : ts) {
        double x = 0;
        if (kind < 4) x = static_cast<double>(t.v[kind]);
        if (kind == 4) x = static_cast<double>(t.v[0] + t.v[1] + t.v[2] + t.v[3]);
        if (kind == 5)
          for (int k = 0; k < 4; ++k)
            x += hi[k] == lo[k] ? 0.0 : static_cast<double>(t.v[k] - lo[k]) / static_cast<double>(hi[k] - lo[k]);
        agg += x;
        w += x * static_cast<double>(t.f);
      }
      const double n = static_cast<double>(ts.size());
      s[0 * 6 + kind] = agg;
      s[1 * 6 + kind] = agg / n;
      s[2 * 6 + kind] = w;
      s[3 * 6 + kind] = w / n;
    }
    out[user] = s;
  }
  return out;
}

TEST(Metrics, FamiliesMatchIndependentRecomputation) {
  synth::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = testing::random_corpus(rng, 3 + rng.below(30));
    const auto all = compute_all_metrics(c);
    const auto oracle = oracle_family_scores(c);
    for (const auto& [user, s] : oracle) {
      for (std::size_t id = 0; id < 24; ++id) {
        const double got = all.at(MetricId{static_cast<std::uint8_t>(id)}).scores.at(user);
        EXPECT_NEAR(got, s[id], 1e-9 * std::max(1.0, std::abs(s[id]))) << user << " metric " << id;
      }
    }
  }
}

TEST(Metrics, AllTablesCoverEveryAuthorWithValidRankings) {
  synth::Rng rng(8);
  const auto c = testing::random_corpus(rng, 25);
  const auto all = compute_all_metrics(c, 3);
  ASSERT_EQ(all.size(), 27u);
  std::set<std::string> authors;
  for (const auto& r : c.records) authors.insert(r.original_user_id);
  for (const auto& [id, t] : all) {
    EXPECT_EQ(t.scores.size(), authors.size());
    std::set<std::string> ranked(t.ranking.begin(), t.ranking.end());
    EXPECT_EQ(ranked, authors);
    for (std::size_t i = 1; i < t.ranking.size(); ++i) {
      const double a = t.scores.at(t.ranking[i - 1]);
      const double b = t.scores.at(t.ranking[i]);
      EXPECT_TRUE(a > b || (a == b && t.ranking[i - 1] < t.ranking[i]));
    }
    for (const auto& [u, s] : t.scores) EXPECT_TRUE(std::isfinite(s) && s >= 0);
  }
  const auto per_tweet = all.at(family_metric_id(MetricFamily::PerTweet, EngagementKind::Likes));
  const auto aggregate = all.at(family_metric_id(MetricFamily::Aggregate, EngagementKind::Likes));
  for (const auto& a : index_tweets(c))
    EXPECT_NEAR(per_tweet.scores.at(a.user_id) * static_cast<double>(a.tweets.size()),
                aggregate.scores.at(a.user_id), 1e-9 * std::max(1.0, aggregate.scores.at(a.user_id)));
  const auto norm = normalized_engagements(c);
  for (const auto& n : norm) {
    for (double x : {n.retweets, n.replies, n.likes, n.quotes}) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    EXPECT_LE(n.total(), 4.0);
  }
}

TEST(Metrics, SingleUserAndTieBreak) {
  const auto one = compute_all_metrics(build_corpus({record("1", "solo", "t")}));
  for (const auto& [id, t] : one) EXPECT_EQ(t.ranking.size(), 1u);
  const auto tied = compute_all_metrics(build_corpus({record("1", "zed", "t", 4), record("2", "amy", "u", 4)}));
  EXPECT_EQ(tied.at(kHIndex).ranking, (std::vector<std::string>{"amy", "zed"}));
}

TEST(Metrics, OutputIndependentOfJobsAndRepeatable) {
  synth::Options o;
  o.users = 120;
  const auto c = build_corpus(synth::generate(o));
  auto render = [&](unsigned jobs) {
    std::ostringstream out;
    for (const auto& [id, t] : compute_all_metrics(c, jobs)) write_metric_table(out, t);
    return out.str();
  };
  const auto serial = render(1);
  EXPECT_EQ(serial, render(4));
  EXPECT_EQ(serial, render(1));
}

TEST(Metrics, TableExportFormat) {
  const auto t = make_table("h_index", {{"b", 2.0}, {"a", 2.0}, {"c", 0.5}});
  std::ostringstream out;
  write_metric_table(out, t);
  EXPECT_EQ(out.str(),
            "metric_id,rank,user_id,score\n"
            "h_index,1,a,2.00000000\n"
            "h_index,2,b,2.00000000\n"
            "h_index,3,c,0.500000000\n");
}

}  // namespace
}  // namespace sst
