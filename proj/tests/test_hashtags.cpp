#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

namespace sst {
namespace {

std::vector<RetweetRecord> tweets(const std::vector<std::string>& texts) {
  std::vector<RetweetRecord> out;
  for (std::size_t i = 0; i < texts.size(); ++i)
    out.push_back(testing::record(std::to_string(i), "A", texts[i]));
  return out;
}

std::string graphml(const CoHashtagGraph& g) {
  std::ostringstream out;
  write_graphml(out, g);
  return out.str();
}

TEST(TopHashtags, Examples) {
  EXPECT_EQ(top_hashtags(tweets({"#a #b", "#a"}), 2), (std::vector<HashtagCount>{{"a", 2}, {"b", 1}}));
  EXPECT_TRUE(top_hashtags(tweets({"no tags", "here"}), 5).empty());
  EXPECT_EQ(top_hashtags(tweets({"#MAGA #maga"}), 10), (std::vector<HashtagCount>{{"maga", 2}}));
  EXPECT_EQ(top_hashtags(tweets({"#z #y #x"}), 2), (std::vector<HashtagCount>{{"x", 1}, {"y", 1}}));
  EXPECT_THROW(top_hashtags({}, 0), Error);
}

TEST(CoHashtag, Examples) {
  const HashtagSet lex{"qanon"};
  const auto abc = build_cohashtag_graph(tweets({"#a #b #c"}), lex);
  EXPECT_EQ(abc.nodes.size(), 3u);
  EXPECT_EQ(abc.edges.size(), 3u);
  for (const auto& [k, n] : abc.edges) EXPECT_EQ(n, 1u);
  EXPECT_EQ(build_cohashtag_graph(tweets({"#a #a #b"}), lex).edge("a", "b"), 1u);
  EXPECT_EQ(build_cohashtag_graph(tweets({"#a #a #b"}), lex).nodes.at("a"), 1u);
  const auto twice = build_cohashtag_graph(tweets({"#a #b", "#a #b"}), lex);
  EXPECT_EQ(twice.edge("b", "a"), 2u);
  const auto flagged = build_cohashtag_graph(tweets({"#QAnon #news"}), lex);
  EXPECT_EQ(flagged.node_flags.at("qanon"), HashtagFlag::Conspiracy);
  EXPECT_EQ(flagged.node_flags.at("news"), HashtagFlag::Other);
}

TEST(CoHashtag, PairIncrementLaw) {
  for (std::size_t k = 2; k <= 6; ++k) {
    std::string text;
    for (std::size_t i = 0; i < k; ++i) text += "#t" + std::to_string(i) + " ";
    const auto g = build_cohashtag_graph(tweets({text}), {});
    std::uint64_t total = 0;
    for (const auto& [key, n] : g.edges) total += n;
    EXPECT_EQ(g.edges.size(), k * (k - 1) / 2);
    EXPECT_EQ(total, k * (k - 1) / 2);
  }
}

TEST(CoHashtag, InvariantsAndShardMerge) {
  synth::Options o;
  o.users = 80;
  const auto recs = synth::generate(o);
  const auto lex = default_conspiracy_hashtags();
  const auto whole = build_cohashtag_graph(recs, lex);

  std::size_t max_tags = 0;
  std::map<std::string, std::uint64_t> containing;
  for (const auto& r : recs) {
    const auto all = text::extract_hashtags(r.text);
    const std::set<std::string> distinct(all.begin(), all.end());
    max_tags = std::max(max_tags, distinct.size());
    for (const auto& t : distinct) ++containing[t];
  }
  EXPECT_EQ(whole.nodes, containing);
  std::map<std::string, std::uint64_t> incident;
  for (const auto& [key, n] : whole.edges) {
    EXPECT_NE(key.first, key.second);
    EXPECT_LT(key.first, key.second);
    EXPECT_LE(n, std::min(whole.nodes.at(key.first), whole.nodes.at(key.second)));
    EXPECT_EQ(whole.edge(key.second, key.first), n);
    incident[key.first] += n;
    incident[key.second] += n;
  }
  for (const auto& [tag, n] : incident) EXPECT_LE(n, whole.nodes.at(tag) * (max_tags - 1));

  std::vector<CoHashtagGraph> shards(4);
  for (std::size_t i = 0; i < recs.size(); ++i) shards[i * 4 / recs.size()].add_tweet(recs[i].text, lex);
  CoHashtagGraph left;  // ((s0 + s1) + s2) + s3
  for (const auto& s : shards) left.merge(s);
  CoHashtagGraph right = shards[3];  // s0 + (s1 + (s2 + s3)) built from the right
  CoHashtagGraph inner = shards[2];
  inner.merge(shards[3]);
  CoHashtagGraph mid = shards[1];
  mid.merge(inner);
  right = shards[0];
  right.merge(mid);
  EXPECT_EQ(left, whole);
  EXPECT_EQ(right, whole);
  EXPECT_EQ(graphml(left), graphml(whole));
  EXPECT_EQ(graphml(right), graphml(whole));
}

TEST(CoHashtag, ExportFormats) {
  const auto g = build_cohashtag_graph(tweets({"#b #a", "#a #b #c&d"}), {"c"});
  std::ostringstream tsv;
  write_edge_list(tsv, g);
  EXPECT_EQ(tsv.str(), "a\tb\t2\na\tc\t1\nb\tc\t1\n");
  std::ostringstream floored;
  write_edge_list(floored, g, 2);
  EXPECT_EQ(floored.str(), "a\tb\t2\n");
  const auto xml = graphml(g);
  EXPECT_NE(xml.find("<node id=\"c\"><data key=\"weight\">1</data><data key=\"flag\">conspiracy</data></node>"),
            std::string::npos);
  EXPECT_NE(xml.find("source=\"a\" target=\"b\"><data key=\"eweight\">2</data>"), std::string::npos);
  EXPECT_NE(xml.find("edgedefault=\"undirected\""), std::string::npos);
}

TEST(Orientation, TweetExamples) {
  const OrientationLexicon lex{{"l1", Orientation::Left},
                               {"l2", Orientation::Left},
                               {"r1", Orientation::Right},
                               {"n1", Orientation::NonPolitical}};
  auto label = [&](const std::string& text) {
    return classify_orientation(testing::record("1", "A", text), lex);
  };
  EXPECT_EQ(label("#l1 #l2 #r1"), Orientation::Left);
  EXPECT_EQ(label("#l1 #r1"), Orientation::NonPolitical);
  EXPECT_EQ(label("no hashtags"), Orientation::NonPolitical);
  EXPECT_EQ(label("#L1 #unknown"), Orientation::Left);
  EXPECT_EQ(label("#n1 #r1"), Orientation::NonPolitical);
  EXPECT_EQ(label("#r1 #l1 #l2"), label("#l2 #r1 #l1"));
  EXPECT_EQ(lex.lookup("#R1"), Orientation::Right);
}

TEST(Orientation, AccountExamples) {
  using O = Orientation;
  EXPECT_EQ(account_orientation({O::Left, O::Left, O::NonPolitical}), O::Left);
  EXPECT_EQ(account_orientation({O::Left, O::Right}), O::NonPolitical);
  EXPECT_EQ(account_orientation({}), O::NonPolitical);
  EXPECT_EQ(account_orientation({O::NonPolitical, O::NonPolitical, O::Right}), O::Right);
  const auto lex = default_orientation_lexicon();
  EXPECT_EQ(classify_account_orientation(tweets({"#maga", "#kag now", "#blm"}), lex), O::Right);
}

TEST(Lexicons, BundledFilesMatchDefaults) {
  const std::string dir = SST_DATA_DIR;
  const auto lex = OrientationLexicon::load(dir + "/orientation_lexicon.csv");
  const auto defaults = default_orientation_lexicon();
  EXPECT_EQ(lex.entries(), defaults.entries());
  EXPECT_EQ(load_hashtag_set(dir + "/conspiracy_hashtags.txt"), default_conspiracy_hashtags());
  EXPECT_TRUE(default_conspiracy_hashtags().count("qanon"));
  EXPECT_TRUE(default_conspiracy_hashtags().count("wwg1wga"));
  EXPECT_EQ(defaults.lookup("maga"), Orientation::Right);
}

}  // namespace
}  // namespace sst
