#pragma once

// Hashtag frequency rankings, weighted co-hashtag networks and
// lexicon-based political orientation.

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sst/corpus.hpp"
#include "sst/csv.hpp"
#include "sst/text.hpp"
#include "sst/util.hpp"

namespace sst {

using HashtagCount = std::pair<std::string, std::uint64_t>;

/// Case-folded occurrence counts, descending, lexicographic tie-break,
/// truncated to `n`.
inline std::vector<HashtagCount> top_hashtags(const std::vector<RetweetRecord>& records,
                                              std::size_t n) {
  if (n < 1) throw Error("top_hashtags needs n >= 1");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& r : records)
    for (auto& tag : text::extract_hashtags(r.text)) ++counts[std::move(tag)];
  std::vector<HashtagCount> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (out.size() > n) out.resize(n);
  return out;
}

enum class HashtagFlag : std::uint8_t { Conspiracy, Other };

inline std::string_view to_string(HashtagFlag f) {
  return f == HashtagFlag::Conspiracy ? "conspiracy" : "other";
}

using HashtagSet = std::set<std::string, std::less<>>;

/// Weighted undirected co-occurrence network. Edge keys are ordered pairs
/// (a < b). Hashtags are deduplicated within a tweet before counting.
struct CoHashtagGraph {
  std::map<std::string, std::uint64_t> nodes;
  std::map<std::pair<std::string, std::string>, std::uint64_t> edges;
  std::map<std::string, HashtagFlag> node_flags;

  bool operator==(const CoHashtagGraph&) const = default;

  std::uint64_t edge(std::string_view a, std::string_view b) const {
    std::pair<std::string, std::string> key{std::string(a), std::string(b)};
    if (key.second < key.first) std::swap(key.first, key.second);
    auto it = edges.find(key);
    return it == edges.end() ? 0 : it->second;
  }

  void add_tweet(std::string_view text, const HashtagSet& conspiracy_lexicon) {
    const auto all = text::extract_hashtags(text);
    const std::set<std::string> distinct(all.begin(), all.end());
    for (const auto& tag : distinct) {
      ++nodes[tag];
      node_flags[tag] = conspiracy_lexicon.count(tag) ? HashtagFlag::Conspiracy
                                                      : HashtagFlag::Other;
    }
    for (auto a = distinct.begin(); a != distinct.end(); ++a)
      for (auto b = std::next(a); b != distinct.end(); ++b) ++edges[{*a, *b}];
  }

  /// Commutative, associative accumulation of another partial graph.
  void merge(const CoHashtagGraph& other) {
    for (const auto& [tag, n] : other.nodes) nodes[tag] += n;
    for (const auto& [key, n] : other.edges) edges[key] += n;
    for (const auto& [tag, flag] : other.node_flags) node_flags[tag] = flag;
  }
};

inline CoHashtagGraph build_cohashtag_graph(const std::vector<RetweetRecord>& records,
                                            const HashtagSet& conspiracy_lexicon) {
  CoHashtagGraph g;
  for (const auto& r : records) g.add_tweet(r.text, conspiracy_lexicon);
  return g;
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// GraphML export; nodes carry usage weight and flag, edges carry weight.
/// Only edges with weight >= `edge_floor` are written.
inline void write_graphml(std::ostream& out, const CoHashtagGraph& g,
                          std::uint64_t edge_floor = 1) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
         "  <key id=\"weight\" for=\"node\" attr.name=\"weight\" attr.type=\"long\"/>\n"
         "  <key id=\"flag\" for=\"node\" attr.name=\"flag\" attr.type=\"string\"/>\n"
         "  <key id=\"eweight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
         "  <graph id=\"cohashtag\" edgedefault=\"undirected\">\n";
  for (const auto& [tag, n] : g.nodes) {
    const auto flag = g.node_flags.count(tag) ? g.node_flags.at(tag) : HashtagFlag::Other;
    out << "    <node id=\"" << detail::xml_escape(tag) << "\">"
        << "<data key=\"weight\">" << n << "</data>"
        << "<data key=\"flag\">" << to_string(flag) << "</data></node>\n";
  }
  std::size_t eid = 0;
  for (const auto& [key, n] : g.edges) {
    if (n < edge_floor) continue;
    out << "    <edge id=\"e" << eid++ << "\" source=\"" << detail::xml_escape(key.first)
        << "\" target=\"" << detail::xml_escape(key.second) << "\">"
        << "<data key=\"eweight\">" << n << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

/// "hashtag_a<TAB>hashtag_b<TAB>count" per edge.
inline void write_edge_list(std::ostream& out, const CoHashtagGraph& g,
                            std::uint64_t edge_floor = 1) {
  for (const auto& [key, n] : g.edges)
    if (n >= edge_floor) out << key.first << '\t' << key.second << '\t' << n << '\n';
}

enum class Orientation : std::uint8_t { Left, Right, NonPolitical };

inline constexpr std::array<Orientation, 3> kAllOrientations{
    Orientation::Left, Orientation::Right, Orientation::NonPolitical};

inline std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::Left: return "left";
    case Orientation::Right: return "right";
    case Orientation::NonPolitical: return "non_political";
  }
  return "";
}

inline std::optional<Orientation> parse_orientation(std::string_view s) {
  const std::string v = to_lower_ascii(trim(s));
  if (v == "left") return Orientation::Left;
  if (v == "right") return Orientation::Right;
  if (v == "non_political" || v == "nonpolitical" || v == "non-political" || v == "none")
    return Orientation::NonPolitical;
  return std::nullopt;
}

/// Hashtag -> orientation. Lookups strip "#" and ignore case.
class OrientationLexicon {
 public:
  OrientationLexicon() = default;
  OrientationLexicon(std::initializer_list<std::pair<std::string_view, Orientation>> entries) {
    for (const auto& [tag, o] : entries) add(tag, o);
  }

  void add(std::string_view tag, Orientation o) { labels_[text::normalize_hashtag(tag)] = o; }

  std::optional<Orientation> lookup(std::string_view tag) const {
    auto it = labels_.find(text::normalize_hashtag(tag));
    if (it == labels_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return labels_.size(); }
  const std::map<std::string, Orientation, std::less<>>& entries() const { return labels_; }

  /// CSV with columns hashtag,orientation (header optional).
  static OrientationLexicon load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open orientation lexicon '" + path + "'");
    OrientationLexicon lex;
    csv::Reader reader(in);
    std::vector<std::string> row;
    while (reader.read(row)) {
      if (row.size() == 1 && trim(row[0]).empty()) continue;
      if (row.size() < 2) throw Error(path + ":" + std::to_string(reader.line()) + ": expected hashtag,orientation");
      const auto o = parse_orientation(row[1]);
      if (!o) {
        if (reader.line() == 1) continue;  // header
        throw Error(path + ":" + std::to_string(reader.line()) + ": unknown orientation '" + row[1] + "'");
      }
      lex.add(row[0], *o);
    }
    return lex;
  }

 private:
  std::map<std::string, Orientation, std::less<>> labels_;
};

namespace detail {

// Unique plurality among counts; ties or no votes -> NonPolitical.
inline Orientation plurality(const std::array<std::size_t, 3>& votes) {
  std::size_t best = 0;
  std::size_t best_i = 2;
  bool tie = false;
  for (std::size_t i = 0; i < 3; ++i) {
    if (votes[i] > best) {
      best = votes[i];
      best_i = i;
      tie = false;
    } else if (votes[i] == best && best > 0) {
      tie = true;
    }
  }
  if (best == 0 || tie) return Orientation::NonPolitical;
  return kAllOrientations[best_i];
}

}  // namespace detail

/// Majority label among the tweet's distinct lexicon-matched hashtags.
inline Orientation classify_orientation(const RetweetRecord& record,
                                        const OrientationLexicon& lexicon) {
  const auto all = text::extract_hashtags(record.text);
  const std::set<std::string> distinct(all.begin(), all.end());
  std::array<std::size_t, 3> votes{};
  for (const auto& tag : distinct)
    if (auto o = lexicon.lookup(tag)) ++votes[static_cast<std::size_t>(*o)];
  return detail::plurality(votes);
}

/// Majority over per-tweet labels, counting only Left and Right tweets.
inline Orientation account_orientation(const std::vector<Orientation>& tweet_labels) {
  std::array<std::size_t, 3> votes{};
  for (Orientation o : tweet_labels)
    if (o != Orientation::NonPolitical) ++votes[static_cast<std::size_t>(o)];
  return detail::plurality(votes);
}

inline Orientation classify_account_orientation(const std::vector<RetweetRecord>& user_records,
                                                const OrientationLexicon& lexicon) {
  std::vector<Orientation> labels;
  labels.reserve(user_records.size());
  for (const auto& r : user_records) labels.push_back(classify_orientation(r, lexicon));
  return account_orientation(labels);
}

/// Shipped defaults covering the hashtags prominent in the study's data.
inline HashtagSet default_conspiracy_hashtags() {
  return {"coronahoax", "virushoax", "plandemic", "scamdemic", "qanon", "wwg1wga",
          "qarmy", "q", "qanon2020", "thegreatawakening", "greatawakening", "mog",
          "obamagate", "filmyourhospital", "covidhoax", "billgates", "5g", "nwo",
          "deepstate", "pizzagate", "savethechildren", "darktolight", "wakeup",
          "hoax", "fakepandemic"};
}

inline OrientationLexicon default_orientation_lexicon() {
  return {{"maga", Orientation::Right},          {"trump2020", Orientation::Right},
          {"kag", Orientation::Right},           {"trump", Orientation::Right},
          {"obamagate", Orientation::Right},     {"americafirst", Orientation::Right},
          {"kag2020", Orientation::Right},       {"trumptrain", Orientation::Right},
          {"walkaway", Orientation::Right},      {"fakenews", Orientation::Right},
          {"stopthesteal", Orientation::Right},  {"wwg1wga", Orientation::Right},
          {"qanon", Orientation::Right},         {"blacklivesmatter", Orientation::Left},
          {"blm", Orientation::Left},            {"joebiden", Orientation::Left},
          {"biden2020", Orientation::Left},      {"resist", Orientation::Left},
          {"bluewave", Orientation::Left},       {"georgefloyd", Orientation::Left},
          {"votebluetosaveamerica", Orientation::Left}, {"covid19", Orientation::NonPolitical},
          {"coronavirus", Orientation::NonPolitical}, {"covid", Orientation::NonPolitical},
          {"breaking", Orientation::NonPolitical}, {"foxnews", Orientation::NonPolitical},
          {"fact", Orientation::NonPolitical},   {"news", Orientation::NonPolitical}};
}

/// One hashtag per line; "#" optional; blank lines ignored.
inline HashtagSet load_hashtag_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open hashtag list '" + path + "'");
  HashtagSet out;
  std::string line;
  while (std::getline(in, line)) {
    const auto tag = text::normalize_hashtag(line);
    if (!tag.empty()) out.insert(tag);
  }
  return out;
}

}  // namespace sst
