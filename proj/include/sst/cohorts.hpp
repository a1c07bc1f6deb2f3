#pragma once

#include <array>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sst/corpus.hpp"
#include "sst/csv.hpp"
#include "sst/dismantling.hpp"
#include "sst/metrics.hpp"

namespace sst {

enum class Cohort : std::uint8_t {
  BotSpreader,
  HumanSuperspreader,
  HumanSpreader,
  HumanNonSpreader
};

inline constexpr std::array<Cohort, 4> kAllCohorts{
    Cohort::BotSpreader, Cohort::HumanSuperspreader, Cohort::HumanSpreader,
    Cohort::HumanNonSpreader};

inline std::string_view to_string(Cohort c) {
  switch (c) {
    case Cohort::BotSpreader: return "bot_spreader";
    case Cohort::HumanSuperspreader: return "human_superspreader";
    case Cohort::HumanSpreader: return "human_spreader";
    case Cohort::HumanNonSpreader: return "human_non_spreader";
  }
  return "";
}

struct CohortOptions {
  double bot_threshold = 0.4;
  double superspreader_fraction = 0.001;
  CutoffRounding rounding = CutoffRounding::Ceil;
};

struct CohortAssignment {
  std::map<std::string, Cohort> labels;
  std::size_t missing_bot_score = 0;  // users treated as human for lack of a score

  std::size_t count(Cohort c) const {
    std::size_t n = 0;
    for (const auto& [u, l] : labels) n += (l == c);
    return n;
  }
};

/// Labels every profiled user. Precedence: bot spreader, then human
/// superspreader (top fraction of the H-index ranking restricted to
/// non-bot users), then spreader / non-spreader by conspiracy tweet count.
inline CohortAssignment classify(const Corpus& corpus, const MetricTable& hindex_ranking,
                                 const CohortOptions& opts = {}) {
  if (!(opts.bot_threshold >= 0.0 && opts.bot_threshold <= 1.0))
    throw Error("bot threshold must lie in [0,1]");
  CohortAssignment out;
  for (const auto& [id, profile] : corpus.users) {
    if (!profile.bot_score) ++out.missing_bot_score;
    const double bot = profile.bot_score.value_or(0.0);
    if (bot > opts.bot_threshold && profile.conspiracy_tweet_count >= 1)
      out.labels.emplace(id, Cohort::BotSpreader);
  }

  MetricTable humans;
  humans.metric = hindex_ranking.metric;
  for (const auto& user : hindex_ranking.ranking) {
    if (!corpus.users.count(user) || out.labels.count(user)) continue;
    humans.ranking.push_back(user);
    humans.scores.emplace(user, hindex_ranking.scores.at(user));
  }
  for (const auto& user : superspreader_cutoff(humans, opts.superspreader_fraction, opts.rounding))
    out.labels.emplace(user, Cohort::HumanSuperspreader);

  for (const auto& [id, profile] : corpus.users)
    out.labels.try_emplace(id, profile.conspiracy_tweet_count >= 1 ? Cohort::HumanSpreader
                                                                    : Cohort::HumanNonSpreader);
  return out;
}

/// Columns user_id, cohort, bot_score, h_index, conspiracy_tweet_count.
inline void write_cohorts(std::ostream& out, const Corpus& corpus,
                          const CohortAssignment& cohorts, const MetricTable& hindex) {
  csv::write_row(out, {"user_id", "cohort", "bot_score", "h_index", "conspiracy_tweet_count"});
  for (const auto& [id, label] : cohorts.labels) {
    const auto& p = corpus.users.at(id);
    auto h = hindex.scores.find(id);
    csv::write_row(out, {id, std::string(to_string(label)),
                         p.bot_score ? format_general(*p.bot_score) : std::string(),
                         h == hindex.scores.end() ? "0" : format_general(h->second),
                         std::to_string(p.conspiracy_tweet_count)});
  }
}

}  // namespace sst
