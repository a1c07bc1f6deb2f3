#pragma once

// Dismantling analysis: remove users in ranking order and track how much of
// the retweet dataset remains.

#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sst/corpus.hpp"
#include "sst/csv.hpp"
#include "sst/metrics.hpp"
#include "sst/util.hpp"

namespace sst {

inline constexpr std::string_view kOptimalMetric = "optimal";

struct CurvePoint {
  std::size_t removed_users = 0;
  std::size_t remaining_records = 0;

  bool operator==(const CurvePoint&) const = default;
};

struct DismantlingCurve {
  std::string metric;
  std::vector<CurvePoint> points;  // one per removal count 0..users
  std::size_t total_records = 0;

  bool operator==(const DismantlingCurve&) const = default;
};

/// Number of records authored by each original user.
inline std::map<std::string, std::size_t> record_contributions(const Corpus& corpus) {
  std::map<std::string, std::size_t> out;
  for (const auto& r : corpus.records) ++out[r.original_user_id];
  return out;
}

/// Share of the dataset removed by suspending `user`.
inline double impact(const Corpus& corpus, std::string_view user) {
  std::size_t n = 0;
  for (const auto& r : corpus.records)
    if (r.original_user_id == user) ++n;
  if (n == 0) throw Error("unknown original user '" + std::string(user) + "'");
  return static_cast<double>(n) / static_cast<double>(corpus.records.size());
}

/// Impact of every original user; the fractions sum to one.
inline std::map<std::string, double> impact_report(const Corpus& corpus) {
  std::map<std::string, double> out;
  const double total = static_cast<double>(corpus.records.size());
  for (const auto& [user, n] : record_contributions(corpus))
    out.emplace(user, static_cast<double>(n) / total);
  return out;
}

/// Ranks users by true record contribution: the best any ranking can do.
inline MetricTable optimal_ranking(const Corpus& corpus) {
  if (corpus.records.empty()) throw Error("empty corpus");
  std::map<std::string, double> scores;
  for (const auto& [user, n] : record_contributions(corpus))
    scores.emplace(user, static_cast<double>(n));
  return make_table(std::string(kOptimalMetric), std::move(scores));
}

/// Point k holds the records left after removing the top-k ranked users.
inline DismantlingCurve dismantle(const Corpus& corpus, const MetricTable& ranking) {
  const auto contributions = record_contributions(corpus);
  if (ranking.ranking.size() != contributions.size()) {
    std::unordered_set<std::string_view> ranked(ranking.ranking.begin(), ranking.ranking.end());
    for (const auto& [user, n] : contributions)
      if (!ranked.count(user)) throw Error("ranking missing user '" + user + "'");
  }
  DismantlingCurve curve;
  curve.metric = ranking.metric;
  curve.total_records = corpus.records.size();
  curve.points.reserve(contributions.size() + 1);
  std::size_t remaining = curve.total_records;
  curve.points.push_back({0, remaining});
  std::unordered_set<std::string_view> removed;
  for (const auto& user : ranking.ranking) {
    auto it = contributions.find(user);
    if (it == contributions.end())
      throw Error("ranking contains unknown original user '" + user + "'");
    if (!removed.insert(user).second)
      throw Error("ranking lists user '" + user + "' twice");
    remaining -= it->second;
    curve.points.push_back({curve.points.size(), remaining});
  }
  return curve;
}

enum class CutoffRounding { Ceil, Floor };

/// The top ceil (or floor) of fraction * |ranking| users, in rank order.
inline std::vector<std::string> superspreader_cutoff(const MetricTable& ranking,
                                                     double fraction = 0.001,
                                                     CutoffRounding rounding = CutoffRounding::Ceil) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error("cutoff fraction must lie in (0,1]");
  const double exact = fraction * static_cast<double>(ranking.ranking.size());
  // Guard against 0.001 * 1000 evaluating to 1.0000000000000002.
  const double snapped = std::abs(exact - std::round(exact)) < 1e-9 ? std::round(exact) : exact;
  auto n = static_cast<std::size_t>(rounding == CutoffRounding::Ceil ? std::ceil(snapped)
                                                                     : std::floor(snapped));
  n = std::min(n, ranking.ranking.size());
  return {ranking.ranking.begin(), ranking.ranking.begin() + static_cast<std::ptrdiff_t>(n)};
}

struct CurveDelta {
  std::size_t removed_users = 0;
  std::int64_t difference = 0;  // remaining_a - remaining_b

  bool operator==(const CurveDelta&) const = default;
};

inline std::vector<CurveDelta> curve_difference(const DismantlingCurve& a,
                                                const DismantlingCurve& b) {
  if (a.total_records != b.total_records || a.points.size() != b.points.size())
    throw Error("curves '" + a.metric + "' and '" + b.metric + "' cover different corpora");
  std::vector<CurveDelta> out;
  out.reserve(a.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i)
    out.push_back({a.points[i].removed_users,
                   static_cast<std::int64_t>(a.points[i].remaining_records) -
                       static_cast<std::int64_t>(b.points[i].remaining_records)});
  return out;
}

inline double remaining_fraction(const DismantlingCurve& c, std::size_t k) {
  return static_cast<double>(c.points[k].remaining_records) /
         static_cast<double>(c.total_records);
}

/// Columns metric_id, removed_users, remaining_records, remaining_fraction.
inline void write_curve(std::ostream& out, const DismantlingCurve& c, bool header = true) {
  if (header)
    csv::write_row(out, {"metric_id", "removed_users", "remaining_records", "remaining_fraction"});
  for (std::size_t k = 0; k < c.points.size(); ++k)
    csv::write_row(out, {c.metric, std::to_string(c.points[k].removed_users),
                         std::to_string(c.points[k].remaining_records),
                         format_sig9(remaining_fraction(c, k))});
}

inline void write_curve_difference(std::ostream& out, const DismantlingCurve& a,
                                   const DismantlingCurve& b) {
  csv::write_row(out, {"metric_a", "metric_b", "removed_users", "remaining_difference"});
  for (const auto& d : curve_difference(a, b))
    csv::write_row(out, {a.metric, b.metric, std::to_string(d.removed_users),
                         std::to_string(d.difference)});
}

}  // namespace sst
