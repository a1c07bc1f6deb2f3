#pragma once

// Command implementations shared by the command-line tool and its tests.
// Every artifact lands under RunConfig::output_dir; warnings go to `log`.

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sst/cohorts.hpp"
#include "sst/content_features.hpp"
#include "sst/corpus.hpp"
#include "sst/csv.hpp"
#include "sst/dismantling.hpp"
#include "sst/hashtags.hpp"
#include "sst/metrics.hpp"
#include "sst/stats.hpp"
#include "sst/synth.hpp"
#include "sst/util.hpp"

namespace sst {

struct RunConfig {
  std::string input_path;
  std::string output_dir = "out";
  double conspiracy_threshold = 0.9;
  double bot_threshold = 0.4;
  double ss_fraction = 0.001;
  CutoffRounding rounding = CutoffRounding::Ceil;
  std::string orientation_lexicon_path;  // empty = built-in
  std::string conspiracy_hashtags_path;  // empty = built-in
  std::string stopwords_path;            // empty = built-in
  std::uint64_t seed = 42;
  std::size_t users = 1000;
  double exponent = 1.5;
  std::size_t max_records = 0;
  unsigned jobs = 1;
  std::optional<std::vector<std::string>> metrics;  // unset = all 27
  std::uint64_t edge_floor = 1;
  std::size_t top_n = 10;

  void validate() const {
    if (!(conspiracy_threshold >= 0.0 && conspiracy_threshold <= 1.0))
      throw Error("conspiracy threshold must lie in [0,1]");
    if (!(bot_threshold >= 0.0 && bot_threshold <= 1.0))
      throw Error("bot threshold must lie in [0,1]");
    if (!(ss_fraction > 0.0 && ss_fraction <= 1.0))
      throw Error("superspreader fraction must lie in (0,1]");
    if (jobs == 0) throw Error("jobs must be at least 1");
    if (top_n == 0) throw Error("top-n must be at least 1");
  }
};

namespace detail {

namespace fs = std::filesystem;

class ArtifactWriter {
 public:
  explicit ArtifactWriter(const std::string& dir) : root_(dir) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec || !fs::is_directory(root_))
      throw Error("cannot create output directory '" + dir + "'");
  }

  void write(const std::string& relative, const std::function<void(std::ostream&)>& body) {
    const fs::path path = root_ / relative;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    std::ostringstream buf;
    body(buf);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    const auto data = buf.str();
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error("cannot write '" + path.string() + "'");
    written_.insert(relative);
  }

  const std::set<std::string>& written() const { return written_; }
  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
  std::set<std::string> written_;
};

inline std::string ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? std::string() : format_sig9(static_cast<double>(num) / static_cast<double>(den));
}

inline std::string mean(const std::vector<double>& v) {
  if (v.empty()) return {};
  double s = 0;
  for (double x : v) s += x;
  return format_sig9(s / static_cast<double>(v.size()));
}

}  // namespace detail

struct Loaded {
  IngestResult all;  // complete and deduplicated
  Corpus filtered;   // conspiracy-spreading authors only
};

inline Loaded load(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.input_path.empty()) throw Error("no input file given");
  Loaded l{ingest_file(cfg.input_path, {cfg.conspiracy_threshold}), {}};
  l.filtered = filter_conspiracy(l.all.corpus, cfg.conspiracy_threshold);
  return l;
}

inline void report_diagnostics(const IngestStats& stats, std::ostream& log) {
  constexpr std::size_t kShown = 20;
  for (std::size_t i = 0; i < stats.diagnostics.size() && i < kShown; ++i)
    log << "warning: " << stats.diagnostics[i] << '\n';
  if (stats.diagnostics.size() > kShown)
    log << "warning: " << stats.diagnostics.size() - kShown << " more input diagnostics\n";
}

inline void emit_ingest(const Loaded& l, detail::ArtifactWriter& w) {
  w.write("corpus_all.jsonl", [&](std::ostream& o) { write_corpus(o, l.all.corpus); });
  w.write("corpus.jsonl", [&](std::ostream& o) { write_corpus(o, l.filtered); });
  w.write("ingest_summary.csv", [&](std::ostream& o) {
    const auto& s = l.all.stats;
    csv::write_row(o, {"quantity", "count"});
    const std::vector<std::pair<const char*, std::size_t>> rows{
        {"records_read", s.records_read},
        {"malformed", s.malformed},
        {"non_retweet", s.non_retweet},
        {"bad_timestamp", s.bad_timestamp},
        {"missing_engagement", s.missing_engagement},
        {"duplicates", s.duplicates},
        {"retained", s.retained},
        {"conspiracy_records", l.filtered.records.size()},
        {"conspiracy_users", l.filtered.users.size()}};
    for (const auto& [k, v] : rows) csv::write_row(o, {k, std::to_string(v)});
  });
}

inline void emit_rank(const std::map<MetricId, MetricTable>& tables, detail::ArtifactWriter& w) {
  for (const auto& [id, t] : tables)
    w.write("metrics/" + t.metric + ".csv", [&](std::ostream& o) { write_metric_table(o, t); });
  w.write("metrics_all.csv", [&](std::ostream& o) {
    bool header = true;
    for (const auto& [id, t] : tables) {
      write_metric_table(o, t, header);
      header = false;
    }
  });
}

inline std::vector<MetricId> requested_metrics(const RunConfig& cfg) {
  if (!cfg.metrics) return {kAllMetrics.begin(), kAllMetrics.end()};
  std::vector<MetricId> out;
  for (const auto& name : *cfg.metrics) {
    auto id = parse_metric_id(name);
    if (!id) throw Error("unknown metric id '" + name + "'");
    if (std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
  }
  return out;
}

inline void emit_dismantle(const RunConfig& cfg, const Corpus& filtered,
                           const std::map<MetricId, MetricTable>& tables,
                           detail::ArtifactWriter& w) {
  const auto ids = requested_metrics(cfg);
  std::vector<DismantlingCurve> curves(ids.size());
  parallel_for(ids.size(), cfg.jobs, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) curves[i] = dismantle(filtered, tables.at(ids[i]));
  });
  const auto optimal = dismantle(filtered, optimal_ranking(filtered));

  for (const auto& c : curves)
    w.write("curves/curve_" + c.metric + ".csv", [&](std::ostream& o) { write_curve(o, c); });
  w.write("curves/curve_optimal.csv", [&](std::ostream& o) { write_curve(o, optimal); });
  w.write("curves_all.csv", [&](std::ostream& o) {
    write_curve(o, optimal);
    for (const auto& c : curves) write_curve(o, c, false);
  });

  std::vector<stats::ReportRow> cvm_rows;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    for (std::size_t j = i + 1; j < curves.size(); ++j) {
      const auto& a = curves[i];
      const auto& b = curves[j];
      w.write("differences/diff_" + a.metric + "__" + b.metric + ".csv",
              [&](std::ostream& o) { write_curve_difference(o, a, b); });
      std::vector<double> xa;
      std::vector<double> xb;
      for (std::size_t k = 0; k < a.points.size(); ++k) {
        xa.push_back(remaining_fraction(a, k));
        xb.push_back(remaining_fraction(b, k));
      }
      cvm_rows.push_back({"cramer_von_mises", "remaining_fraction", a.metric + "|" + b.metric,
                          stats::cvm_two_sample(xa, xb).as_test_result()});
    }
  }
  if (!cvm_rows.empty())
    w.write("cvm_report.csv", [&](std::ostream& o) { stats::write_report(o, cvm_rows); });

  const auto& h = tables.at(kHIndex);
  w.write("superspreaders.csv", [&](std::ostream& o) {
    csv::write_row(o, {"rank", "user_id", "h_index", "impact"});
    const auto chosen = superspreader_cutoff(h, cfg.ss_fraction, cfg.rounding);
    for (std::size_t i = 0; i < chosen.size(); ++i)
      csv::write_row(o, {std::to_string(i + 1), chosen[i], format_general(h.scores.at(chosen[i])),
                         format_sig9(impact(filtered, chosen[i]))});
  });
}

namespace detail {

struct RecordAnalysis {
  Cohort cohort{};
  FeatureVector features;
  std::optional<ReadabilityScore> readability;  // absent when no words remain
  std::string cleaned;
};

inline std::vector<stats::ReportRow> anova_row(const std::string& variable,
                                               const std::map<Cohort, std::vector<double>>& groups,
                                               std::ostream& log) {
  std::vector<std::vector<double>> gs;
  std::string set;
  for (Cohort c : kAllCohorts) {
    auto it = groups.find(c);
    if (it == groups.end() || it->second.size() < 2) continue;
    gs.push_back(it->second);
    if (!set.empty()) set += '|';
    set += to_string(c);
  }
  try {
    return {{"anova", variable, set, stats::anova_oneway(gs)}};
  } catch (const Error& e) {
    log << "warning: anova " << variable << ": skipped (" << e.what() << ")\n";
    return {};
  }
}

// Drops all-zero rows and columns before testing; labels name kept rows.
inline std::vector<stats::ReportRow> chi_square_row(const std::string& variable,
                                                    const std::map<Cohort, std::vector<double>>& rows,
                                                    std::ostream& log) {
  std::vector<std::vector<double>> table;
  std::string set;
  for (Cohort c : kAllCohorts) {
    auto it = rows.find(c);
    if (it == rows.end()) continue;
    double total = 0;
    for (double x : it->second) total += x;
    if (total == 0) continue;
    table.push_back(it->second);
    if (!set.empty()) set += '|';
    set += to_string(c);
  }
  if (!table.empty()) {
    std::vector<std::vector<double>> kept(table.size());
    for (std::size_t j = 0; j < table[0].size(); ++j) {
      double col = 0;
      for (const auto& r : table) col += r[j];
      if (col == 0) continue;
      for (std::size_t i = 0; i < table.size(); ++i) kept[i].push_back(table[i][j]);
    }
    table = std::move(kept);
  }
  try {
    return {{"chi_square", variable, set, stats::chi_square_independence(table)}};
  } catch (const Error& e) {
    log << "warning: chi_square " << variable << ": skipped (" << e.what() << ")\n";
    return {};
  }
}

inline std::string file_tag(Cohort c) { return std::string(to_string(c)); }

}  // namespace detail

inline void emit_analyze(const RunConfig& cfg, const Corpus& all, const Corpus& filtered,
                         detail::ArtifactWriter& w, std::ostream& log) {
  const auto lexicon = cfg.orientation_lexicon_path.empty()
                           ? default_orientation_lexicon()
                           : OrientationLexicon::load(cfg.orientation_lexicon_path);
  const auto conspiracy_tags = cfg.conspiracy_hashtags_path.empty()
                                   ? default_conspiracy_hashtags()
                                   : load_hashtag_set(cfg.conspiracy_hashtags_path);
  const auto stopwords =
      cfg.stopwords_path.empty() ? default_stopwords() : load_stopwords(cfg.stopwords_path);

  const auto hindex = compute_all_metrics(filtered, cfg.jobs).at(kHIndex);
  const auto cohorts =
      classify(all, hindex, {cfg.bot_threshold, cfg.ss_fraction, cfg.rounding});
  if (cohorts.missing_bot_score)
    log << "warning: bot_score missing for " << cohorts.missing_bot_score
        << " users; treated as human\n";
  w.write("cohorts.csv", [&](std::ostream& o) { write_cohorts(o, all, cohorts, hindex); });

  const auto& records = all.records;
  std::vector<detail::RecordAnalysis> rows(records.size());
  parallel_for(records.size(), cfg.jobs, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      auto& a = rows[i];
      a.cohort = cohorts.labels.at(records[i].original_user_id);
      a.features = extract_features(records[i]);
      a.cleaned = clean_text(records[i].text);
      try {
        a.readability = flesch_kincaid(a.cleaned);
      } catch (const Error&) {
        a.readability.reset();
      }
    }
  });

  bool has_sentiment = false, has_toxicity = false, has_emotion = false;
  for (const auto& r : records) {
    has_sentiment |= r.sentiment_compound.has_value();
    has_toxicity |= r.toxicity.has_value();
    has_emotion |= r.emotion_label.has_value();
  }
  if (!has_sentiment) log << "warning: sentiment: skipped\n";
  if (!has_toxicity) log << "warning: toxicity: skipped\n";
  if (!has_emotion) log << "warning: emotion: skipped\n";

  w.write("features.csv", [&](std::ostream& o) {
    std::vector<std::string> header{"record_id", "original_user_id", "cohort"};
    for (auto n : kBinaryFeatureNames) header.emplace_back(n);
    for (const char* n : {"raw_length", "unedited_length", "readability_grade",
                          "readability_excluded", "sentiment_label"})
      header.emplace_back(n);
    csv::write_row(o, header);
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& a = rows[i];
      std::vector<std::string> f{records[i].record_id, records[i].original_user_id,
                                 std::string(to_string(a.cohort))};
      for (bool b : binary_features(a.features)) f.push_back(b ? "1" : "0");
      f.push_back(std::to_string(a.features.raw_length));
      f.push_back(std::to_string(a.features.unedited_length));
      f.push_back(a.readability ? format_sig9(a.readability->grade) : "");
      f.push_back(a.readability ? (a.readability->excluded ? "1" : "0") : "");
      f.push_back(records[i].sentiment_compound
                      ? std::string(to_string(sentiment_label(*records[i].sentiment_compound)))
                      : "");
      csv::write_row(o, f);
    }
  });

  std::map<Cohort, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < records.size(); ++i) members[rows[i].cohort].push_back(i);
  auto size_of = [&](Cohort c) -> std::uint64_t {
    auto it = members.find(c);
    return it == members.end() ? 0 : it->second.size();
  };
  auto each = [&](Cohort c, auto&& fn) {
    auto it = members.find(c);
    if (it != members.end())
      for (std::size_t i : it->second) fn(i);
  };

  std::vector<stats::ReportRow> tests;

  w.write("feature_rates.csv", [&](std::ostream& o) {
    csv::write_row(o, {"cohort", "feature", "count", "records", "rate"});
    for (Cohort c : kAllCohorts) {
      for (std::size_t f = 0; f < kBinaryFeatureNames.size(); ++f) {
        std::uint64_t n = 0;
        each(c, [&](std::size_t i) { n += binary_features(rows[i].features)[f]; });
        csv::write_row(o, {std::string(to_string(c)), std::string(kBinaryFeatureNames[f]),
                           std::to_string(n), std::to_string(size_of(c)), detail::ratio(n, size_of(c))});
      }
    }
  });
  for (std::size_t f = 0; f < kBinaryFeatureNames.size(); ++f) {
    std::map<Cohort, std::vector<double>> table;
    for (Cohort c : kAllCohorts) {
      double yes = 0;
      each(c, [&](std::size_t i) { yes += binary_features(rows[i].features)[f]; });
      table[c] = {yes, static_cast<double>(size_of(c)) - yes};
    }
    auto r = detail::chi_square_row(std::string(kBinaryFeatureNames[f]), table, log);
    tests.insert(tests.end(), r.begin(), r.end());
  }

  {
    std::map<Cohort, std::vector<double>> grades, raw, unedited;
    w.write("readability.csv", [&](std::ostream& o) {
      csv::write_row(o, {"cohort", "records", "scored", "excluded", "unreadable", "mean_grade",
                         "mean_raw_length", "mean_unedited_length"});
      for (Cohort c : kAllCohorts) {
        std::uint64_t excluded = 0, unreadable = 0;
        each(c, [&](std::size_t i) {
          raw[c].push_back(static_cast<double>(rows[i].features.raw_length));
          unedited[c].push_back(static_cast<double>(rows[i].features.unedited_length));
          if (!rows[i].readability) ++unreadable;
          else if (rows[i].readability->excluded) ++excluded;
          else grades[c].push_back(rows[i].readability->grade);
        });
        csv::write_row(o, {std::string(to_string(c)), std::to_string(size_of(c)),
                           std::to_string(grades[c].size()), std::to_string(excluded),
                           std::to_string(unreadable), detail::mean(grades[c]),
                           detail::mean(raw[c]), detail::mean(unedited[c])});
      }
    });
    for (const auto& [name, groups] : {std::pair{"readability_grade", &grades},
                                       std::pair{"raw_length", &raw},
                                       std::pair{"unedited_length", &unedited}}) {
      auto r = detail::anova_row(name, *groups, log);
      tests.insert(tests.end(), r.begin(), r.end());
    }
  }

  if (has_sentiment) {
    std::map<Cohort, std::vector<double>> compound, counts;
    w.write("sentiment.csv", [&](std::ostream& o) {
      csv::write_row(o, {"cohort", "label", "count", "scored", "share", "mean_compound"});
      for (Cohort c : kAllCohorts) {
        std::array<std::uint64_t, 3> n{};
        each(c, [&](std::size_t i) {
          if (!records[i].sentiment_compound) return;
          compound[c].push_back(*records[i].sentiment_compound);
          ++n[static_cast<std::size_t>(sentiment_label(*records[i].sentiment_compound))];
        });
        const std::uint64_t scored = n[0] + n[1] + n[2];
        for (auto l : kAllSentimentLabels) {
          const auto k = n[static_cast<std::size_t>(l)];
          csv::write_row(o, {std::string(to_string(c)), std::string(to_string(l)),
                             std::to_string(k), std::to_string(scored), detail::ratio(k, scored),
                             detail::mean(compound[c])});
        }
        counts[c] = {static_cast<double>(n[0]), static_cast<double>(n[1]), static_cast<double>(n[2])};
      }
    });
    for (auto& r : detail::anova_row("sentiment_compound", compound, log)) tests.push_back(r);
    for (auto& r : detail::chi_square_row("sentiment_label", counts, log)) tests.push_back(r);
  }

  if (has_emotion) {
    std::map<Cohort, std::vector<double>> counts;
    w.write("emotion.csv", [&](std::ostream& o) {
      csv::write_row(o, {"cohort", "emotion", "count", "labeled", "share"});
      for (Cohort c : kAllCohorts) {
        std::array<std::uint64_t, kAllEmotions.size()> n{};
        std::uint64_t labeled = 0;
        each(c, [&](std::size_t i) {
          if (!records[i].emotion_label) return;
          ++n[static_cast<std::size_t>(*records[i].emotion_label)];
          ++labeled;
        });
        for (Emotion e : kAllEmotions) {
          const auto k = n[static_cast<std::size_t>(e)];
          csv::write_row(o, {std::string(to_string(c)), std::string(to_string(e)),
                             std::to_string(k), std::to_string(labeled), detail::ratio(k, labeled)});
          counts[c].push_back(static_cast<double>(k));
        }
      }
    });
    for (auto& r : detail::chi_square_row("emotion_label", counts, log)) tests.push_back(r);
  }

  if (has_toxicity) {
    std::map<Cohort, std::vector<double>> tox;
    w.write("toxicity.csv", [&](std::ostream& o) {
      csv::write_row(o, {"cohort", "scored", "mean_toxicity"});
      for (Cohort c : kAllCohorts) {
        each(c, [&](std::size_t i) {
          if (records[i].toxicity) tox[c].push_back(*records[i].toxicity);
        });
        csv::write_row(o, {std::string(to_string(c)), std::to_string(tox[c].size()),
                           detail::mean(tox[c])});
      }
    });
    for (auto& r : detail::anova_row("toxicity", tox, log)) tests.push_back(r);
  }

  {
    std::map<Cohort, std::vector<double>> counts;
    w.write("orientation.csv", [&](std::ostream& o) {
      csv::write_row(o, {"cohort", "orientation", "count", "records", "share"});
      for (Cohort c : kAllCohorts) {
        std::array<std::uint64_t, 3> n{};
        each(c, [&](std::size_t i) {
          ++n[static_cast<std::size_t>(classify_orientation(records[i], lexicon))];
        });
        for (Orientation ori : kAllOrientations) {
          const auto k = n[static_cast<std::size_t>(ori)];
          csv::write_row(o, {std::string(to_string(c)), std::string(to_string(ori)),
                             std::to_string(k), std::to_string(size_of(c)),
                             detail::ratio(k, size_of(c))});
          counts[c].push_back(static_cast<double>(k));
        }
      }
    });
    for (auto& r : detail::chi_square_row("orientation", counts, log)) tests.push_back(r);
  }

  // One vote per distinct authored tweet.
  w.write("account_orientation.csv", [&](std::ostream& o) {
    std::map<std::string, std::map<std::string, Orientation>> tweets;
    for (const auto& r : records) tweets[r.original_user_id].try_emplace(r.text, classify_orientation(r, lexicon));
    csv::write_row(o, {"user_id", "cohort", "tweets", "orientation"});
    for (const auto& [user, by_text] : tweets) {
      std::vector<Orientation> labels;
      for (const auto& [t, ori] : by_text) labels.push_back(ori);
      csv::write_row(o, {user, std::string(to_string(cohorts.labels.at(user))),
                         std::to_string(labels.size()),
                         std::string(to_string(account_orientation(labels)))});
    }
  });

  std::map<Cohort, std::vector<RetweetRecord>> by_cohort;
  for (std::size_t i = 0; i < records.size(); ++i) by_cohort[rows[i].cohort].push_back(records[i]);
  w.write("top_hashtags.csv", [&](std::ostream& o) {
    csv::write_row(o, {"cohort", "rank", "hashtag", "count"});
    for (Cohort c : kAllCohorts) {
      const auto top = top_hashtags(by_cohort[c], cfg.top_n);
      for (std::size_t i = 0; i < top.size(); ++i)
        csv::write_row(o, {std::string(to_string(c)), std::to_string(i + 1), top[i].first,
                           std::to_string(top[i].second)});
    }
  });

  std::map<Cohort, std::vector<WordCount>> frequencies;
  for (Cohort c : kAllCohorts) {
    std::vector<std::string> texts;
    each(c, [&](std::size_t i) { texts.push_back(rows[i].cleaned); });
    frequencies[c] = word_frequency(texts, stopwords);
    w.write("word_frequency_" + detail::file_tag(c) + ".csv", [&](std::ostream& o) {
      csv::write_row(o, {"word", "count"});
      for (const auto& [word, n] : frequencies[c]) csv::write_row(o, {word, std::to_string(n)});
    });
  }
  w.write("top_words.csv", [&](std::ostream& o) {
    csv::write_row(o, {"cohort", "rank", "word", "count"});
    for (Cohort c : kAllCohorts)
      for (std::size_t i = 0; i < frequencies[c].size() && i < cfg.top_n; ++i)
        csv::write_row(o, {std::string(to_string(c)), std::to_string(i + 1),
                           frequencies[c][i].first, std::to_string(frequencies[c][i].second)});
  });

  for (Cohort c : kAllCohorts) {
    const auto g = build_cohashtag_graph(by_cohort[c], conspiracy_tags);
    w.write("cohashtag_" + detail::file_tag(c) + ".graphml",
            [&](std::ostream& o) { write_graphml(o, g, cfg.edge_floor); });
    w.write("cohashtag_" + detail::file_tag(c) + ".tsv",
            [&](std::ostream& o) { write_edge_list(o, g, cfg.edge_floor); });
  }

  w.write("stat_tests.csv", [&](std::ostream& o) { stats::write_report(o, tests); });
}

// ---- commands ---------------------------------------------------------------

inline std::set<std::string> cmd_ingest(const RunConfig& cfg, std::ostream& log) {
  const auto l = load(cfg);
  report_diagnostics(l.all.stats, log);
  detail::ArtifactWriter w(cfg.output_dir);
  emit_ingest(l, w);
  return w.written();
}

inline std::set<std::string> cmd_rank(const RunConfig& cfg, std::ostream& log) {
  const auto l = load(cfg);
  report_diagnostics(l.all.stats, log);
  detail::ArtifactWriter w(cfg.output_dir);
  emit_rank(compute_all_metrics(l.filtered, cfg.jobs), w);
  return w.written();
}

inline std::set<std::string> cmd_dismantle(const RunConfig& cfg, std::ostream& log) {
  requested_metrics(cfg);  // usage errors before any work
  const auto l = load(cfg);
  report_diagnostics(l.all.stats, log);
  detail::ArtifactWriter w(cfg.output_dir);
  emit_dismantle(cfg, l.filtered, compute_all_metrics(l.filtered, cfg.jobs), w);
  return w.written();
}

inline std::set<std::string> cmd_analyze(const RunConfig& cfg, std::ostream& log) {
  const auto l = load(cfg);
  report_diagnostics(l.all.stats, log);
  detail::ArtifactWriter w(cfg.output_dir);
  emit_analyze(cfg, l.all.corpus, l.filtered, w, log);
  return w.written();
}

inline std::set<std::string> cmd_synth(const RunConfig& cfg, std::ostream&) {
  synth::Options opts;
  opts.users = cfg.users;
  opts.exponent = cfg.exponent;
  opts.seed = cfg.seed;
  opts.max_records = cfg.max_records;
  const auto records = synth::generate(opts);
  detail::ArtifactWriter w(cfg.output_dir);
  w.write("synthetic.jsonl", [&](std::ostream& o) { write_records(o, records); });
  return w.written();
}

/// Everything above over a single ingest, plus manifest.csv listing each
/// artifact with its size and FNV-1a digest.
inline std::set<std::string> cmd_report(const RunConfig& cfg, std::ostream& log) {
  requested_metrics(cfg);
  const auto l = load(cfg);
  report_diagnostics(l.all.stats, log);
  detail::ArtifactWriter w(cfg.output_dir);
  emit_ingest(l, w);
  const auto tables = compute_all_metrics(l.filtered, cfg.jobs);
  emit_rank(tables, w);
  emit_dismantle(cfg, l.filtered, tables, w);
  emit_analyze(cfg, l.all.corpus, l.filtered, w, log);
  const auto files = w.written();
  w.write("manifest.csv", [&](std::ostream& o) {
    csv::write_row(o, {"artifact", "bytes", "fnv1a64"});
    for (const auto& f : files) {
      std::ifstream in(w.root() / f, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      const auto data = buf.str();
      csv::write_row(o, {f, std::to_string(data.size()), to_hex(fnv1a64(data))});
    }
  });
  return w.written();
}

}  // namespace sst
