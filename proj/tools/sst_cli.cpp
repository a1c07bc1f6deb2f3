// sst: ingest, rank, dismantle, analyze, synth, report.
//
// Option values are layered: command-line flag, then SST_<NAME> environment
// variable, then the --config file (TOML/INI key = value), then the default.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sst/pipeline.hpp"

namespace {

using Command = std::set<std::string> (*)(const sst::RunConfig&, std::ostream&);

struct Sub {
  CLI::App* app;
  Command run;
};

std::string env_name(const std::string& option) {
  std::string out = "SST_";
  for (char c : option) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string config_key(std::string s) {
  for (char& c : s) c = c == '-' ? '_' : c;
  return s;
}

std::map<std::string, std::vector<std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sst::Error("cannot open config file '" + path + "'");
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& item : CLI::ConfigTOML().from_config(in))
    out[config_key(item.name)] = item.inputs;
  return out;
}

// Fills options not given on the command line from the environment, then
// from the config file.
void layer_defaults(CLI::App* sub, const std::string& config_path) {
  std::map<std::string, std::vector<std::string>> config;
  if (!config_path.empty()) config = read_config(config_path);
  for (CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (opt->count() > 0 || name == "help" || name == "config" || name.empty()) continue;
    std::vector<std::string> values;
    if (const char* env = std::getenv(env_name(name).c_str())) {
      values.emplace_back(env);
    } else if (auto it = config.find(config_key(name)); it != config.end()) {
      values = it->second;
    } else {
      continue;
    }
    for (const auto& v : values) opt->add_result(v);
    opt->run_callback();
  }
}

void add_io(CLI::App* sub, sst::RunConfig& cfg, bool needs_input) {
  auto* in = sub->add_option("-i,--input", cfg.input_path, "Retweet records (JSON lines or CSV)");
  if (needs_input) in->check(CLI::ExistingFile);
  sub->add_option("-o,--output-dir", cfg.output_dir, "Directory receiving all artifacts")
      ->capture_default_str();
}

void add_analysis(CLI::App* sub, sst::RunConfig& cfg) {
  sub->add_option("--conspiracy-threshold", cfg.conspiracy_threshold,
                  "Classifier probability a conspiracy record must exceed")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

void add_cohort(CLI::App* sub, sst::RunConfig& cfg) {
  sub->add_option("--bot-threshold", cfg.bot_threshold, "Bot score a bot must exceed")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sub->add_option("--ss-fraction", cfg.ss_fraction, "Superspreader fraction of the ranking")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sub->add_option("--rounding", cfg.rounding, "Superspreader cutoff rounding")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, sst::CutoffRounding>{{"ceil", sst::CutoffRounding::Ceil},
                                                      {"floor", sst::CutoffRounding::Floor}},
          CLI::ignore_case));
}

void add_dismantle(CLI::App* sub, std::vector<std::string>& metrics) {
  sub->add_option("--metrics", metrics, "Comma-separated metric ids (default: all 27)")
      ->delimiter(',')
      ->expected(0, -1);
}

void add_lexicons(CLI::App* sub, sst::RunConfig& cfg) {
  sub->add_option("--orientation-lexicon", cfg.orientation_lexicon_path, "CSV hashtag,orientation")
      ->check(CLI::ExistingFile);
  sub->add_option("--conspiracy-hashtags", cfg.conspiracy_hashtags_path, "One hashtag per line")
      ->check(CLI::ExistingFile);
  sub->add_option("--stopwords", cfg.stopwords_path, "One stopword per line")
      ->check(CLI::ExistingFile);
  sub->add_option("--edge-floor", cfg.edge_floor, "Minimum exported co-hashtag edge weight")
      ->capture_default_str();
  sub->add_option("--top-n", cfg.top_n, "Rows in top hashtag and word tables")
      ->check(CLI::PositiveNumber)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  sst::RunConfig cfg;
  std::string config_path;
  std::vector<std::string> metrics;

  CLI::App app{"Superspreader analytics over retweet corpora"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::vector<Sub> subs;
  auto make = [&](const char* name, const char* desc, Command run) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "TOML/INI file of option = value defaults")
        ->check(CLI::ExistingFile);
    subs.push_back({sub, run});
    return sub;
  };

  auto* ingest = make("ingest", "Validate, deduplicate and filter a record file", sst::cmd_ingest);
  add_io(ingest, cfg, true);
  add_analysis(ingest, cfg);

  auto* rank = make("rank", "Score and rank original tweeters under all 27 metrics", sst::cmd_rank);
  add_io(rank, cfg, true);
  add_analysis(rank, cfg);

  auto* dismantle = make("dismantle", "Dismantling curves, differences and curve comparisons",
                         sst::cmd_dismantle);
  add_io(dismantle, cfg, true);
  add_analysis(dismantle, cfg);
  add_cohort(dismantle, cfg);
  add_dismantle(dismantle, metrics);

  auto* analyze = make("analyze", "Cohort content, hashtag and statistical analyses", sst::cmd_analyze);
  add_io(analyze, cfg, true);
  add_analysis(analyze, cfg);
  add_cohort(analyze, cfg);
  add_lexicons(analyze, cfg);

  auto* synth = make("synth", "Write a seeded synthetic corpus", sst::cmd_synth);
  synth->add_option("-o,--output-dir", cfg.output_dir, "Directory receiving synthetic.jsonl")
      ->capture_default_str();
  synth->add_option("--seed", cfg.seed, "Generator seed")->capture_default_str();
  synth->add_option("--users", cfg.users, "Distinct original tweeters")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--exponent", cfg.exponent, "Zipf exponent of per-user tweet counts")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  synth->add_option("--max-records", cfg.max_records, "Truncate to this many records (0 = no cap)")
      ->capture_default_str();

  auto* report = make("report", "Run every analysis over one input", sst::cmd_report);
  add_io(report, cfg, true);
  add_analysis(report, cfg);
  add_cohort(report, cfg);
  add_dismantle(report, metrics);
  add_lexicons(report, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (const auto& s : subs) {
    if (!s.app->parsed()) continue;
    try {
      layer_defaults(s.app, config_path);
      if (auto* opt = s.app->get_option_no_throw("--metrics"); opt && opt->count() > 0) {
        std::vector<std::string> ids;
        for (const auto& m : metrics)
          if (!m.empty() && m != "none") ids.push_back(m);
        cfg.metrics = ids;
      }
      if (auto* opt = s.app->get_option_no_throw("--input");
          opt && opt->count() == 0 && s.run != sst::cmd_synth)
        throw sst::Error("--input is required");
      for (const auto& f : s.run(cfg, std::cerr)) std::cout << f << '\n';
    } catch (const CLI::ParseError& e) {
      return app.exit(e);
    } catch (const std::exception& e) {
      std::cerr << "sst " << s.app->get_name() << ": error: " << e.what() << '\n';
      return std::string_view(e.what()).rfind("unknown metric id", 0) == 0 ? 2 : 1;
    }
  }
  return 0;
}
