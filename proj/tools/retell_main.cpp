// Copyright 2026 The Retell Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: retell, eval, stats, validate.
//
// Exit status: 0 success, 1 I/O failure, 2 validation or usage error.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "retell/retell.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;

struct RetellArgs {
  fs::path story;
  std::string variation = "all";
  std::string pov = "first";
  std::string lexicon;
  std::string out = ".";
};

struct EvalArgs {
  fs::path manifest;
  std::string metric = "both";
};

struct StatsArgs {
  fs::path ratings;
  std::string test = "anova";
  std::string measure = "preference";
  std::vector<std::string> conditions;
};

struct ValidateArgs {
  std::vector<fs::path> stories;
};

int run_retell(const RetellArgs& a) {
  if (a.lexicon.empty()) {
    std::cerr << "retell: --lexicon is required\n";
    return kExitInvalid;
  }
  std::error_code ec;
  if (!fs::is_regular_file(a.lexicon, ec)) {
    std::cerr << "retell: --lexicon: file not found: " << a.lexicon << '\n';
    return kExitInvalid;
  }
  std::vector<retell::Variation> variations;
  if (a.variation == "all") {
    variations.assign(retell::kAllVariations.begin(), retell::kAllVariations.end());
  } else if (auto v = retell::parse_variation(a.variation)) {
    variations.push_back(*v);
  } else {
    std::cerr << "retell: --variation: unknown value '" << a.variation << "'\n";
    return kExitInvalid;
  }
  retell::POVConfig pov;
  pov.target_person = a.pov == "third" ? retell::POVConfig::Target::third : retell::POVConfig::Target::first;

  const auto lexicon = retell::Lexicon::load(a.lexicon);
  const auto bundle = retell::load_story_bundle(a.story);
  for (auto v : variations) {
    const std::string text = retell::retell_story(bundle, v, pov, lexicon);
    const auto path = retell::save_retelling(bundle.story_id, v, text, a.out);
    std::cout << "[" << retell::to_string(v) << "] " << path.string() << '\n' << text << "\n\n";
  }
  return 0;
}

int run_eval(const EvalArgs& a) {
  auto sel = a.metric == "bleu"  ? retell::MetricSelection::bleu
             : a.metric == "lev" ? retell::MetricSelection::levenshtein
                                 : retell::MetricSelection::both;
  const auto pairs = retell::load_pair_manifest(a.manifest);
  std::cout << retell::format_report(retell::corpus_report(pairs), sel);
  return 0;
}

int run_stats(const StatsArgs& a) {
  const auto ratings = retell::parse_ratings_csv(retell::read_file(a.ratings));
  const auto known = retell::conditions_of(ratings);
  std::vector<std::string> conditions = a.conditions.empty() ? known : a.conditions;
  for (const auto& c : conditions) {
    if (std::find(known.begin(), known.end(), c) == known.end()) {
      std::cerr << "stats: --conditions: unknown condition '" << c << "'\n";
      return kExitInvalid;
    }
  }
  const auto measure =
      a.measure == "correctness" ? retell::Measure::correctness : retell::Measure::preference;
  std::cout << retell::format_condition_means(ratings, conditions) << '\n';

  retell::StatResult result;
  if (a.test == "ttest") {
    if (conditions.size() != 2) {
      std::cerr << "stats: --test ttest needs exactly two conditions\n";
      return kExitInvalid;
    }
    auto [x, y] = retell::paired_values(ratings, conditions[0], conditions[1], measure);
    result = retell::paired_t_test(x, y);
  } else {
    std::vector<std::vector<double>> groups;
    for (const auto& c : conditions) groups.push_back(retell::condition_values(ratings, c, measure));
    result = retell::one_way_anova(groups);
  }
  std::cout << a.test << " on " << a.measure << ": " << retell::format_stat_result(result) << '\n';
  return 0;
}

int run_validate(const ValidateArgs& a) {
  for (const auto& path : a.stories) {
    const auto bundle = retell::load_story_bundle(path);
    std::size_t trees = 0;
    for (const auto& sp : bundle.speech_plans) trees += sp.trees.size();
    // Catch de-aggregation failures too, not just schema problems.
    const auto items = retell::prepare_story(bundle);
    std::cout << path.string() << ": ok (" << bundle.speech_plans.size() << " speech plans, " << trees
              << " trees, " << items.size() << " narrative items)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-based retelling of narrative DSyntS bundles"};
  app.require_subcommand(1);

  RetellArgs retell_args;
  auto* retell_cmd = app.add_subcommand("retell", "Realize a story under one or all sentence-planning variations");
  retell_cmd->add_option("story", retell_args.story, "Story bundle XML")->required();
  retell_cmd->add_option("--variation", retell_args.variation, "est|soSN|becauseNS|becauseSN|NS|N|all")
      ->check(CLI::IsMember({"est", "EST", "soSN", "becauseNS", "becauseSN", "NS", "N", "all"}));
  retell_cmd->add_option("--pov", retell_args.pov, "first|third")->check(CLI::IsMember({"first", "third"}));
  retell_cmd->add_option("--lexicon", retell_args.lexicon, "Lexicon TSV");
  retell_cmd->add_option("--out", retell_args.out, "Output directory for <story>.<variation>.txt files");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Levenshtein/BLEU report over a manifest of text pairs");
  eval_cmd->add_option("pairs", eval_args.manifest, "Manifest: label<TAB>path_a<TAB>path_b per line")->required();
  eval_cmd->add_option("--metric", eval_args.metric, "bleu|lev|both")->check(CLI::IsMember({"bleu", "lev", "both"}));

  StatsArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "Condition means and a significance test over ratings");
  stats_cmd->add_option("ratings", stats_args.ratings, "Ratings CSV")->required();
  stats_cmd->add_option("--test", stats_args.test, "ttest|anova")->check(CLI::IsMember({"ttest", "anova"}));
  stats_cmd->add_option("--measure", stats_args.measure, "correctness|preference")
      ->check(CLI::IsMember({"correctness", "preference"}));
  stats_cmd->add_option("--conditions", stats_args.conditions, "Comma-separated condition names")->delimiter(',');

  ValidateArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Load and check story bundles");
  validate_cmd->add_option("stories", validate_args.stories, "Story bundle XML files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*retell_cmd) return run_retell(retell_args);
    if (*eval_cmd) return run_eval(eval_args);
    if (*stats_cmd) return run_stats(stats_args);
    if (*validate_cmd) return run_validate(validate_args);
  } catch (const retell::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
