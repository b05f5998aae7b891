// Copyright 2026 The Certigame Authors. All rights reserved.
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

// Command-line driver: runs certificate-finding experiments and inspects
// their artifacts.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "certigame/blackbox.h"
#include "certigame/certify.h"
#include "certigame/games.h"
#include "certigame/harness.h"

namespace {

using namespace certigame;

int DoRun(const ExperimentConfig& raw, bool quiet) {
  const ExperimentConfig& config = raw;
  RunResult result = Run(config, [&](const MetricsRow& row) {
    if (!quiet) std::cerr << FormatRow(row) << "\n";
  });
  for (const std::string& w : result.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  if (!config.out_csv.empty()) {
    EmitCsv(result.rows, config.out_csv);
    WriteRunMetadata(config, result, config.out_csv);
  } else {
    EmitCsv(result.rows, std::cout);
  }
  if (!config.cert_path.empty()) {
    if (!result.certificate.has_value()) {
      std::cerr << "error: " << AlgoName(config.algo)
                << " produces no certificate\n";
      return 1;
    }
    ExportCertificate(*result.certificate, config.cert_path);
  }
  int violations = 0;
  for (const SolvePoint& point : result.solve_points) {
    violations += !point.holds;
  }
  if (violations > 0) {
    std::cerr << "error: " << violations
              << " solve points exceed the played uncertainty\n";
    return 2;
  }
  if (!result.eps_bar.empty()) {
    for (size_t p = 0; p < result.eps_bar.size(); ++p) {
      std::cerr << "eps_bar_p" << p + 1 << " " << result.eps_bar[p] << "\n";
    }
  }
  if (!result.eps_tilde.empty()) {
    for (size_t p = 0; p < result.eps_tilde.size(); ++p) {
      std::cerr << "eps_tilde_p" << p + 1 << " " << result.eps_tilde[p] << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "certigame: provable equilibrium certificates from sampled play"};
  app.require_subcommand(1);

  ExperimentConfig config;
  std::string algo = "cert-lp";
  std::string chance = "signature";
  std::string expand = "path";
  std::string exploration = "optimistic";
  bool quiet = false;
  bool no_timing = false;
  bool no_true_gap = false;
  bool long_run = false;
  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("--game", config.game_id, "Game id")->required();
  run->add_option("--algo", algo,
                  "cert-lp, cert-lp-indep, cert-cfr, "
                  "cert-mccfr or mccfr-baseline");
  run->add_option("--iters", config.iterations, "Playthroughs")->required();
  run->add_option("--seed", config.seed, "Run seed");
  run->add_option("--solve-every", config.solve_every, "Exact-solve cadence");
  run->add_option("--chance-mode", chance, "known, signature or independent");
  run->add_option("--expand", expand, "path or first-new");
  run->add_option("--eval-every", config.eval_every, "Row cadence");
  run->add_option("--out", config.out_csv, "CSV output (stdout if omitted)");
  run->add_option("--cert", config.cert_path, "Certificate JSON output");
  run->add_flag("--warning1-demo", config.warning1,
                "Feed sampled true payoffs to the regret minimizers");
  run->add_flag("--eps-bar", config.eps_bar, "Report eps-bar");
  run->add_flag("--eps-tilde", config.eps_tilde, "Report eps-tilde");
  run->add_option("--exploration", exploration, "optimistic or uniform");
  run->add_option("--tol", config.tol_rel, "Relative exact-solve tolerance");
  bool cold_start = false;
  run->add_flag("--cold-start", cold_start,
                "Restart exact solves from zero regrets");
  run->add_option("--mccfr-epsilon", config.mccfr_epsilon,
                  "Outcome-sampling exploration");
  run->add_flag("--no-timing", no_timing, "Leave wallclock_ms empty");
  run->add_flag("--no-true-gap", no_true_gap, "Skip oracle evaluation");
  run->add_flag("--long", long_run, "Allow long runs on large games");
  run->add_flag("--quiet", quiet, "Do not echo rows to stderr");

  std::vector<std::string> compare_paths;
  CLI::App* compare = app.add_subcommand("compare", "Compare run CSVs");
  compare->add_option("csv", compare_paths, "Run CSVs")->required();

  std::string play_game;
  uint64_t play_seed = 0;
  int play_count = 1;
  CLI::App* play =
      app.add_subcommand("play", "Print uniform-play trajectories as JSONL");
  play->add_option("--game", play_game, "Game id")->required();
  play->add_option("--seed", play_seed, "Seed");
  play->add_option("--count", play_count, "Number of playthroughs");

  std::string cert_path;
  CLI::App* verify =
      app.add_subcommand("verify-cert", "Recompute a certificate's gaps");
  verify->add_option("cert", cert_path, "Certificate JSON")->required();

  std::string oracle_game;
  std::string oracle_out;
  CLI::App* oracle =
      app.add_subcommand("oracle", "Expand a game fully and report its size");
  oracle->add_option("--game", oracle_game, "Game id")->required();
  oracle->add_option("--out", oracle_out, "GameTree JSON output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      config.algo = ParseAlgo(algo);
      config.chance_mode = ParseChanceMode(chance);
      config.expand_mode = ParseExpandMode(expand);
      if (exploration == "uniform") {
        config.exploration = Exploration::kUniform;
      } else if (exploration != "optimistic") {
        throw CertigameError("unknown exploration: " + exploration);
      }
      config.timing = !no_timing;
      config.warm_start = !cold_start;
      config.true_gap = !no_true_gap;
      const bool large = config.game_id.rfind("leduc:", 0) == 0 ||
                         config.game_id == "goofspiel:4";
      if (large && config.iterations > 100000 && !long_run) {
        throw CertigameError("runs over 100000 playthroughs on " +
                             config.game_id + " need --long");
      }
      return DoRun(config, quiet);
    }
    if (*compare) {
      const CompareSummary summary = CompareRuns(compare_paths);
      for (const std::string& line : summary.lines) std::cout << line << "\n";
      return 0;
    }
    if (*play) {
      std::unique_ptr<BlackBoxGame> game = MakeGame(play_game);
      BehaviorProfile empty;
      ProfilePolicy policy(&empty);
      for (int i = 0; i < play_count; ++i) {
        std::cout << TrajectoryToJson(
                         Play(*game, policy, DeriveSeed(play_seed, i)))
                  << "\n";
      }
      return 0;
    }
    if (*verify) {
      const Certificate cert = LoadCertificate(cert_path);
      const GapReport again = cert.Recompute();
      std::cout << "game " << cert.game_id << " algo " << cert.algo << " t "
                << cert.t << " confidence " << cert.confidence << "\n";
      for (size_t p = 0; p < again.per_player.size(); ++p) {
        std::cout << "gap_p" << p + 1 << " " << again.per_player[p] << "\n";
      }
      std::cout << "provable_gap " << again.provable_gap << "\n";
      const bool ok = cert.Verify();
      std::cout << (ok ? "OK" : "MISMATCH") << "\n";
      return ok ? 0 : 1;
    }
    if (*oracle) {
      const GameTree tree = Oracle(oracle_game);
      std::cout << "nodes " << tree.num_nodes() << "\n";
      for (int p = 1; p <= tree.num_players(); ++p) {
        std::cout << "range_p" << p << " [" << tree.lb(0, p) << ", "
                  << tree.ub(0, p) << "]\n";
      }
      if (!oracle_out.empty()) {
        std::ofstream out(oracle_out, std::ios::binary);
        if (!out) throw CertigameError("cannot open " + oracle_out);
        out << tree.ToJson(2) << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
