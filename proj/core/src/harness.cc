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

#include "certigame/harness.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <utility>

#include "certigame/games.h"
#include "json.hpp"

namespace certigame {
namespace {

using json = nlohmann::ordered_json;

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<Policy> OnOracle(const GameTree& oracle,
                             const std::vector<BehaviorProfile>& profiles) {
  std::vector<Policy> out;
  for (const BehaviorProfile& profile : profiles) {
    out.push_back(ToPolicy(oracle, profile, true));
  }
  return out;
}

std::vector<double> TrueGaps(const UtilityModel& exact,
                             const std::vector<Policy>& mixture) {
  return DeviationGaps(exact, exact, mixture, false).per_player;
}

bool IsRow(int64_t t, const ExperimentConfig& config) {
  return t == 1 || t % config.eval_every == 0 || t == config.iterations;
}

RunResult RunBaseline(const ExperimentConfig& config, const BlackBoxGame& game,
                      const RowCallback& on_row) {
  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  const GameTree oracle = Oracle(game, OracleNodeCap());
  result.game_nodes = oracle.num_nodes();
  const UtilityModel model = ExactModel(oracle);
  const int n = oracle.num_players();
  std::vector<RegretState> states;
  std::vector<SequenceAverager> averages;
  for (int p = 1; p <= n; ++p) {
    states.emplace_back(RegretRule::kRegretMatchingPlus);
    states.back().SyncWithTree(oracle, p, 0);
    averages.emplace_back(p);
  }
  const std::vector<double> leaves = LeafCounts(oracle);
  Policy policy(oracle.num_infosets());
  for (int64_t t = 1; t <= config.iterations; ++t) {
    for (int p = 1; p <= n; ++p) states[p - 1].WritePolicy(oracle, p, &policy);
    Rng rng(DeriveSeed(config.seed, static_cast<uint64_t>(t)));
    std::vector<StochasticLossEstimate> estimates;
    for (int p = 1; p <= n; ++p) {
      averages[p - 1].Add(oracle, states[p - 1].SequenceForm(), 1.0);
      estimates.push_back(SampleLossEstimate(model, nullptr, p, policy, leaves,
                                             config.mccfr_epsilon,
                                             states[p - 1], &rng));
    }
    for (int p = 1; p <= n; ++p) {
      std::vector<std::pair<int, double>> loss = estimates[p - 1].gain;
      for (auto& entry : loss) entry.second = -entry.second;
      states[p - 1].ObserveSparse(loss);
    }
    if (!IsRow(t, config)) continue;
    MetricsRow row;
    row.iter = t;
    row.playthroughs = t;
    row.nodes_expanded = oracle.num_nodes();
    if (config.true_gap) {
      Policy average(oracle.num_infosets());
      for (int p = 1; p <= n; ++p) {
        SequenceStrategy seq;
        seq.player = p;
        seq.values = averages[p - 1].Average(oracle);
        FromSequenceForm(oracle, seq, &average);
      }
      row.true_gap = TrueGaps(model, {average});
    }
    if (config.timing) {
      row.wallclock_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
    if (on_row) on_row(row);
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace

const char kCsvHeader[] =
    "iter,playthroughs,nodes_expanded,chance_estimators,provable_gap,"
    "true_gap_p1,true_gap_p2,U_p1,U_p2,wallclock_ms,solver_gap";

ExperimentConfig Normalize(ExperimentConfig config) {
  CERTIGAME_CHECK(config.iterations >= 1, "iterations must be positive");
  CERTIGAME_CHECK(config.eval_every >= 1, "eval-every must be positive");
  CERTIGAME_CHECK(config.solve_every >= 1, "solve-every must be positive");
  const bool rm =
      config.algo == Algo::kCertCfr || config.algo == Algo::kCertMccfr;
  if (config.algo == Algo::kCertLpIndep) {
    config.chance_mode = ChanceMode::kIndependent;
  }
  CERTIGAME_CHECK(!config.warning1 || rm,
                  "warning-1 demo needs a regret-minimization algorithm");
  CERTIGAME_CHECK(!config.eps_bar || rm, "eps-bar unavailable");
  CERTIGAME_CHECK(!config.eps_tilde || config.algo == Algo::kCertMccfr,
                  "eps-tilde undefined for exact losses");
  if (config.algo == Algo::kMccfrBaseline) config.true_gap = true;
  return config;
}

RunResult Run(const ExperimentConfig& raw, const RowCallback& on_row) {
  const ExperimentConfig config = Normalize(raw);
  std::shared_ptr<const BlackBoxGame> game = MakeGame(config.game_id);
  if (config.algo == Algo::kMccfrBaseline) {
    return RunBaseline(config, *game, on_row);
  }
  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  std::optional<GameTree> oracle;
  std::optional<UtilityModel> exact;
  if (config.true_gap) {
    try {
      oracle.emplace(Oracle(*game, OracleNodeCap()));
      exact.emplace(ExactModel(*oracle));
      result.game_nodes = oracle->num_nodes();
    } catch (const CertigameError& e) {
      result.warnings.push_back(std::string("true gap omitted: ") + e.what());
    }
  }
  CertOptions options;
  options.chance_mode = config.chance_mode;
  options.expand_mode = config.expand_mode;
  options.solve_every = config.solve_every;
  options.exact.tol_rel = config.tol_rel;
  options.exact.warm_start = config.warm_start;
  options.mccfr_epsilon = config.mccfr_epsilon;
  options.eps_bar = config.eps_bar;
  options.eps_tilde = config.eps_tilde;
  options.warning1 = config.warning1;
  options.exploration = config.exploration;
  options.seed = config.seed;
  std::unique_ptr<CertificateFinder> finder =
      MakeFinder(game, config.algo, options);
  const int n = game->num_players();
  // True gaps are cached per certificate snapshot.
  int64_t scored_t = -1;
  double scored_gap = 0;
  std::vector<double> true_gap;
  for (int64_t t = 1; t <= config.iterations; ++t) {
    const bool row_due = IsRow(t, config);
    finder->Step(row_due);
    if (!row_due) continue;
    MetricsRow row;
    row.iter = t;
    row.playthroughs = finder->t();
    row.nodes_expanded = finder->pseudogame().num_nodes();
    row.chance_estimators = finder->pseudogame().num_estimators();
    const Certificate& best = finder->best_certificate();
    row.provable_gap = best.provable_gap;
    if (exact.has_value()) {
      if (scored_t != best.t || scored_gap != best.provable_gap) {
        true_gap = TrueGaps(*exact, OnOracle(*oracle, best.profiles));
        scored_t = best.t;
        scored_gap = best.provable_gap;
      }
      row.true_gap = true_gap;
    }
    row.uncertainty = finder->ledger().total();
    row.uncertainty.resize(std::min(n, 2));
    if (config.timing) {
      row.wallclock_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
    if (finder->last_solver_gap() >= 0) {
      row.solver_gap = finder->last_solver_gap();
    }
    if (on_row) on_row(row);
    result.rows.push_back(std::move(row));
  }
  result.certificate = finder->best_certificate();
  if (auto* lp = dynamic_cast<CertLp*>(finder.get())) {
    result.solve_points = lp->solve_points();
  }
  if (auto* rm = dynamic_cast<CertRm*>(finder.get())) {
    if (config.eps_bar) result.eps_bar = rm->EpsBar();
    if (config.eps_tilde) result.eps_tilde = rm->EpsTilde();
  }
  result.certificate->eps_bar = result.eps_bar;
  result.certificate->eps_tilde = result.eps_tilde;
  return result;
}

std::string FormatRow(const MetricsRow& row) {
  std::string line = std::to_string(row.iter) + "," +
                     std::to_string(row.playthroughs) + "," +
                     std::to_string(row.nodes_expanded) + "," +
                     std::to_string(row.chance_estimators) + ",";
  auto opt = [](const std::optional<double>& v) {
    return v.has_value() ? FormatDouble(*v) : std::string();
  };
  auto at = [](const std::vector<double>& v, size_t i) {
    return i < v.size() ? FormatDouble(v[i]) : std::string();
  };
  line += opt(row.provable_gap) + ",";
  line += at(row.true_gap, 0) + "," + at(row.true_gap, 1) + ",";
  line += at(row.uncertainty, 0) + "," + at(row.uncertainty, 1) + ",";
  line += opt(row.wallclock_ms) + ",";
  line += opt(row.solver_gap);
  return line;
}

void EmitCsv(const std::vector<MetricsRow>& rows, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const MetricsRow& row : rows) out << FormatRow(row) << "\n";
}

void EmitCsv(const std::vector<MetricsRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CertigameError("cannot open " + path + " for writing");
  EmitCsv(rows, out);
  if (!out) throw CertigameError("write failed: " + path);
}

std::vector<MetricsRow> ReadCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CertigameError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line != kCsvHeader)
    throw CertigameError("unexpected CSV header in " + path);
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    cells.resize(11);
    auto num = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return std::stod(s);
    };
    MetricsRow row;
    row.iter = std::stoll(cells[0]);
    row.playthroughs = std::stoll(cells[1]);
    row.nodes_expanded = std::stoll(cells[2]);
    row.chance_estimators = std::stoll(cells[3]);
    row.provable_gap = num(cells[4]);
    for (int i : {5, 6}) {
      if (auto v = num(cells[i])) row.true_gap.push_back(*v);
    }
    for (int i : {7, 8}) {
      if (auto v = num(cells[i])) row.uncertainty.push_back(*v);
    }
    row.wallclock_ms = num(cells[9]);
    row.solver_gap = num(cells[10]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteRunMetadata(const ExperimentConfig& config, const RunResult& result,
                      const std::string& csv_path) {
  json meta;
  meta["game_id"] = config.game_id;
  meta["algo"] = AlgoName(config.algo);
  meta["seed"] = config.seed;
  meta["iterations"] = config.iterations;
  meta["solve_every"] = config.solve_every;
  meta["eval_every"] = config.eval_every;
  meta["chance_mode"] = ChanceModeName(Normalize(config).chance_mode);
  meta["expand_mode"] = ExpandModeName(config.expand_mode);
  meta["game_nodes"] = result.game_nodes;
  int violations = 0;
  for (const SolvePoint& point : result.solve_points)
    violations += !point.holds;
  meta["solve_points"] = result.solve_points.size();
  meta["solve_point_violations"] = violations;
  if (!result.eps_bar.empty()) meta["eps_bar"] = result.eps_bar;
  if (!result.eps_tilde.empty()) meta["eps_tilde"] = result.eps_tilde;
  meta["warnings"] = result.warnings;
  const std::string path = csv_path + ".meta.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CertigameError("cannot open " + path + " for writing");
  out << meta.dump(2) << "\n";
}

void ExportCertificate(const Certificate& cert, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CertigameError("cannot open " + path + " for writing");
  out << cert.ToJson(2) << "\n";
  if (!out) throw CertigameError("write failed: " + path);
}

Certificate LoadCertificate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CertigameError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Certificate::FromJson(buffer.str());
}

CompareSummary CompareRuns(const std::vector<std::string>& csv_paths) {
  CERTIGAME_CHECK(csv_paths.size() >= 2, "compare needs at least two runs");
  CompareSummary summary;
  std::vector<std::vector<MetricsRow>> runs;
  std::vector<json> metas;
  for (const std::string& path : csv_paths) {
    std::ifstream in(path + ".meta.json");
    if (!in) throw CertigameError("missing run metadata for " + path);
    json meta = json::parse(in);
    const std::string game = meta.at("game_id").get<std::string>();
    if (summary.game_id.empty()) summary.game_id = game;
    CERTIGAME_CHECK(
        game == summary.game_id,
        "runs are on different games: " + summary.game_id + " vs " + game);
    metas.push_back(std::move(meta));
    runs.push_back(ReadCsv(path));
  }
  const int64_t game_nodes = metas[0].value("game_nodes", int64_t{-1});
  summary.lines.push_back(
      "game " + summary.game_id + ", full tree nodes " +
      (game_nodes >= 0 ? std::to_string(game_nodes) : std::string("unknown")));
  std::map<int64_t, double> reference;
  for (const MetricsRow& row : runs[0]) {
    if (row.provable_gap) reference[row.iter] = *row.provable_gap;
  }
  for (size_t r = 0; r < runs.size(); ++r) {
    const std::vector<MetricsRow>& rows = runs[r];
    double diff = 0;
    for (const MetricsRow& row : rows) {
      auto it = reference.find(row.iter);
      if (it != reference.end() && row.provable_gap) {
        diff = std::max(diff, std::abs(*row.provable_gap - it->second));
      }
    }
    summary.max_abs_diff.push_back(diff);
    std::string line =
        csv_paths[r] + " [" + metas[r].at("algo").get<std::string>() +
        ", seed " + std::to_string(metas[r].at("seed").get<uint64_t>()) + "]";
    if (!rows.empty()) {
      const MetricsRow& last = rows.back();
      line += " iter " + std::to_string(last.iter);
      line +=
          " provable " + (last.provable_gap ? FormatDouble(*last.provable_gap)
                                            : std::string("-"));
      if (!last.true_gap.empty()) {
        double total = 0;
        for (double g : last.true_gap) total += g;
        line += " true " + FormatDouble(total);
      }
      line += " nodes " + std::to_string(last.nodes_expanded);
    }
    // Provable gap once the playthroughs reach the full tree's node count.
    if (game_nodes > 0) {
      for (const MetricsRow& row : rows) {
        if (row.playthroughs >= game_nodes) {
          line += " gap@nodes " + (row.provable_gap
                                       ? FormatDouble(*row.provable_gap)
                                       : std::string("-"));
          break;
        }
      }
    }
    line += " max|diff| " + FormatDouble(diff);
    summary.lines.push_back(std::move(line));
  }
  return summary;
}

}  // namespace certigame
