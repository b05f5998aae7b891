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

#ifndef CERTIGAME_HARNESS_H_
#define CERTIGAME_HARNESS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "certigame/certify.h"

namespace certigame {

struct ExperimentConfig {
  std::string game_id = "kuhn";
  Algo algo = Algo::kCertLp;
  int64_t iterations = 1000;
  uint64_t seed = 0;
  int solve_every = 100;
  ChanceMode chance_mode = ChanceMode::kSignature;
  ExpandMode expand_mode = ExpandMode::kPath;
  int64_t eval_every = 1000;
  bool true_gap = true;
  bool timing = true;
  bool warning1 = false;
  bool eps_bar = false;
  bool eps_tilde = false;
  Exploration exploration = Exploration::kOptimistic;
  double tol_rel = 1e-4;
  bool warm_start = true;
  double mccfr_epsilon = 0.6;
  std::string out_csv;
  std::string cert_path;
};

// Throws on incompatible combinations and applies forced settings.
ExperimentConfig Normalize(ExperimentConfig config);

struct MetricsRow {
  int64_t iter = 0;
  int64_t playthroughs = 0;
  int64_t nodes_expanded = 0;
  int64_t chance_estimators = 0;
  std::optional<double> provable_gap;
  std::vector<double> true_gap;  // empty when unavailable
  std::vector<double> uncertainty;
  std::optional<double> wallclock_ms;
  std::optional<double> solver_gap;
};

struct RunResult {
  std::vector<MetricsRow> rows;
  std::optional<Certificate> certificate;
  std::vector<SolvePoint> solve_points;
  std::vector<double> eps_bar;
  std::vector<double> eps_tilde;
  int64_t game_nodes = -1;  // oracle size, -1 when not expanded
  std::vector<std::string> warnings;
};

using RowCallback = std::function<void(const MetricsRow&)>;

RunResult Run(const ExperimentConfig& config, const RowCallback& on_row = {});

extern const char kCsvHeader[];
std::string FormatRow(const MetricsRow& row);
void EmitCsv(const std::vector<MetricsRow>& rows, std::ostream& out);
void EmitCsv(const std::vector<MetricsRow>& rows, const std::string& path);
std::vector<MetricsRow> ReadCsv(const std::string& path);

// Sidecar with the run's game, algorithm and seed, next to the CSV.
void WriteRunMetadata(const ExperimentConfig& config, const RunResult& result,
                      const std::string& csv_path);
void ExportCertificate(const Certificate& cert, const std::string& path);
Certificate LoadCertificate(const std::string& path);

struct CompareSummary {
  std::string game_id;
  std::vector<std::string> lines;
  // Largest provable-gap difference to the first run on shared iterations.
  std::vector<double> max_abs_diff;
};

// Needs at least two runs on the same game.
CompareSummary CompareRuns(const std::vector<std::string>& csv_paths);

}  // namespace certigame

#endif  // CERTIGAME_HARNESS_H_
