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

#include <benchmark/benchmark.h>

#include <memory>

#include "certigame/blackbox.h"
#include "certigame/certify.h"
#include "certigame/evaluation.h"
#include "certigame/games.h"
#include "certigame/pseudogame.h"
#include "certigame/solvers.h"

namespace certigame {
namespace {

Pseudogame Sampled(const std::string& id, int t) {
  auto game = MakeGame(id);
  Pseudogame pg(*game, ChanceMode::kSignature, ExpandMode::kPath);
  const BehaviorProfile empty;
  ProfilePolicy uniform(&empty);
  for (int i = 0; i < t; ++i) pg.Record(Play(*game, uniform, DeriveSeed(1, i)));
  return pg;
}

void BM_Oracle(benchmark::State& state, const std::string& id) {
  for (auto _ : state) {
    const GameTree tree = Oracle(id);
    benchmark::DoNotOptimize(tree.num_nodes());
  }
}
BENCHMARK_CAPTURE(BM_Oracle, kuhn, std::string("kuhn"));
BENCHMARK_CAPTURE(BM_Oracle, goofspiel3, std::string("goofspiel:3"));
BENCHMARK_CAPTURE(BM_Oracle, leduc3, std::string("leduc:3"));

void BM_PlayAndRecord(benchmark::State& state) {
  auto game = MakeGame("goofspiel:4");
  Pseudogame pg(*game, ChanceMode::kSignature, ExpandMode::kPath);
  const BehaviorProfile empty;
  ProfilePolicy uniform(&empty);
  uint64_t i = 0;
  for (auto _ : state) pg.Record(Play(*game, uniform, DeriveSeed(2, i++)));
  state.counters["nodes"] = pg.num_nodes();
}
BENCHMARK(BM_PlayAndRecord);

void BM_BoundGains(benchmark::State& state) {
  const Pseudogame pg = Sampled("leduc:3", static_cast<int>(state.range(0)));
  const Policy policy = UniformPolicy(pg.tree());
  for (auto _ : state) {
    const UtilityModel model = pg.BoundModel(AllSides(2, Side::kOptimistic));
    benchmark::DoNotOptimize(GainVector(model, 1, policy));
  }
  state.counters["nodes"] = pg.num_nodes();
}
BENCHMARK(BM_BoundGains)->Arg(100)->Arg(1000);

void BM_ExactSolveKuhn(benchmark::State& state) {
  const GameTree kuhn = Oracle("kuhn");
  const UtilityModel model = ExactModel(kuhn);
  ExactSolveOptions options;
  options.warm_start = false;
  for (auto _ : state) {
    ExactSolver solver(options);
    benchmark::DoNotOptimize(solver.Solve(model).value);
  }
}
BENCHMARK(BM_ExactSolveKuhn);

void BM_SampleLossEstimate(benchmark::State& state) {
  const Pseudogame pg = Sampled("goofspiel:3", 200);
  const UtilityModel model = pg.BoundModel(AllSides(2, Side::kOptimistic));
  const Policy policy = UniformPolicy(pg.tree());
  const std::vector<double> leaves = LeafCounts(pg.tree());
  RegretState treeplex;
  treeplex.SyncWithTree(pg.tree(), 1, 0);
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SampleLossEstimate(model, nullptr, 1, policy,
                                                leaves, 0.6, treeplex, &rng));
  }
}
BENCHMARK(BM_SampleLossEstimate);

void BM_FinderStep(benchmark::State& state, Algo algo) {
  CertOptions options;
  options.solve_every = 100;
  auto finder = MakeFinder(
      std::shared_ptr<const BlackBoxGame>(MakeGame("kuhn")), algo, options);
  for (auto _ : state) finder->Step(false);
}
BENCHMARK_CAPTURE(BM_FinderStep, cert_lp, Algo::kCertLp);
BENCHMARK_CAPTURE(BM_FinderStep, cert_cfr, Algo::kCertCfr);
BENCHMARK_CAPTURE(BM_FinderStep, cert_mccfr, Algo::kCertMccfr);

}  // namespace
}  // namespace certigame

BENCHMARK_MAIN();
