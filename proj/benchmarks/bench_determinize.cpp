// Copyright 2026 The mutree authors
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

#include <random>

#include "mutree/automaton.hpp"
#include "mutree/determinize.hpp"

namespace {

using namespace mutree;

StreamAutomaton worked_example_nba() {
  StreamAutomaton aut;
  LetterId a = aut.add_letter("a");
  StateId q0 = aut.add_state("q0");
  StateId q1 = aut.add_state("q1");
  StateId q2 = aut.add_state("q2");
  aut.add_transition(q0, a, q1);
  aut.add_transition(q1, a, q1);
  aut.add_transition(q1, a, q2);
  aut.add_transition(q2, a, q1);
  aut.set_initial(q0);
  aut.set_acceptance(BuchiAcceptance{{q1}});
  return aut;
}

StreamAutomaton dense_nba(int states, unsigned seed) {
  std::mt19937_64 rng(seed);
  StreamAutomaton aut;
  aut.add_letter("a");
  aut.add_letter("b");
  for (int i = 0; i < states; ++i) aut.add_state("q" + std::to_string(i));
  std::uniform_int_distribution<StateId> target(0, static_cast<StateId>(states - 1));
  for (StateId q = 0; q < aut.num_states(); ++q)
    for (LetterId y = 0; y < 2; ++y)
      for (int i = 0; i < 3; ++i) aut.add_transition(q, y, target(rng));
  aut.set_initial(0);
  BuchiAcceptance acc;
  for (StateId q = 0; q < aut.num_states(); q += 2) acc.accepting.insert(q);
  aut.set_acceptance(acc);
  return aut;
}

void BM_DetBuchiWorkedExample(benchmark::State& state) {
  StreamAutomaton src = worked_example_nba();
  for (auto _ : state) benchmark::DoNotOptimize(det_buchi(src));
}
BENCHMARK(BM_DetBuchiWorkedExample);

void BM_DetBuchiDense(benchmark::State& state) {
  StreamAutomaton src = dense_nba(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) {
    auto result = det_buchi(src);
    benchmark::DoNotOptimize(result.macrostates.size());
  }
}
BENCHMARK(BM_DetBuchiDense)->Arg(3)->Arg(4)->Arg(5);

void BM_DetParityDense(benchmark::State& state) {
  StreamAutomaton src = dense_nba(static_cast<int>(state.range(0)), 11);
  ParityAcceptance acc;
  for (StateId q = 0; q < src.num_states(); ++q) acc.priority.push_back(q % 4);
  src.set_acceptance(acc);
  for (auto _ : state) {
    auto result = det_parity(src);
    benchmark::DoNotOptimize(result.macrostates.size());
  }
}
BENCHMARK(BM_DetParityDense)->Arg(3)->Arg(4);

void BM_AcceptsLassoDeterminized(benchmark::State& state) {
  auto result = det_buchi(dense_nba(4, 7));
  Lasso lasso{{"a", "b", "a"}, {"b", "a", "a", "b"}};
  for (auto _ : state) benchmark::DoNotOptimize(accepts_lasso(result.automaton, lasso));
}
BENCHMARK(BM_AcceptsLassoDeterminized);

void BM_CompareOnLassos(benchmark::State& state) {
  StreamAutomaton src = dense_nba(3, 7);
  auto result = det_buchi(src);
  for (auto _ : state) {
    auto report = compare_on_lassos(src, result.automaton, 2, 3);
    benchmark::DoNotOptimize(report.tested);
  }
}
BENCHMARK(BM_CompareOnLassos);

}  // namespace
