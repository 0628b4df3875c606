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

#include "mutree/btproof.hpp"
#include "mutree/cycle_engine.hpp"
#include "mutree/nwproof.hpp"

namespace {

using namespace mutree;

NwDerivation nu_box_proof() {
  Formula phi = parse_formula("nu x. [] x");
  Formula body = phi.unfold();
  NwDerivation d;
  auto r = d.add_node(NwDerivation::npos, make_sequent({phi}),
                      RuleLabel::plain(RuleKind::NuRule), phi);
  auto dis = d.add_node(r, make_sequent({body}), RuleLabel::discharge("x"));
  auto u = d.add_node(dis, make_sequent({body}), RuleLabel::plain(RuleKind::BoxRule), body);
  auto v = d.add_node(u, make_sequent({phi}), RuleLabel::plain(RuleKind::NuRule), phi);
  d.add_node(v, make_sequent({body}), RuleLabel::leaf_token("x"));
  return d;
}

void BM_CheckNw(benchmark::State& state) {
  NwDerivation proof = nu_box_proof();
  for (auto _ : state) benchmark::DoNotOptimize(check_nw(proof).proof);
}
BENCHMARK(BM_CheckNw);

void BM_TranslateNwToBt(benchmark::State& state) {
  NwDerivation proof = nu_box_proof();
  for (auto _ : state) {
    BtDerivation bt = translate_nw_to_bt(proof);
    benchmark::DoNotOptimize(bt.nodes.size());
  }
}
BENCHMARK(BM_TranslateNwToBt);

void BM_CheckBt(benchmark::State& state) {
  BtDerivation bt = translate_nw_to_bt(nu_box_proof());
  for (auto _ : state) benchmark::DoNotOptimize(check_bt(bt).proof);
}
BENCHMARK(BM_CheckBt);

void BM_Prove(benchmark::State& state) {
  Sequent goal = make_sequent({parse_formula("nu x. [] [] x")});
  for (auto _ : state) {
    auto proof = prove(goal);
    benchmark::DoNotOptimize(proof.has_value());
  }
}
BENCHMARK(BM_Prove);

void BM_Saturate(benchmark::State& state) {
  Formula phi = parse_formula("nu x. [] x");
  ClosureTable closure(make_sequent({phi}));
  AnnotatedSequent sequent = make_annotated_sequent(
      {{phi.unfold(), TSeqAnnotation({BitString("11")})},
       {phi.unfold(), TSeqAnnotation({BitString("1")})}});
  for (auto _ : state) {
    auto result = saturate(sequent, closure);
    benchmark::DoNotOptimize(result.sequent.size());
  }
}
BENCHMARK(BM_Saturate);

void BM_AllScsGood(benchmark::State& state) {
  std::mt19937_64 rng(5);
  ConditionGraph graph;
  graph.num_nodes = static_cast<std::size_t>(state.range(0));
  graph.adjacency.resize(graph.num_nodes);
  std::bernoulli_distribution edge(0.2), flag(0.3);
  for (std::size_t v = 0; v < graph.num_nodes; ++v)
    for (std::size_t w = 0; w < graph.num_nodes; ++w)
      if (edge(rng)) graph.adjacency[v].push_back(w);
  for (int i = 0; i < 3; ++i) {
    ConditionGraph::Pair pair;
    for (std::size_t v = 0; v < graph.num_nodes; ++v) {
      pair.inplay.push_back(true);
      pair.good.push_back(flag(rng));
      pair.bad.push_back(flag(rng));
    }
    graph.pairs.push_back(std::move(pair));
  }
  for (auto _ : state) benchmark::DoNotOptimize(all_scs_good(graph).good);
}
BENCHMARK(BM_AllScsGood)->Arg(16)->Arg(64)->Arg(256);

}  // namespace
