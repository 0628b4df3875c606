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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mutree/automaton.hpp"
#include "mutree/btproof.hpp"
#include "mutree/closure.hpp"
#include "mutree/derivation.hpp"
#include "mutree/determinize.hpp"
#include "mutree/formula.hpp"
#include "mutree/nwproof.hpp"

namespace {

using namespace mutree;

constexpr int kOk = 0;        // accepted / valid / agree
constexpr int kRejected = 1;  // rejected / invalid / disagree / none-within-budget
constexpr int kUsage = 2;     // usage or input error

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

Sequent read_sequent_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Formula> formulas;
  std::string line;
  while (std::getline(in, line)) {
    std::string trimmed = line;
    if (auto pos = trimmed.find('#'); pos != std::string::npos) trimmed.resize(pos);
    bool blank = trimmed.find_first_not_of(" \t\r") == std::string::npos;
    if (!blank) formulas.push_back(parse_formula(trimmed));
  }
  if (formulas.empty()) throw std::runtime_error("no formulas in " + path);
  return make_sequent(std::move(formulas));
}

struct FormulaOptions {
  std::string text;
  std::string input;

  Sequent sequent() const {
    if (!text.empty()) return make_sequent({parse_formula(text)});
    if (!input.empty()) return read_sequent_file(input);
    throw std::runtime_error("need --formula or --in");
  }
};

int run_formula_parse(const FormulaOptions& options) {
  for (const Formula& f : options.sequent()) std::cout << f.to_string() << "\n";
  return kOk;
}

int run_formula_closure(const FormulaOptions& options) {
  ClosureTable table(options.sequent());
  std::cout << "members: " << table.members().size() << "\n";
  for (const Formula& f : table.members()) std::cout << "  " << f.to_string() << "\n";
  std::cout << "fixpoints:\n";
  for (const Formula& f : table.fixpoints())
    std::cout << "  omega=" << table.omega(f) << "  " << f.to_string() << "\n";
  if (table.max_even())
    std::cout << "max-even: " << *table.max_even() << "\n";
  else
    std::cout << "max-even: none\n";
  return kOk;
}

int run_determinize(const std::string& input, const std::string& output,
                    const std::string& dict, const std::string& dot) {
  StreamAutomaton src = parse_automaton_file(input);
  std::ostringstream out;
  std::string dictionary;
  StreamAutomaton det;
  if (std::holds_alternative<BuchiAcceptance>(src.acceptance())) {
    auto result = det_buchi(src);
    det = result.automaton;
    dictionary = render_dictionary(result, src);
  } else if (std::holds_alternative<ParityAcceptance>(src.acceptance())) {
    auto result = det_parity(src);
    det = result.automaton;
    dictionary = render_dictionary(result, src);
  } else {
    throw std::runtime_error("input is already a (deterministic) Rabin automaton");
  }
  write_automaton(out, det);
  if (output.empty())
    std::cout << out.str();
  else
    write_file(output, out.str());
  if (!dict.empty()) write_file(dict, dictionary);
  if (!dot.empty()) write_file(dot, automaton_to_dot(det));
  std::cerr << "determinized: " << det.num_states() << " macrostates, "
            << std::get<RabinAcceptance>(det.acceptance()).pairs.size() << " Rabin pairs\n";
  return kOk;
}

int run_accepts(const std::string& input, const std::string& stem, const std::string& loop) {
  StreamAutomaton aut = parse_automaton_file(input);
  Lasso lasso{split_words(stem), split_words(loop)};
  bool verdict = accepts_lasso(aut, lasso);
  std::cout << (verdict ? "accept" : "reject") << "\n";
  return verdict ? kOk : kRejected;
}

int run_run(const std::string& input, const std::string& stem, const std::string& loop,
            std::size_t steps) {
  StreamAutomaton aut = parse_automaton_file(input);
  Lasso lasso{split_words(stem), split_words(loop)};
  for (StateId q : run_prefix(aut, lasso, steps)) std::cout << aut.state_name(q) << "\n";
  return kOk;
}

int run_compare(const std::string& a_path, const std::string& b_path, std::size_t max_stem,
                std::size_t max_loop, std::optional<std::uint64_t> samples, std::uint64_t seed,
                unsigned jobs) {
  StreamAutomaton a = parse_automaton_file(a_path);
  StreamAutomaton b = parse_automaton_file(b_path);
  std::optional<SamplingConfig> sampling;
  if (samples) sampling = SamplingConfig{*samples, seed};
  CompareReport report = compare_on_lassos(a, b, max_stem, max_loop, sampling, jobs);
  if (report.agree) {
    std::cout << "agree on " << report.tested << " lassos\n";
    return kOk;
  }
  std::cout << "disagree: stem=\"";
  for (std::size_t i = 0; i < report.disagreement->stem.size(); ++i)
    std::cout << (i ? " " : "") << report.disagreement->stem[i];
  std::cout << "\" loop=\"";
  for (std::size_t i = 0; i < report.disagreement->loop.size(); ++i)
    std::cout << (i ? " " : "") << report.disagreement->loop[i];
  std::cout << "\" left=" << (report.verdict_a ? "accept" : "reject")
            << " right=" << (report.verdict_b ? "accept" : "reject") << "\n";
  return kRejected;
}

int run_proof_check(const std::string& system, const std::string& input,
                    const std::string& dot) {
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot open " + input);
  try {
    if (system == "nw") {
      NwDerivation d = parse_nw_proof(in);
      if (!dot.empty()) write_file(dot, proof_to_dot(d));
      ProofCheckResult result = check_nw(d);
      if (result.proof) {
        std::cout << "proof\n";
        return kOk;
      }
      std::cout << "not-a-proof; bad strongly connected subgraph:";
      for (std::size_t v : result.witness) std::cout << " " << v;
      std::cout << "\n";
      return kRejected;
    }
    if (system == "bt") {
      BtDerivation d = parse_bt_proof(in);
      if (!dot.empty()) write_file(dot, proof_to_dot(d));
      BtCheckReport report = check_bt(d);
      if (report.proof) {
        std::cout << "proof\n";
        return kOk;
      }
      std::cout << "not-a-proof; bad strongly connected subgraph:";
      for (std::size_t v : report.witness) std::cout << " " << v;
      std::cout << "\n";
      return kRejected;
    }
    throw std::runtime_error("--system must be nw or bt");
  } catch (const StructuralError& e) {
    std::cout << "not-a-proof; structural error: " << e.what() << "\n";
    return kRejected;
  }
}

int run_proof_translate(const std::string& input, const std::string& output,
                        const std::string& dot) {
  NwDerivation nw = parse_nw_proof_file(input);
  BtDerivation bt;
  try {
    bt = translate_nw_to_bt(nw);
  } catch (const NotApplicable& e) {
    std::cout << "not-a-proof: " << e.what() << "\n";
    return kRejected;
  } catch (const StructuralError& e) {
    std::cout << "not-a-proof; structural error: " << e.what() << "\n";
    return kRejected;
  }
  std::ostringstream out;
  write_proof(out, bt);
  if (output.empty())
    std::cout << out.str();
  else
    write_file(output, out.str());
  if (!dot.empty()) write_file(dot, proof_to_dot(bt));
  std::cerr << "translated: " << bt.nodes.size() << " nodes\n";
  return kOk;
}

int run_prove(const FormulaOptions& options, std::size_t depth, const std::string& output,
              const std::string& dot) {
  Sequent sequent = options.sequent();
  ProveOptions prove_options;
  prove_options.node_budget = depth;
  auto proof = prove(sequent, prove_options);
  if (!proof) {
    std::cout << "none-within-budget\n";
    return kRejected;
  }
  std::ostringstream out;
  write_proof(out, *proof);
  if (output.empty())
    std::cout << out.str();
  else
    write_file(output, out.str());
  if (!dot.empty()) write_file(dot, proof_to_dot(*proof));
  std::cerr << "proof found: " << proof->nodes.size() << " nodes\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"binary-tree determinization of stream automata and the annotated cyclic "
               "proof system built on it"};
  app.require_subcommand(1);

  // ---- formula
  auto* formula = app.add_subcommand("formula", "parse formulas and inspect closures");
  formula->require_subcommand(1);
  FormulaOptions formula_options;
  auto* parse_cmd = formula->add_subcommand("parse", "parse and reprint formulas");
  parse_cmd->add_option("--formula", formula_options.text, "formula text");
  parse_cmd->add_option("--in", formula_options.input, "sequent file, one formula per line");
  auto* closure_cmd = formula->add_subcommand("closure", "closure, fixpoints and priorities");
  closure_cmd->add_option("--formula", formula_options.text, "formula text");
  closure_cmd->add_option("--in", formula_options.input, "sequent file, one formula per line");

  // ---- aut
  auto* aut = app.add_subcommand("aut", "stream automata");
  aut->require_subcommand(1);
  std::string aut_in, aut_out, aut_dict, aut_dot, aut_b;
  std::string stem_text, loop_text;
  std::size_t run_steps = 10, max_stem = 3, max_loop = 4;
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  auto* det_cmd = aut->add_subcommand("determinize", "binary-tree determinization to Rabin");
  det_cmd->add_option("--in", aut_in, "input automaton (buchi or parity)")->required();
  det_cmd->add_option("--out", aut_out, "output automaton file (stdout if omitted)");
  det_cmd->add_option("--dict", aut_dict, "macrostate dictionary file");
  det_cmd->add_option("--dot", aut_dot, "DOT export of the result");
  det_cmd->add_option("--emit-dot", aut_dot, "alias for --dot");

  auto* accepts_cmd = aut->add_subcommand("accepts", "lasso membership");
  accepts_cmd->add_option("--in", aut_in)->required();
  accepts_cmd->add_option("--stem", stem_text, "stem letters, whitespace separated");
  accepts_cmd->add_option("--loop", loop_text, "loop letters, nonempty")->required();

  auto* run_cmd = aut->add_subcommand("run", "run prefix of a deterministic automaton");
  run_cmd->add_option("--in", aut_in)->required();
  run_cmd->add_option("--stem", stem_text);
  run_cmd->add_option("--loop", loop_text)->required();
  run_cmd->add_option("-n,--steps", run_steps, "number of steps");

  auto* compare_cmd = aut->add_subcommand("compare", "lasso-language comparison");
  compare_cmd->add_option("--a", aut_in, "left automaton")->required();
  compare_cmd->add_option("--b", aut_b, "right automaton")->required();
  compare_cmd->add_option("--max-stem", max_stem);
  compare_cmd->add_option("--max-loop", max_loop);
  compare_cmd->add_option("--samples", samples, "sample count above the exhaustive budget");
  compare_cmd->add_option("--seed", seed);
  compare_cmd->add_option("--jobs", jobs, "parallel workers");

  // ---- proof
  auto* proof = app.add_subcommand("proof", "check and translate proofs");
  proof->require_subcommand(1);
  std::string system = "nw", proof_in, proof_out, proof_dot;
  auto* check_cmd = proof->add_subcommand("check", "check an NW or BT proof");
  check_cmd->add_option("--system", system, "nw | bt")->required();
  check_cmd->add_option("--in", proof_in)->required();
  check_cmd->add_option("--emit-dot", proof_dot, "DOT export of the proof graph");
  auto* translate_cmd = proof->add_subcommand("translate", "NW proof to BT proof");
  translate_cmd->add_option("--in", proof_in)->required();
  translate_cmd->add_option("--out", proof_out, "output proof file (stdout if omitted)");
  translate_cmd->add_option("--emit-dot", proof_dot);

  // ---- prove
  auto* prove_cmd = app.add_subcommand("prove", "bounded BT proof search");
  FormulaOptions prove_options;
  std::size_t depth = 100000;
  std::string prove_out, prove_dot;
  prove_cmd->add_option("--formula", prove_options.text, "formula text");
  prove_cmd->add_option("--in", prove_options.input, "sequent file");
  prove_cmd->add_option("--depth", depth, "node budget");
  prove_cmd->add_option("--out", prove_out, "output proof file");
  prove_cmd->add_option("--emit-dot", prove_dot);

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse_cmd->parsed()) return run_formula_parse(formula_options);
    if (closure_cmd->parsed()) return run_formula_closure(formula_options);
    if (det_cmd->parsed()) return run_determinize(aut_in, aut_out, aut_dict, aut_dot);
    if (accepts_cmd->parsed()) return run_accepts(aut_in, stem_text, loop_text);
    if (run_cmd->parsed()) return run_run(aut_in, stem_text, loop_text, run_steps);
    if (compare_cmd->parsed())
      return run_compare(aut_in, aut_b, max_stem, max_loop, samples, seed, jobs);
    if (check_cmd->parsed()) return run_proof_check(system, proof_in, proof_dot);
    if (translate_cmd->parsed()) return run_proof_translate(proof_in, proof_out, proof_dot);
    if (prove_cmd->parsed()) return run_prove(prove_options, depth, prove_out, prove_dot);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::cerr << "error: no subcommand\n";
  return kUsage;
}
