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

#include "mutree/derivation.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace mutree {

using nlohmann::json;

std::string rule_kind_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::Ax1: return "ax1";
    case RuleKind::Ax2: return "ax2";
    case RuleKind::OrRule: return "or";
    case RuleKind::AndRule: return "and";
    case RuleKind::BoxRule: return "box";
    case RuleKind::MuRule: return "mu";
    case RuleKind::NuRule: return "nu";
    case RuleKind::Resolve: return "resolve";
    case RuleKind::Compress: return "compress";
    case RuleKind::Discharge: return "discharge";
    case RuleKind::Token: return "token";
  }
  return "?";
}

std::string RuleLabel::to_string() const {
  switch (kind) {
    case RuleKind::Compress:
      return "compress[" + std::to_string(compress_position) + "," + compress_pattern.str() +
             "]";
    case RuleKind::Discharge:
      return "discharge(" + token + ")";
    case RuleKind::Token:
      return "[" + token + "]";
    default:
      return rule_kind_name(kind);
  }
}

AnnotatedSequent make_annotated_sequent(std::vector<AnnotatedFormula> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return elements;
}

AnnotatedSequent annotate_epsilons(const Sequent& sequent, std::optional<unsigned> max_even) {
  std::vector<AnnotatedFormula> elements;
  for (const Formula& f : sequent)
    elements.push_back({f, TSeqAnnotation::epsilons(max_even)});
  return make_annotated_sequent(std::move(elements));
}

Sequent erase_annotations(const AnnotatedSequent& sequent) {
  std::vector<Formula> formulas;
  for (const AnnotatedFormula& e : sequent) formulas.push_back(e.formula);
  return make_sequent(std::move(formulas));
}

std::string to_string(const AnnotatedSequent& sequent) {
  std::string out;
  for (std::size_t i = 0; i < sequent.size(); ++i) {
    if (i > 0) out += ", ";
    out += sequent[i].formula.to_string() + "^" + to_string(sequent[i].annotation);
  }
  return out;
}

std::vector<ProofLasso> enumerate_simple_lassos(
    const std::vector<std::vector<std::size_t>>& adjacency, std::size_t root) {
  std::vector<ProofLasso> out;
  if (adjacency.empty()) return out;
  std::vector<std::size_t> path{root};
  std::vector<int> on_path_at(adjacency.size(), -1);
  on_path_at[root] = 0;

  std::function<void()> dfs = [&] {
    std::size_t v = path.back();
    for (std::size_t w : adjacency[v]) {
      if (on_path_at[w] >= 0) {
        ProofLasso lasso;
        lasso.stem.assign(path.begin(), path.begin() + on_path_at[w]);
        lasso.cycle.assign(path.begin() + on_path_at[w], path.end());
        out.push_back(std::move(lasso));
      } else {
        on_path_at[w] = static_cast<int>(path.size());
        path.push_back(w);
        dfs();
        path.pop_back();
        on_path_at[w] = -1;
      }
    }
  };
  dfs();
  return out;
}

// ----------------------------------------------------------------- JSON IO

namespace {

json label_to_json(const RuleLabel& label, const std::optional<Formula>& principal) {
  json node = json::object();
  if (label.kind == RuleKind::Token) {
    node["companion-of"] = label.token;
    return node;
  }
  node["rule"] = rule_kind_name(label.kind);
  if (label.kind == RuleKind::Compress) {
    node["k"] = label.compress_position;
    node["pattern"] = label.compress_pattern.str();
  }
  if (label.kind == RuleKind::Discharge) node["discharge"] = label.token;
  if (principal) node["principal"] = principal->to_string();
  return node;
}

json node_to_json(const NwDerivation& d, std::size_t v) {
  const auto& node = d.nodes[v];
  json out = label_to_json(node.label, node.principal);
  json sequent = json::array();
  for (const Formula& f : node.sequent) sequent.push_back(f.to_string());
  out["sequent"] = sequent;
  if (!node.children.empty()) {
    json children = json::array();
    for (std::size_t c : node.children) children.push_back(node_to_json(d, c));
    out["children"] = children;
  }
  return out;
}

json node_to_json(const BtDerivation& d, std::size_t v) {
  const auto& node = d.nodes[v];
  json out = label_to_json(node.label, node.principal);
  json sequent = json::array();
  for (const AnnotatedFormula& e : node.sequent) {
    json element = json::object();
    element["formula"] = e.formula.to_string();
    json annotation = json::array();
    for (const BitString& s : e.annotation.components()) annotation.push_back(s.str());
    element["annotation"] = annotation;
    sequent.push_back(element);
  }
  out["sequent"] = sequent;
  if (!node.children.empty()) {
    json children = json::array();
    for (std::size_t c : node.children) children.push_back(node_to_json(d, c));
    out["children"] = children;
  }
  return out;
}

RuleLabel label_from_json(const json& node) {
  if (node.contains("companion-of"))
    return RuleLabel::leaf_token(node.at("companion-of").get<std::string>());
  if (!node.contains("rule")) throw ProofFormatError("node without rule or companion-of");
  std::string rule = node.at("rule").get<std::string>();
  for (RuleKind kind : {RuleKind::Ax1, RuleKind::Ax2, RuleKind::OrRule, RuleKind::AndRule,
                        RuleKind::BoxRule, RuleKind::MuRule, RuleKind::NuRule, RuleKind::Resolve,
                        RuleKind::Discharge}) {
    if (rule == rule_kind_name(kind)) {
      RuleLabel label = RuleLabel::plain(kind);
      if (kind == RuleKind::Discharge) {
        if (!node.contains("discharge")) throw ProofFormatError("discharge node without token");
        label.token = node.at("discharge").get<std::string>();
      }
      return label;
    }
  }
  if (rule == "compress") {
    if (!node.contains("k") || !node.contains("pattern"))
      throw ProofFormatError("compress node needs k and pattern");
    return RuleLabel::compress(node.at("k").get<int>(),
                               BitString(node.at("pattern").get<std::string>()));
  }
  throw ProofFormatError("unknown rule '" + rule + "'");
}

template <class D, class SeqParser>
std::size_t node_from_json(D& d, const json& node, std::size_t parent, SeqParser&& parse_seq) {
  if (!node.contains("sequent")) throw ProofFormatError("node without sequent");
  std::size_t v = d.add_node(parent, parse_seq(node.at("sequent")), label_from_json(node));
  if (node.contains("principal"))
    d.nodes[v].principal = parse_formula(node.at("principal").get<std::string>(), true);
  if (node.contains("children"))
    for (const json& child : node.at("children")) node_from_json(d, child, v, parse_seq);
  return v;
}

Sequent sequent_from_json(const json& array) {
  std::vector<Formula> formulas;
  for (const json& entry : array)
    formulas.push_back(parse_formula(entry.get<std::string>(), true));
  return make_sequent(std::move(formulas));
}

AnnotatedSequent annotated_sequent_from_json(const json& array) {
  std::vector<AnnotatedFormula> elements;
  for (const json& entry : array) {
    if (!entry.contains("formula") || !entry.contains("annotation"))
      throw ProofFormatError("annotated element needs formula and annotation");
    std::vector<BitString> components;
    for (const json& s : entry.at("annotation"))
      components.emplace_back(s.get<std::string>());
    elements.push_back({parse_formula(entry.at("formula").get<std::string>(), true),
                        TSeqAnnotation(components)});
  }
  return make_annotated_sequent(std::move(elements));
}

json parse_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ProofFormatError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

NwDerivation parse_nw_proof(std::istream& in) {
  json doc = parse_json(in);
  if (doc.value("system", "nw") != "nw") throw ProofFormatError("expected system \"nw\"");
  NwDerivation d;
  node_from_json(d, doc.at("root"), NwDerivation::npos, sequent_from_json);
  return d;
}

BtDerivation parse_bt_proof(std::istream& in) {
  json doc = parse_json(in);
  if (doc.value("system", "bt") != "bt") throw ProofFormatError("expected system \"bt\"");
  BtDerivation d;
  node_from_json(d, doc.at("root"), BtDerivation::npos, annotated_sequent_from_json);
  return d;
}

NwDerivation parse_nw_proof_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProofFormatError("cannot open " + path);
  return parse_nw_proof(in);
}

BtDerivation parse_bt_proof_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProofFormatError("cannot open " + path);
  return parse_bt_proof(in);
}

void write_proof(std::ostream& out, const NwDerivation& derivation) {
  json doc;
  doc["system"] = "nw";
  doc["root"] = node_to_json(derivation, 0);
  out << doc.dump(2) << "\n";
}

void write_proof(std::ostream& out, const BtDerivation& derivation) {
  json doc;
  doc["system"] = "bt";
  doc["root"] = node_to_json(derivation, 0);
  out << doc.dump(2) << "\n";
}

namespace {

std::string dot_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

template <class D>
std::string proof_to_dot_impl(const D& d, const std::vector<std::string>& sequent_texts) {
  std::ostringstream out;
  out << "digraph proof {\n  node [shape=box, fontsize=10];\n";
  for (std::size_t v = 0; v < d.nodes.size(); ++v) {
    const auto& node = d.nodes[v];
    std::string label = sequent_texts[v] + "\\n" + node.label.to_string();
    if (node.principal) label += " @ " + dot_escape(node.principal->to_string());
    std::string extras;
    if (node.label.kind == RuleKind::Compress && !node.label.compress_pattern.empty() &&
        node.label.compress_pattern.bit(node.label.compress_pattern.size() - 1))
      extras = ", style=filled, fillcolor=palegreen";  // progress step
    if (node.label.kind == RuleKind::Discharge) extras = ", style=filled, fillcolor=lightblue";
    out << "  n" << v << " [label=\"" << dot_escape(label) << "\"" << extras << "];\n";
  }
  for (std::size_t v = 0; v < d.nodes.size(); ++v) {
    for (std::size_t c : d.nodes[v].children) out << "  n" << v << " -> n" << c << ";\n";
    if (d.nodes[v].label.kind == RuleKind::Token) {
      std::size_t companion = d.companion_of(v);
      if (companion != D::npos)
        out << "  n" << v << " -> n" << companion << " [style=dashed, constraint=false];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::string proof_to_dot(const NwDerivation& derivation) {
  std::vector<std::string> texts;
  for (const auto& node : derivation.nodes) texts.push_back(to_string(node.sequent));
  return proof_to_dot_impl(derivation, texts);
}

std::string proof_to_dot(const BtDerivation& derivation) {
  std::vector<std::string> texts;
  for (const auto& node : derivation.nodes) texts.push_back(to_string(node.sequent));
  return proof_to_dot_impl(derivation, texts);
}

}  // namespace mutree
