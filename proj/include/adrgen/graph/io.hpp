//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "adrgen/errors.hpp"
#include "adrgen/graph/assoc.hpp"
#include "adrgen/graph/vocab.hpp"

namespace adrgen::graph {

inline constexpr int kVocabFormatVersion = 1;
inline constexpr int kAssocFormatVersion = 1;

// vocab.jsonl: a header record {n_molecules, version} followed by one
// record per motif, in index order.
inline std::string vocab_to_jsonl(const MotifVocabulary &v) {
  std::ostringstream out;
  nlohmann::json header{{"n_molecules", v.n_molecules},
                        {"version", kVocabFormatVersion}};
  out << header.dump() << "\n";
  for (const VocabEntry &e : v.entries) {
    nlohmann::json j{{"canonical", e.canonical},
                     {"index", e.index},
                     {"df", e.df},
                     {"avg_tfidf", e.avg_tfidf}};
    out << j.dump() << "\n";
  }
  return out.str();
}

inline MotifVocabulary vocab_from_jsonl(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw Error(errc::format_error, "vocab: empty file");
  nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.contains("version"))
    throw Error(errc::format_error, "vocab: bad header");
  if (header["version"].get<int>() != kVocabFormatVersion)
    throw Error(errc::format_error, "vocab: unsupported version");
  MotifVocabulary v;
  v.n_molecules = header.at("n_molecules").get<long>();
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    nlohmann::json j = nlohmann::json::parse(line);
    VocabEntry e;
    e.canonical = j.at("canonical").get<std::string>();
    e.index = j.at("index").get<int>();
    e.df = j.at("df").get<long>();
    e.avg_tfidf = j.at("avg_tfidf").get<double>();
    v.entries.push_back(std::move(e));
  }
  v.rebuild_lookup();
  return v;
}

inline nlohmann::json assoc_to_json(const AssociationGraph &g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const AssocNode &n : g.nodes) {
    if (n.kind == AssocNode::Kind::motif)
      nodes.push_back({{"kind", "motif"}, {"motif_index", n.motif_index}});
    else
      nodes.push_back({{"kind", "molecule"}, {"drug_id", n.drug_id}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const AssocEdge &e : g.edges)
    edges.push_back(
        {{"u", e.u},
         {"v", e.v},
         {"kind", e.kind == AssocEdge::Kind::mol_motif ? "mol_motif"
                                                       : "motif_motif"},
         {"weight", e.weight}});
  nlohmann::json init = nlohmann::json::array();
  for (const auto &sparse : g.node_init) {
    nlohmann::json entry = nlohmann::json::object();
    for (const auto &[idx, val] : sparse)
      entry[std::to_string(idx)] = val;
    init.push_back(entry);
  }
  nlohmann::json stats{
      {"mean", g.feature_stats.mean},
      {"stdev", g.feature_stats.stdev},
  };
  return nlohmann::json{{"version", kAssocFormatVersion},
                        {"vocab_size", g.vocab_size},
                        {"nodes", nodes},
                        {"edges", edges},
                        {"node_init", init},
                        {"standardization", stats}};
}

inline AssociationGraph assoc_from_json(const nlohmann::json &j) {
  if (!j.contains("version") || j["version"].get<int>() != kAssocFormatVersion)
    throw Error(errc::format_error, "association graph: unsupported version");
  AssociationGraph g;
  g.vocab_size = j.at("vocab_size").get<int>();
  for (const auto &jn : j.at("nodes")) {
    AssocNode n;
    if (jn.at("kind") == "motif") {
      n.kind = AssocNode::Kind::motif;
      n.motif_index = jn.at("motif_index").get<int>();
    } else {
      n.kind = AssocNode::Kind::molecule;
      n.drug_id = jn.at("drug_id").get<std::string>();
    }
    g.nodes.push_back(std::move(n));
  }
  for (const auto &je : j.at("edges")) {
    AssocEdge e;
    e.u = je.at("u").get<int>();
    e.v = je.at("v").get<int>();
    e.kind = je.at("kind") == "mol_motif" ? AssocEdge::Kind::mol_motif
                                          : AssocEdge::Kind::motif_motif;
    e.weight = je.at("weight").get<double>();
    g.edges.push_back(e);
  }
  for (const auto &jn : j.at("node_init")) {
    std::map<int, double> sparse;
    for (auto it = jn.begin(); it != jn.end(); ++it)
      sparse[std::stoi(it.key())] = it.value().get<double>();
    g.node_init.push_back(std::move(sparse));
  }
  const auto &js = j.at("standardization");
  for (int c = 0; c < kNodeFeatureDim; ++c) {
    g.feature_stats.mean[static_cast<std::size_t>(c)] =
        js.at("mean").at(static_cast<std::size_t>(c)).get<double>();
    g.feature_stats.stdev[static_cast<std::size_t>(c)] =
        js.at("stdev").at(static_cast<std::size_t>(c)).get<double>();
  }
  return g;
}

inline void write_text_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(errc::file_not_found, "cannot write " + path);
  out << text;
}

inline std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(errc::file_not_found, path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

} // namespace adrgen::graph
