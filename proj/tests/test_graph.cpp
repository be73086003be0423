//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <map>
#include <set>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "adrgen/chem/perceive.hpp"
#include "adrgen/chem/smiles.hpp"
#include "adrgen/graph/assoc.hpp"
#include "adrgen/graph/features.hpp"
#include "adrgen/graph/io.hpp"
#include "adrgen/graph/vocab.hpp"
#include "support/test_rng.hpp"

using namespace adrgen;
using namespace adrgen::graph;
using adrgen::test::TestRng;

static chem::PerceivedMolecule mol(const std::string &smi) {
  return chem::perceive(chem::parse_smiles(smi));
}

// ---- featurization ----

TEST_CASE("methane featurizes to 1x9 nodes and 0x3 edges") {
  auto t = featurize_molecule(mol("C"));
  CHECK(t.n_atoms == 1);
  CHECK(t.node_feat.size() == 9);
  CHECK(t.edge_feat.empty());
  CHECK(t.edge_index.empty());
}

TEST_CASE("benzyl chloride: 8x9 nodes, 16x3 directed edge rows") {
  auto t = featurize_molecule(mol("ClCc1ccccc1"));
  CHECK(t.n_atoms == 8);
  CHECK(t.node_feat.size() == 8 * 9);
  CHECK(t.edge_index.size() == 16);
  CHECK(t.edge_feat.size() == 16 * 3);
}

TEST_CASE("ethane: both node rows identical") {
  auto t = featurize_molecule(mol("CC"));
  REQUIRE(t.n_atoms == 2);
  for (int c = 0; c < 9; ++c)
    CHECK(t.node_feat[static_cast<std::size_t>(c)] ==
          t.node_feat[static_cast<std::size_t>(9 + c)]);
}

TEST_CASE("standardization only touches numeric columns") {
  std::vector<chem::PerceivedMolecule> corpus{mol("CCO"), mol("c1ccccc1"),
                                              mol("CC(=O)N")};
  FeatureStats stats = compute_feature_stats(corpus);
  auto raw = featurize_molecule(corpus[0]);
  auto std_t = featurize_molecule(corpus[0], &stats);
  for (int i = 0; i < raw.n_atoms; ++i)
    for (int c : {3, 5, 6})
      CHECK(raw.node_feat[static_cast<std::size_t>(i * 9 + c)] ==
            std_t.node_feat[static_cast<std::size_t>(i * 9 + c)]);
  double acc = 0.0;
  long count = 0;
  for (const auto &p : corpus) {
    auto t = featurize_molecule(p, &stats);
    for (int i = 0; i < t.n_atoms; ++i) {
      acc += t.node_feat[static_cast<std::size_t>(i * 9)];
      ++count;
    }
  }
  CHECK(std::abs(acc / static_cast<double>(count)) < 1e-12);
}

TEST_CASE("isotope overrides atomic mass") {
  auto t = featurize_molecule(mol("[13CH4]"));
  CHECK(t.node_feat[7] == 13.0);
  auto t2 = featurize_molecule(mol("C"));
  CHECK(t2.node_feat[7] == Catch::Approx(12.011));
}

// ---- tfidf / pmi ----

TEST_CASE("tfidf examples") {
  CHECK(tfidf_weight(2, 3, 8) == Catch::Approx(2.0 * std::log(2.0)));
  CHECK(tfidf_weight(1, 1, 1) == Catch::Approx(std::log(0.5)));
  CHECK_THROWS_AS(tfidf_weight(0, 1, 1), Error);
  CHECK_THROWS_AS(tfidf_weight(1, 0, 1), Error);
}

TEST_CASE("pmi examples") {
  CHECK(pmi_weight(2, 2, 2, 4) == Catch::Approx(std::log(2.0)));
  CHECK(pmi_weight(1, 3, 3, 4) == 0.0); // raw negative, clamped
  CHECK(pmi_weight(1, 2, 2, 4) == 0.0); // exact independence
  CHECK(pmi_weight(0, 2, 2, 4) == 0.0);
  CHECK_THROWS_AS(pmi_weight(3, 2, 2, 4), Error);
  CHECK_THROWS_AS(pmi_weight(1, 0, 2, 4), Error);
}

// ---- vocabulary ----

TEST_CASE("vocabulary document frequencies") {
  MotifVocabulary v = build_vocabulary({{"d1", {"A", "A", "B"}}});
  REQUIRE(v.size() == 2);
  CHECK(v.entries[static_cast<std::size_t>(v.index_of("A"))].df == 1);
  CHECK(v.entries[static_cast<std::size_t>(v.index_of("B"))].df == 1);
}

TEST_CASE("ubiquitous motifs score negative avg tfidf") {
  std::vector<std::pair<std::string, std::vector<std::string>>> corpus{
      {"d1", {"A"}}, {"d2", {"A"}}, {"d3", {"A"}}, {"d4", {"A", "B"}}};
  MotifVocabulary v = build_vocabulary(corpus);
  CHECK(v.entries[static_cast<std::size_t>(v.index_of("A"))].avg_tfidf ==
        Catch::Approx(std::log(4.0 / 5.0)));
  CHECK(v.entries[static_cast<std::size_t>(v.index_of("A"))].avg_tfidf < 0.0);
}

TEST_CASE("vocabulary is order independent") {
  std::vector<std::pair<std::string, std::vector<std::string>>> corpus{
      {"d1", {"A", "B"}}, {"d2", {"B"}}, {"d3", {"C", "B"}}};
  auto reversed = corpus;
  std::reverse(reversed.begin(), reversed.end());
  MotifVocabulary a = build_vocabulary(corpus);
  MotifVocabulary b = build_vocabulary(reversed);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.entries[static_cast<std::size_t>(i)].canonical ==
          b.entries[static_cast<std::size_t>(i)].canonical);
    CHECK(a.entries[static_cast<std::size_t>(i)].df ==
          b.entries[static_cast<std::size_t>(i)].df);
  }
}

TEST_CASE("vocabulary index order: df desc, canonical asc") {
  std::vector<std::pair<std::string, std::vector<std::string>>> corpus{
      {"d1", {"Z", "A"}}, {"d2", {"Z"}}, {"d3", {"A"}}, {"d4", {"M"}}};
  MotifVocabulary v = build_vocabulary(corpus);
  CHECK(v.entries[0].canonical == "A");
  CHECK(v.entries[1].canonical == "Z");
  CHECK(v.entries[2].canonical == "M");
}

TEST_CASE("empty corpus raises") {
  CHECK_THROWS_AS(build_vocabulary({}), Error);
}

// ---- association graph ----

static MoleculeMotifInfo info(const std::string &id,
                              std::vector<std::string> motifs,
                              std::vector<std::pair<int, int>> adj = {}) {
  MoleculeMotifInfo i;
  i.drug_id = id;
  i.motifs = std::move(motifs);
  i.adjacent_fragments = std::move(adj);
  return i;
}

TEST_CASE("one molecule, two adjacent motifs: 3 nodes, 2+1 edges") {
  // with a second molecule in the corpus the A-B pair has positive PMI
  std::vector<MoleculeMotifInfo> corpus{info("d1", {"A", "B"}, {{0, 1}}),
                                        info("d2", {"C"})};
  MotifVocabulary v = build_vocabulary({{"d1", {"A", "B"}}, {"d2", {"C"}}});
  AssociationGraph g = build_association_graph(corpus, v);
  CHECK(g.nodes.size() == 5);
  int mol_motif = 0, motif_motif = 0;
  int d1 = g.find_molecule_node("d1");
  for (const AssocEdge &e : g.edges) {
    if (e.kind == AssocEdge::Kind::mol_motif) {
      if (e.u == d1)
        ++mol_motif;
    } else {
      ++motif_motif;
    }
  }
  CHECK(mol_motif == 2);
  CHECK(motif_motif == 1);
}

TEST_CASE("single-molecule corpus: PMI of its pair is zero and dropped") {
  std::vector<MoleculeMotifInfo> corpus{info("d1", {"A", "B"}, {{0, 1}})};
  MotifVocabulary v = build_vocabulary({{"d1", {"A", "B"}}});
  AssociationGraph g = build_association_graph(corpus, v);
  CHECK(g.nodes.size() == 3);
  for (const AssocEdge &e : g.edges)
    CHECK(e.kind == AssocEdge::Kind::mol_motif);
}

TEST_CASE("motif pair never adjacent: no motif-motif edge") {
  std::vector<MoleculeMotifInfo> corpus{info("d1", {"A", "B"}),
                                        info("d2", {"A"})};
  MotifVocabulary v = build_vocabulary({{"d1", {"A", "B"}}, {"d2", {"A"}}});
  AssociationGraph g = build_association_graph(corpus, v);
  for (const AssocEdge &e : g.edges)
    CHECK(e.kind == AssocEdge::Kind::mol_motif);
}

TEST_CASE("repeated motif: bag-of-words 2, single edge with tf=2") {
  std::vector<MoleculeMotifInfo> corpus{info("d1", {"A", "A"}, {{0, 1}}),
                                        info("d2", {"B"})};
  MotifVocabulary v = build_vocabulary({{"d1", {"A", "A"}}, {"d2", {"B"}}});
  AssociationGraph g = build_association_graph(corpus, v);
  int d1 = g.find_molecule_node("d1");
  REQUIRE(d1 >= 0);
  int ia = v.index_of("A");
  CHECK(g.node_init[static_cast<std::size_t>(d1)].at(ia) == 2.0);
  int edges_from_d1 = 0;
  for (const AssocEdge &e : g.edges)
    if (e.kind == AssocEdge::Kind::mol_motif && e.u == d1) {
      ++edges_from_d1;
      CHECK(e.weight == Catch::Approx(tfidf_weight(2, 1, 2)));
    }
  CHECK(edges_from_d1 == 1);
  for (const AssocEdge &e : g.edges)
    CHECK(e.kind == AssocEdge::Kind::mol_motif); // no self motif-motif edge
}

TEST_CASE("unknown corpus motif raises UnknownMotif") {
  std::vector<MoleculeMotifInfo> corpus{info("d1", {"A", "X"})};
  MotifVocabulary v = build_vocabulary({{"d1", {"A"}}});
  CHECK_THROWS_MATCHES(build_association_graph(corpus, v), Error,
                       Catch::Matchers::Predicate<Error>([](const Error &e) {
                         return e.code() == errc::unknown_motif;
                       }));
}

TEST_CASE("attach_query_molecule") {
  std::vector<MoleculeMotifInfo> corpus{info("d1", {"A", "B"}, {{0, 1}}),
                                        info("d2", {"A"})};
  MotifVocabulary v = build_vocabulary({{"d1", {"A", "B"}}, {"d2", {"A"}}});
  AssociationGraph g = build_association_graph(corpus, v);

  SECTION("all motifs known: full bag-of-words mass") {
    auto r = attach_query_molecule(g, v, {"A", "B", "A"}, "q1");
    CHECK(r.dropped == 0);
    double mass = 0.0;
    for (const auto &[idx, val] :
         g.node_init[static_cast<std::size_t>(r.node_id)]) {
      (void)idx;
      mass += val;
    }
    CHECK(mass == 3.0);
  }
  SECTION("one unknown of three: 2 edges, warning count 1") {
    auto r = attach_query_molecule(g, v, {"A", "B", "QQQ"}, "q2");
    CHECK(r.dropped == 1);
    int edges = 0;
    for (const AssocEdge &e : g.edges)
      if (e.u == r.node_id)
        ++edges;
    CHECK(edges == 2);
    CHECK(g.dropped_motif_warnings == 1);
  }
  SECTION("no known motifs raises NoKnownMotif") {
    CHECK_THROWS_MATCHES(attach_query_molecule(g, v, {"QQQ"}, "q3"), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e) {
                           return e.code() == errc::no_known_motif;
                         }));
  }
}

TEST_CASE("bag-of-words sums equal in-vocabulary multiset cardinality") {
  TestRng rng(2026);
  for (int iter = 0; iter < 50; ++iter) {
    int n_mols = rng.uniform_int(1, 10);
    int n_motifs = rng.uniform_int(1, 8);
    std::vector<std::pair<std::string, std::vector<std::string>>> vocab_corpus;
    std::vector<MoleculeMotifInfo> corpus;
    for (int m = 0; m < n_mols; ++m) {
      std::vector<std::string> motifs;
      int k = rng.uniform_int(1, 6);
      for (int i = 0; i < k; ++i)
        motifs.push_back("M" +
                         std::to_string(rng.uniform_int(0, n_motifs - 1)));
      vocab_corpus.push_back({"d" + std::to_string(m), motifs});
      corpus.push_back(info("d" + std::to_string(m), motifs));
    }
    MotifVocabulary v = build_vocabulary(vocab_corpus);
    AssociationGraph g = build_association_graph(corpus, v);
    for (std::size_t ni = 0; ni < g.nodes.size(); ++ni) {
      if (g.nodes[ni].kind != AssocNode::Kind::molecule)
        continue;
      double mass = 0.0;
      for (const auto &[idx, val] : g.node_init[ni]) {
        (void)idx;
        mass += val;
      }
      std::size_t mi = 0;
      for (; mi < corpus.size(); ++mi)
        if (corpus[mi].drug_id == g.nodes[ni].drug_id)
          break;
      CHECK(mass == static_cast<double>(corpus[mi].motifs.size()));
    }
  }
}

TEST_CASE("tf-idf and pmi weights match a brute-force count oracle") {
  TestRng rng(90210);
  for (int iter = 0; iter < 200; ++iter) {
    int n_mols = rng.uniform_int(2, 20);
    int n_motifs = rng.uniform_int(2, 15);
    std::vector<std::pair<std::string, std::vector<std::string>>> vc;
    std::vector<MoleculeMotifInfo> corpus;
    for (int m = 0; m < n_mols; ++m) {
      int k = rng.uniform_int(1, 6);
      std::vector<std::string> motifs;
      for (int i = 0; i < k; ++i)
        motifs.push_back("M" +
                         std::to_string(rng.uniform_int(0, n_motifs - 1)));
      std::vector<std::pair<int, int>> adj;
      for (int i = 0; i + 1 < k; ++i)
        if (rng.chance(0.7))
          adj.push_back({i, i + 1});
      vc.push_back({"d" + std::to_string(m), motifs});
      corpus.push_back(info("d" + std::to_string(m), motifs, adj));
    }
    MotifVocabulary v = build_vocabulary(vc);
    AssociationGraph g = build_association_graph(corpus, v);
    for (const AssocEdge &e : g.edges) {
      if (e.kind == AssocEdge::Kind::mol_motif) {
        const AssocNode &mol_node = g.nodes[static_cast<std::size_t>(e.u)];
        const AssocNode &motif_node = g.nodes[static_cast<std::size_t>(e.v)];
        const std::string &canon =
            v.entries[static_cast<std::size_t>(motif_node.motif_index)]
                .canonical;
        long tf = 0, df = 0;
        for (const auto &c : corpus) {
          long local = 0;
          for (const auto &m : c.motifs)
            if (m == canon)
              ++local;
          if (local > 0)
            ++df;
          if (c.drug_id == mol_node.drug_id)
            tf = local;
        }
        double expect = static_cast<double>(tf) *
                        std::log(static_cast<double>(n_mols) /
                                 (1.0 + static_cast<double>(df)));
        CHECK(std::abs(e.weight - expect) <=
              1e-12 * std::max(1.0, std::abs(expect)));
      } else {
        const std::string &ci =
            v.entries[static_cast<std::size_t>(
                          g.nodes[static_cast<std::size_t>(e.u)].motif_index)]
                .canonical;
        const std::string &cj =
            v.entries[static_cast<std::size_t>(
                          g.nodes[static_cast<std::size_t>(e.v)].motif_index)]
                .canonical;
        long c_i = 0, c_j = 0, c_ij = 0;
        for (const auto &c : corpus) {
          bool has_i = false, has_j = false;
          for (const auto &m : c.motifs) {
            has_i = has_i || m == ci;
            has_j = has_j || m == cj;
          }
          c_i += has_i;
          c_j += has_j;
          c_ij += has_i && has_j;
        }
        double expect =
            std::log((static_cast<double>(c_ij) * n_mols) /
                     (static_cast<double>(c_i) * static_cast<double>(c_j)));
        CHECK(e.weight > 0.0);
        CHECK(std::abs(e.weight - expect) <=
              1e-12 * std::max(1.0, std::abs(expect)));
      }
    }
  }
}

TEST_CASE("motif-motif adjacency and weights are symmetric") {
  TestRng rng(606);
  for (int iter = 0; iter < 30; ++iter) {
    int n_mols = rng.uniform_int(2, 12);
    std::vector<std::pair<std::string, std::vector<std::string>>> vc;
    std::vector<MoleculeMotifInfo> corpus;
    for (int m = 0; m < n_mols; ++m) {
      int k = rng.uniform_int(2, 5);
      std::vector<std::string> motifs;
      for (int i = 0; i < k; ++i)
        motifs.push_back("M" + std::to_string(rng.uniform_int(0, 6)));
      std::vector<std::pair<int, int>> adj;
      for (int i = 0; i + 1 < k; ++i)
        adj.push_back({i, i + 1});
      vc.push_back({"d" + std::to_string(m), motifs});
      corpus.push_back(info("d" + std::to_string(m), motifs, adj));
    }
    MotifVocabulary v = build_vocabulary(vc);
    AssociationGraph g = build_association_graph(corpus, v);
    std::map<std::pair<int, int>, double> weights;
    for (const AssocEdge &e : g.edges)
      if (e.kind == AssocEdge::Kind::motif_motif) {
        CHECK(weights.count({e.u, e.v}) == 0); // one edge per pair
        weights[{std::min(e.u, e.v), std::max(e.u, e.v)}] = e.weight;
      }
    // pmi itself is symmetric in its arguments
    for (const auto &[pair, w] : weights) {
      long c_i = v.entries[static_cast<std::size_t>(
                               g.nodes[static_cast<std::size_t>(pair.first)]
                                   .motif_index)]
                     .df;
      long c_j = v.entries[static_cast<std::size_t>(
                               g.nodes[static_cast<std::size_t>(pair.second)]
                                   .motif_index)]
                     .df;
      long c_ij = 0;
      for (const auto &c : corpus) {
        bool hi = false, hj = false;
        for (const auto &m : c.motifs) {
          int idx = v.index_of(m);
          hi = hi || idx == g.nodes[static_cast<std::size_t>(pair.first)]
                                .motif_index;
          hj = hj || idx == g.nodes[static_cast<std::size_t>(pair.second)]
                                .motif_index;
        }
        c_ij += hi && hj;
      }
      CHECK(w == Catch::Approx(pmi_weight(c_ij, c_i, c_j, n_mols)));
      CHECK(w == Catch::Approx(pmi_weight(c_ij, c_j, c_i, n_mols)));
    }
  }
}

TEST_CASE("motif subgraph keeps one-hot indices and training edges") {
  std::vector<MoleculeMotifInfo> corpus{info("d1", {"A", "B"}, {{0, 1}}),
                                        info("d2", {"A", "B"}, {{0, 1}}),
                                        info("d3", {"C"})};
  MotifVocabulary v = build_vocabulary(
      {{"d1", {"A", "B"}}, {"d2", {"A", "B"}}, {"d3", {"C"}}});
  AssociationGraph g = build_association_graph(corpus, v);
  std::set<int> keep{v.index_of("A"), v.index_of("B")};
  AssociationGraph sub = motif_subgraph(g, keep);
  CHECK(sub.nodes.size() == 2);
  CHECK(sub.edges.size() == 1);
  for (std::size_t i = 0; i < sub.nodes.size(); ++i)
    CHECK(sub.node_init[i].count(sub.nodes[i].motif_index) == 1);
}

TEST_CASE("vocab and graph serialization round-trips") {
  std::vector<MoleculeMotifInfo> corpus{info("d1", {"A", "B"}, {{0, 1}}),
                                        info("d2", {"A"})};
  MotifVocabulary v = build_vocabulary({{"d1", {"A", "B"}}, {"d2", {"A"}}});
  std::string jsonl = vocab_to_jsonl(v);
  MotifVocabulary v2 = vocab_from_jsonl(jsonl);
  CHECK(vocab_to_jsonl(v2) == jsonl);

  AssociationGraph g = build_association_graph(corpus, v);
  nlohmann::json j = assoc_to_json(g);
  AssociationGraph g2 = assoc_from_json(j);
  CHECK(assoc_to_json(g2) == j);
  CHECK(g2.nodes.size() == g.nodes.size());
  CHECK(g2.edges.size() == g.edges.size());
}
