//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <map>
#include <set>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "adrgen/chem/perceive.hpp"
#include "adrgen/chem/smiles.hpp"
#include "adrgen/frag/brics.hpp"
#include "adrgen/frag/fragment.hpp"
#include "support/random_mol.hpp"
#include "support/test_rng.hpp"

using namespace adrgen;
using namespace adrgen::frag;
using adrgen::test::TestRng;

static chem::PerceivedMolecule mol(const std::string &smi) {
  return chem::perceive(chem::parse_smiles(smi));
}

static std::map<std::string, int> motif_counts(const std::string &smi) {
  std::map<std::string, int> counts;
  for (const Motif &m : motifs_of(mol(smi), BricsRuleTable::builtin()))
    counts[m.canonical]++;
  return counts;
}

TEST_CASE("rule data file matches the built-in table byte for byte") {
  std::ifstream in(std::string(ADRGEN_SOURCE_DIR) + "/data/brics_rules.json",
                   std::ios::binary);
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text == builtin_brics_rules_json());
}

TEST_CASE("rule table loader validates version and shape") {
  CHECK_THROWS_AS(BricsRuleTable::from_json_text("{}"), Error);
  CHECK_THROWS_AS(
      BricsRuleTable::from_json_text(
          R"({"version": 99, "environments": [], "compatible_pairs": []})"),
      Error);
  CHECK_THROWS_AS(BricsRuleTable::from_json_text("not json"), Error);
  CHECK(BricsRuleTable::builtin().environments().size() == 16);
}

TEST_CASE("compatibility matrix is symmetric") {
  const auto &t = BricsRuleTable::builtin();
  for (int a = 1; a <= 16; ++a)
    for (int b = 1; b <= 16; ++b)
      CHECK(t.compatible(a, b) == t.compatible(b, a));
}

TEST_CASE("methane has no cleavable bonds") {
  CHECK(find_brics_bonds(mol("C"), BricsRuleTable::builtin()).empty());
}

TEST_CASE("cyclohexane has no cleavable bonds (all ring)") {
  CHECK(find_brics_bonds(mol("C1CCCCC1"), BricsRuleTable::builtin()).empty());
}

TEST_CASE("N-methylacetamide: the amide C-N bond is flagged") {
  // CC(=O)NC -> bond between acyl carbon (env 1) and amine nitrogen (env 5)
  auto p = mol("CC(=O)NC");
  auto found = find_brics_bonds(p, BricsRuleTable::builtin());
  REQUIRE(found.size() == 1);
  const chem::Bond &b = p.base.bonds[static_cast<std::size_t>(found[0].bond)];
  std::set<std::string> ends{
      p.base.atoms[static_cast<std::size_t>(b.a)].element,
      p.base.atoms[static_cast<std::size_t>(b.b)].element};
  CHECK(ends == std::set<std::string>{"C", "N"});
  CHECK(found[0].env_a == 1);
  CHECK(found[0].env_b == 5);
}

TEST_CASE("zero cleavable bonds means one fragment") {
  auto frags = brics_fragment(mol("CCO"), BricsRuleTable::builtin());
  REQUIRE(frags.size() == 1);
  CHECK(frags[0].atoms.size() == 3);
  CHECK(frags[0].attachment_points.empty());
}

TEST_CASE("k bridge cuts give k+1 fragments") {
  auto p = mol("CC(=O)NCCNC(=O)C"); // two amide bonds, both bridges
  auto found = find_brics_bonds(p, BricsRuleTable::builtin());
  auto frags = brics_fragment(p, BricsRuleTable::builtin());
  CHECK(found.size() >= 2);
  CHECK(frags.size() == found.size() + 1);
}

TEST_CASE("N-methylacetamide fragments into acetyl and methylamine") {
  auto frags = brics_fragment(mol("CC(=O)NC"), BricsRuleTable::builtin());
  REQUIRE(frags.size() == 2);
  std::multiset<std::size_t> sizes{frags[0].atoms.size(),
                                   frags[1].atoms.size()};
  CHECK(sizes == std::multiset<std::size_t>{2, 3});
  CHECK(frags[0].attachment_points.size() == 1);
  CHECK(frags[1].attachment_points.size() == 1);
}

TEST_CASE("benzyl chloride refines to exactly two fragments") {
  auto p = mol("ClCc1ccccc1");
  auto frags = refine_fragments(p, brics_fragment(p, BricsRuleTable::builtin()));
  REQUIRE(frags.size() == 2);
  std::multiset<std::size_t> sizes{frags[0].atoms.size(),
                                   frags[1].atoms.size()};
  CHECK(sizes == std::multiset<std::size_t>{2, 6});
}

TEST_CASE("ethylbenzene refines to ring plus ethyl") {
  auto p = mol("CCc1ccccc1");
  auto frags = refine_fragments(p, brics_fragment(p, BricsRuleTable::builtin()));
  REQUIRE(frags.size() == 2);
  std::multiset<std::size_t> sizes{frags[0].atoms.size(),
                                   frags[1].atoms.size()};
  CHECK(sizes == std::multiset<std::size_t>{2, 6});
}

TEST_CASE("neopentane: rule 2 isolates the quaternary carbon") {
  auto p = mol("CC(C)(C)C");
  auto frags = refine_fragments(p, brics_fragment(p, BricsRuleTable::builtin()));
  CHECK(frags.size() == 5);
}

TEST_CASE("methane motif multiset") {
  auto counts = motif_counts("C");
  REQUIRE(counts.size() == 1);
  CHECK(counts.begin()->first == "C");
  CHECK(counts.begin()->second == 1);
}

TEST_CASE("benzyl chloride yields two distinct motifs") {
  auto counts = motif_counts("ClCc1ccccc1");
  REQUIRE(counts.size() == 2);
  for (const auto &[canon, n] : counts) {
    (void)canon;
    CHECK(n == 1);
  }
}

TEST_CASE("1,2-diphenylethane: ring motif has multiplicity two") {
  auto counts = motif_counts("c1ccccc1CCc1ccccc1");
  bool found_double = false;
  for (const auto &[canon, n] : counts)
    if (n == 2 && canon.find("c") != std::string::npos)
      found_double = true;
  CHECK(found_double);
}

TEST_CASE("motif heavy atom counts") {
  auto motifs = motifs_of(mol("ClCc1ccccc1"), BricsRuleTable::builtin());
  std::multiset<int> sizes;
  for (const Motif &m : motifs)
    sizes.insert(m.heavy_atom_count);
  CHECK(sizes == std::multiset<int>{2, 6});
}

TEST_CASE("fragment adjacency mirrors severed bonds") {
  auto r = fragment_molecule(mol("ClCc1ccccc1"), BricsRuleTable::builtin());
  REQUIRE(r.fragments.size() == 2);
  REQUIRE(r.adjacent.size() == 1);
  CHECK(r.adjacent[0] == std::make_pair(0, 1));
}

TEST_CASE("partition and ring preservation on random molecules") {
  TestRng rng(20260401);
  const auto &rules = BricsRuleTable::builtin();
  for (int iter = 0; iter < 200; ++iter) {
    chem::Molecule m = test::random_molecule(rng, 14);
    chem::PerceivedMolecule p = chem::perceive(m);
    auto frags = refine_fragments(p, brics_fragment(p, rules));
    std::vector<int> owner(static_cast<std::size_t>(p.n_atoms()), -1);
    for (std::size_t fi = 0; fi < frags.size(); ++fi)
      for (int a : frags[fi].atoms) {
        CHECK(owner[static_cast<std::size_t>(a)] == -1);
        owner[static_cast<std::size_t>(a)] = static_cast<int>(fi);
      }
    for (int a = 0; a < p.n_atoms(); ++a)
      CHECK(owner[static_cast<std::size_t>(a)] >= 0);
    for (int bi = 0; bi < p.n_bonds(); ++bi) {
      if (!p.ring_bonds[static_cast<std::size_t>(bi)])
        continue;
      const chem::Bond &b = p.base.bonds[static_cast<std::size_t>(bi)];
      CHECK(owner[static_cast<std::size_t>(b.a)] ==
            owner[static_cast<std::size_t>(b.b)]);
    }
  }
}

TEST_CASE("refine_fragments is idempotent") {
  TestRng rng(555);
  const auto &rules = BricsRuleTable::builtin();
  for (int iter = 0; iter < 100; ++iter) {
    chem::Molecule m = test::random_molecule(rng, 12);
    chem::PerceivedMolecule p = chem::perceive(m);
    auto once = refine_fragments(p, brics_fragment(p, rules));
    auto twice = refine_fragments(p, once);
    REQUIRE(once.size() == twice.size());
    std::set<std::vector<int>> a, b;
    for (const Fragment &f : once)
      a.insert(f.atoms);
    for (const Fragment &f : twice)
      b.insert(f.atoms);
    CHECK(a == b);
  }
}

TEST_CASE("motif canonicals are fixed points of re-canonicalization") {
  TestRng rng(808);
  const auto &rules = BricsRuleTable::builtin();
  std::set<std::string> seen;
  for (int iter = 0; iter < 120; ++iter) {
    chem::Molecule m = test::random_molecule(rng, 12);
    for (const Motif &motif : motifs_of(chem::perceive(m), rules)) {
      if (!seen.insert(motif.canonical).second)
        continue;
      chem::PerceivedMolecule p = mol(motif.canonical);
      INFO(motif.canonical);
      CHECK(chem::write_canonical(p) == motif.canonical);
    }
  }
  CHECK(seen.size() > 20); // the corpus produced real variety
}

TEST_CASE("motif multiset is invariant under atom relabeling") {
  TestRng rng(31337);
  const auto &rules = BricsRuleTable::builtin();
  for (int iter = 0; iter < 100; ++iter) {
    chem::Molecule m = test::random_molecule(rng, 12);
    std::vector<int> perm(m.atoms.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    auto a = motifs_of(chem::perceive(m), rules);
    auto b = motifs_of(chem::perceive(test::relabel(m, perm)), rules);
    std::multiset<std::string> ca, cb;
    for (const Motif &x : a)
      ca.insert(x.canonical);
    for (const Motif &x : b)
      cb.insert(x.canonical);
    CHECK(ca == cb);
  }
}
