//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "adrgen/chem/canonical.hpp"
#include "adrgen/chem/molecule.hpp"
#include "adrgen/chem/perceive.hpp"
#include "adrgen/frag/brics.hpp"

namespace adrgen::frag {

enum class CleaveRule { brics, ring_substituent, branch_atom };

struct CleavableBond {
  int bond = 0;
  CleaveRule rule = CleaveRule::brics;
  int env_a = 0; // set for brics cuts
  int env_b = 0;
};

struct Fragment {
  std::vector<int> atoms; // parent-molecule indices, ascending
  // (atom kept in this fragment, severed bond order)
  std::vector<std::pair<int, chem::BondOrder>> attachment_points;
};

struct Motif {
  std::string canonical;
  int heavy_atom_count = 0;

  friend bool operator<(const Motif &a, const Motif &b) {
    return a.canonical < b.canonical;
  }
  friend bool operator==(const Motif &a, const Motif &b) {
    return a.canonical == b.canonical;
  }
};

// Every acyclic single bond whose endpoints match a compatible environment
// pair, in bond-index order. Ring bonds are never offered for cleavage.
inline std::vector<CleavableBond>
find_brics_bonds(const chem::PerceivedMolecule &p,
                 const BricsRuleTable &rules) {
  std::vector<std::vector<int>> envs(
      static_cast<std::size_t>(p.n_atoms()));
  for (int i = 0; i < p.n_atoms(); ++i)
    envs[static_cast<std::size_t>(i)] = rules.matching_environments(p, i);
  std::vector<CleavableBond> out;
  for (int bi = 0; bi < p.n_bonds(); ++bi) {
    const chem::Bond &b = p.base.bonds[static_cast<std::size_t>(bi)];
    if (b.order != chem::BondOrder::single)
      continue;
    if (p.ring_bonds[static_cast<std::size_t>(bi)])
      continue;
    const chem::Atom &aa = p.base.atoms[static_cast<std::size_t>(b.a)];
    const chem::Atom &ab = p.base.atoms[static_cast<std::size_t>(b.b)];
    if (aa.atomic_number <= 1 || ab.atomic_number <= 1)
      continue;
    // smallest compatible pair, for a deterministic record
    int best_a = -1, best_b = -1;
    for (int ea : envs[static_cast<std::size_t>(b.a)])
      for (int eb : envs[static_cast<std::size_t>(b.b)])
        if (rules.compatible(ea, eb)) {
          int lo = std::min(ea, eb), hi = std::max(ea, eb);
          if (best_a < 0 || std::make_pair(lo, hi) <
                                std::make_pair(best_a, best_b)) {
            best_a = lo;
            best_b = hi;
          }
        }
    if (best_a >= 0)
      out.push_back({bi, CleaveRule::brics, best_a, best_b});
  }
  return out;
}

namespace detail {

inline std::vector<Fragment>
components_after_cuts(const chem::PerceivedMolecule &p,
                      const std::set<int> &cut_bonds) {
  int n = p.n_atoms();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (int bi = 0; bi < p.n_bonds(); ++bi) {
    if (cut_bonds.count(bi))
      continue;
    const chem::Bond &b = p.base.bonds[static_cast<std::size_t>(bi)];
    parent[static_cast<std::size_t>(find(b.a))] = find(b.b);
  }
  std::map<int, int> root_to_frag;
  std::vector<Fragment> frags;
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    auto it = root_to_frag.find(r);
    if (it == root_to_frag.end()) {
      root_to_frag.emplace(r, static_cast<int>(frags.size()));
      frags.emplace_back();
      it = root_to_frag.find(r);
    }
    frags[static_cast<std::size_t>(it->second)].atoms.push_back(i);
  }
  for (int bi : cut_bonds) {
    const chem::Bond &b = p.base.bonds[static_cast<std::size_t>(bi)];
    frags[static_cast<std::size_t>(root_to_frag[find(b.a)])]
        .attachment_points.emplace_back(b.a, b.order);
    frags[static_cast<std::size_t>(root_to_frag[find(b.b)])]
        .attachment_points.emplace_back(b.b, b.order);
  }
  return frags;
}

} // namespace detail

// Cuts every BRICS bond simultaneously and returns the connected
// components.
inline std::vector<Fragment>
brics_fragment(const chem::PerceivedMolecule &p, const BricsRuleTable &rules) {
  std::set<int> cuts;
  for (const CleavableBond &c : find_brics_bonds(p, rules))
    cuts.insert(c.bond);
  return detail::components_after_cuts(p, cuts);
}

// The additional cuts applied within each BRICS fragment:
//   (a) acyclic bonds joining a ring atom to a non-ring atom,
//   (b) all bonds of a non-ring atom with three or more heavy neighbors,
//       isolating that atom.
// Heavy-atom degree is measured on the parent molecule.
inline std::vector<int>
additional_cut_bonds(const chem::PerceivedMolecule &p,
                     const Fragment &fragment) {
  std::set<int> atom_set(fragment.atoms.begin(), fragment.atoms.end());
  std::vector<int> cuts;
  for (int bi = 0; bi < p.n_bonds(); ++bi) {
    const chem::Bond &b = p.base.bonds[static_cast<std::size_t>(bi)];
    if (!atom_set.count(b.a) || !atom_set.count(b.b))
      continue;
    if (p.ring_bonds[static_cast<std::size_t>(bi)])
      continue;
    bool ring_a = p.ring_membership[static_cast<std::size_t>(b.a)] != 0;
    bool ring_b = p.ring_membership[static_cast<std::size_t>(b.b)] != 0;
    if (ring_a != ring_b) {
      cuts.push_back(bi);
      continue;
    }
    auto branchy = [&](int atom) {
      return p.ring_membership[static_cast<std::size_t>(atom)] == 0 &&
             p.heavy_degree(atom) >= 3;
    };
    if (branchy(b.a) || branchy(b.b))
      cuts.push_back(bi);
  }
  return cuts;
}

inline std::vector<Fragment>
refine_fragments(const chem::PerceivedMolecule &p,
                 const std::vector<Fragment> &frags) {
  // collect all cuts (previous severances stay severed), then re-extract
  std::vector<int> frag_of(static_cast<std::size_t>(p.n_atoms()), -1);
  for (std::size_t fi = 0; fi < frags.size(); ++fi)
    for (int a : frags[fi].atoms)
      frag_of[static_cast<std::size_t>(a)] = static_cast<int>(fi);
  std::set<int> cuts;
  for (int bi = 0; bi < p.n_bonds(); ++bi) {
    const chem::Bond &b = p.base.bonds[static_cast<std::size_t>(bi)];
    if (frag_of[static_cast<std::size_t>(b.a)] !=
        frag_of[static_cast<std::size_t>(b.b)])
      cuts.insert(bi);
  }
  for (const Fragment &f : frags)
    for (int bi : additional_cut_bonds(p, f))
      cuts.insert(bi);
  return detail::components_after_cuts(p, cuts);
}

inline Motif motif_of_fragment(const chem::PerceivedMolecule &p,
                               const Fragment &f) {
  Motif m;
  m.canonical = chem::write_canonical(p, f.atoms);
  for (int a : f.atoms)
    if (p.base.atoms[static_cast<std::size_t>(a)].atomic_number > 1)
      ++m.heavy_atom_count;
  return m;
}

struct FragmentationResult {
  std::vector<Fragment> fragments;          // final partition
  std::vector<Motif> motifs;                // aligned with fragments
  std::vector<std::pair<int, int>> adjacent; // fragment index pairs joined
                                             // by a severed bond
};

inline FragmentationResult fragment_molecule(const chem::PerceivedMolecule &p,
                                             const BricsRuleTable &rules) {
  FragmentationResult r;
  r.fragments = refine_fragments(p, brics_fragment(p, rules));
  std::vector<int> frag_of(static_cast<std::size_t>(p.n_atoms()), -1);
  for (std::size_t fi = 0; fi < r.fragments.size(); ++fi)
    for (int a : r.fragments[fi].atoms)
      frag_of[static_cast<std::size_t>(a)] = static_cast<int>(fi);
  for (const chem::Bond &b : p.base.bonds) {
    int fa = frag_of[static_cast<std::size_t>(b.a)];
    int fb = frag_of[static_cast<std::size_t>(b.b)];
    if (fa != fb)
      r.adjacent.emplace_back(std::min(fa, fb), std::max(fa, fb));
  }
  std::sort(r.adjacent.begin(), r.adjacent.end());
  r.adjacent.erase(std::unique(r.adjacent.begin(), r.adjacent.end()),
                   r.adjacent.end());
  for (const Fragment &f : r.fragments)
    r.motifs.push_back(motif_of_fragment(p, f));
  return r;
}

// Multiset of motifs of one molecule, preserving within-molecule
// multiplicity.
inline std::vector<Motif> motifs_of(const chem::PerceivedMolecule &p,
                                    const BricsRuleTable &rules) {
  std::vector<Motif> motifs = fragment_molecule(p, rules).motifs;
  std::sort(motifs.begin(), motifs.end());
  return motifs;
}

} // namespace adrgen::frag
