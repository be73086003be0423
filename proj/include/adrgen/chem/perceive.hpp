//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "adrgen/chem/elements.hpp"
#include "adrgen/chem/molecule.hpp"
#include "adrgen/errors.hpp"

namespace adrgen::chem {

struct ResolvedValence {
  int implicit_h = 0;
  int pi = 0;       // 1 when the atom carries an aromatic pi slot
  int radicals = 0;
  int valence = -1; // chosen target valence, -1 = unchecked element
};

// Resolves hydrogen count, aromatic pi contribution and radical electrons
// for one atom from its integer sigma bond sum. explicit_h = -1 means the
// atom was written bare and hydrogens fill the smallest normal valence;
// otherwise the written count is kept and leftover slots become radicals.
// Aromatic atoms prefer to spend one slot on the ring pi system (benzene
// carbon), falling back to a lone-pair role when the smallest valence has
// no room (furan oxygen, pyrrole-type [nH]).
inline ResolvedValence resolve_valence(int atomic_number, int charge,
                                       int sigma, bool aromatic,
                                       int explicit_h) {
  ResolvedValence r;
  std::vector<int> allowed = allowed_valences(atomic_number, charge);
  if (allowed.empty()) {
    r.implicit_h = explicit_h >= 0 ? explicit_h : 0;
    return r;
  }
  if (explicit_h >= 0) {
    int base = sigma + explicit_h;
    for (int v : allowed) {
      if (v >= base) {
        int slack = v - base;
        r.pi = aromatic ? std::min(1, slack) : 0;
        r.radicals = slack - r.pi;
        r.implicit_h = explicit_h;
        r.valence = v;
        return r;
      }
    }
    throw Error(errc::valence_exceeded,
                "explicit bonds and hydrogens exceed valence of " +
                    std::string(element_by_number(atomic_number).symbol));
  }
  for (int v : allowed) {
    for (int pi : aromatic ? std::vector<int>{1, 0} : std::vector<int>{0}) {
      int h = v - sigma - pi;
      if (h >= 0) {
        r.implicit_h = h;
        r.pi = pi;
        r.valence = v;
        return r;
      }
    }
  }
  throw Error(errc::valence_exceeded,
              "bond order sum exceeds valence of " +
                  std::string(element_by_number(atomic_number).symbol));
}

namespace detail {

// Marks non-bridge bonds (bonds on at least one cycle) via DFS low-link.
inline std::vector<char> ring_bond_flags(const Molecule &mol) {
  int n = static_cast<int>(mol.atoms.size());
  std::vector<char> is_ring(mol.bonds.size(), 0);
  auto adj = mol.adjacency();
  std::vector<int> disc(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  int timer = 0;
  // iterative DFS to survive deep chains
  struct Frame {
    int node;
    int parent_bond;
    std::size_t next_edge;
  };
  for (int root = 0; root < n; ++root) {
    if (disc[static_cast<std::size_t>(root)] != -1)
      continue;
    std::vector<Frame> stack{{root, -1, 0}};
    disc[static_cast<std::size_t>(root)] =
        low[static_cast<std::size_t>(root)] = timer++;
    while (!stack.empty()) {
      Frame &f = stack.back();
      auto &edges = adj[static_cast<std::size_t>(f.node)];
      if (f.next_edge < edges.size()) {
        auto [to, bi] = edges[f.next_edge++];
        if (bi == f.parent_bond)
          continue;
        if (disc[static_cast<std::size_t>(to)] != -1) {
          low[static_cast<std::size_t>(f.node)] =
              std::min(low[static_cast<std::size_t>(f.node)],
                       disc[static_cast<std::size_t>(to)]);
          // back edge: always on a cycle
          is_ring[static_cast<std::size_t>(bi)] = 1;
        } else {
          disc[static_cast<std::size_t>(to)] =
              low[static_cast<std::size_t>(to)] = timer++;
          stack.push_back({to, bi, 0});
        }
      } else {
        stack.pop_back();
        if (!stack.empty()) {
          Frame &p = stack.back();
          low[static_cast<std::size_t>(p.node)] =
              std::min(low[static_cast<std::size_t>(p.node)],
                       low[static_cast<std::size_t>(f.node)]);
          // tree edge is on a cycle unless it is a bridge
          if (f.parent_bond >= 0 &&
              low[static_cast<std::size_t>(f.node)] <=
                  disc[static_cast<std::size_t>(p.node)])
            is_ring[static_cast<std::size_t>(f.parent_bond)] = 1;
        }
      }
    }
  }
  return is_ring;
}

} // namespace detail

inline PerceivedMolecule perceive(const Molecule &mol) {
  PerceivedMolecule p;
  p.base = mol;
  int n = static_cast<int>(mol.atoms.size());
  int nb = static_cast<int>(mol.bonds.size());
  p.implicit_h.assign(static_cast<std::size_t>(n), 0);
  p.degree.assign(static_cast<std::size_t>(n), 0);
  p.hybridization.assign(static_cast<std::size_t>(n), Hybridization::other);
  p.ring_membership.assign(static_cast<std::size_t>(n), 0);
  p.pi_bonded.assign(static_cast<std::size_t>(n), 0);
  p.valence_used.assign(static_cast<std::size_t>(n), -1);

  std::vector<int> sigma(static_cast<std::size_t>(n), 0);
  std::vector<int> n_double(static_cast<std::size_t>(n), 0);
  std::vector<int> n_triple(static_cast<std::size_t>(n), 0);
  std::vector<char> has_aromatic_bond(static_cast<std::size_t>(n), 0);
  for (const Bond &b : mol.bonds) {
    p.degree[static_cast<std::size_t>(b.a)]++;
    p.degree[static_cast<std::size_t>(b.b)]++;
    sigma[static_cast<std::size_t>(b.a)] += bond_order_sigma(b.order);
    sigma[static_cast<std::size_t>(b.b)] += bond_order_sigma(b.order);
    if (b.order == BondOrder::double_bond) {
      n_double[static_cast<std::size_t>(b.a)]++;
      n_double[static_cast<std::size_t>(b.b)]++;
    } else if (b.order == BondOrder::triple) {
      n_triple[static_cast<std::size_t>(b.a)]++;
      n_triple[static_cast<std::size_t>(b.b)]++;
    } else if (b.order == BondOrder::aromatic) {
      has_aromatic_bond[static_cast<std::size_t>(b.a)] = 1;
      has_aromatic_bond[static_cast<std::size_t>(b.b)] = 1;
    }
  }

  for (int i = 0; i < n; ++i) {
    const Atom &a = mol.atoms[static_cast<std::size_t>(i)];
    ResolvedValence rv =
        resolve_valence(a.atomic_number, a.formal_charge,
                        sigma[static_cast<std::size_t>(i)], a.aromatic,
                        a.explicit_h);
    p.implicit_h[static_cast<std::size_t>(i)] = rv.implicit_h;
    p.pi_bonded[static_cast<std::size_t>(i)] = static_cast<char>(rv.pi);
    p.valence_used[static_cast<std::size_t>(i)] = rv.valence;
    p.base.atoms[static_cast<std::size_t>(i)].radical_electrons = rv.radicals;
  }

  p.ring_bonds = detail::ring_bond_flags(mol);
  for (int bi = 0; bi < nb; ++bi) {
    if (p.ring_bonds[static_cast<std::size_t>(bi)]) {
      const Bond &b = mol.bonds[static_cast<std::size_t>(bi)];
      p.ring_membership[static_cast<std::size_t>(b.a)] = 1;
      p.ring_membership[static_cast<std::size_t>(b.b)] = 1;
      p.base.bonds[static_cast<std::size_t>(bi)].in_ring = true;
    }
  }

  for (int i = 0; i < n; ++i) {
    const Atom &a = mol.atoms[static_cast<std::size_t>(i)];
    bool aromatic = a.aromatic || has_aromatic_bond[static_cast<std::size_t>(i)];
    Hybridization hyb;
    if (n_triple[static_cast<std::size_t>(i)] >= 1 ||
        n_double[static_cast<std::size_t>(i)] >= 2)
      hyb = Hybridization::sp;
    else if (aromatic || n_double[static_cast<std::size_t>(i)] == 1)
      hyb = Hybridization::sp2;
    else if (p.valence_used[static_cast<std::size_t>(i)] >= 0)
      hyb = Hybridization::sp3;
    else
      hyb = Hybridization::other;
    p.hybridization[static_cast<std::size_t>(i)] = hyb;
  }

  // Conjugation: aromatic bonds always; a single bond when both ends carry
  // another multiple/aromatic bond; a multiple bond when it touches such a
  // single bond or an aromatic atom. Lone-pair conjugation (ester oxygen)
  // is intentionally not modeled.
  auto multiple_elsewhere = [&](int atom, int excluding_bond) {
    for (int bi = 0; bi < nb; ++bi) {
      if (bi == excluding_bond)
        continue;
      const Bond &b = mol.bonds[static_cast<std::size_t>(bi)];
      if (b.a != atom && b.b != atom)
        continue;
      if (b.order == BondOrder::double_bond || b.order == BondOrder::triple ||
          b.order == BondOrder::aromatic)
        return true;
    }
    return false;
  };
  std::vector<char> conj(static_cast<std::size_t>(nb), 0);
  for (int bi = 0; bi < nb; ++bi) {
    const Bond &b = mol.bonds[static_cast<std::size_t>(bi)];
    if (b.order == BondOrder::aromatic) {
      conj[static_cast<std::size_t>(bi)] = 1;
    } else if (b.order == BondOrder::single) {
      if (multiple_elsewhere(b.a, bi) && multiple_elsewhere(b.b, bi))
        conj[static_cast<std::size_t>(bi)] = 1;
    }
  }
  for (int bi = 0; bi < nb; ++bi) {
    const Bond &b = mol.bonds[static_cast<std::size_t>(bi)];
    if (b.order != BondOrder::double_bond && b.order != BondOrder::triple)
      continue;
    bool adjacent_conj = false;
    for (int bj = 0; bj < nb && !adjacent_conj; ++bj) {
      if (bj == bi || !conj[static_cast<std::size_t>(bj)])
        continue;
      const Bond &o = mol.bonds[static_cast<std::size_t>(bj)];
      if (o.a == b.a || o.a == b.b || o.b == b.a || o.b == b.b)
        adjacent_conj = true;
    }
    if (adjacent_conj || mol.atoms[static_cast<std::size_t>(b.a)].aromatic ||
        mol.atoms[static_cast<std::size_t>(b.b)].aromatic)
      conj[static_cast<std::size_t>(bi)] = 1;
  }
  for (int bi = 0; bi < nb; ++bi)
    p.base.bonds[static_cast<std::size_t>(bi)].conjugated =
        conj[static_cast<std::size_t>(bi)] != 0;

  return p;
}

} // namespace adrgen::chem
