//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adrgen/errors.hpp"

namespace adrgen::chem {

enum class Chirality : std::uint8_t { none = 0, clockwise, counterclockwise };

enum class BondOrder : std::uint8_t { single = 0, double_bond, triple, aromatic };

// Directional single-bond markers as written ('/' -> cis, '\' -> trans).
// Recorded verbatim for featurization; no geometry is derived from them.
enum class BondStereo : std::uint8_t { none = 0, cis, trans };

enum class Hybridization : std::uint8_t { other = 0, sp, sp2, sp3 };

struct Atom {
  std::string element;
  int atomic_number = 0;
  int formal_charge = 0;
  int explicit_h = -1; // -1 = unset (organic-subset atom)
  int isotope = 0;     // 0 = unspecified
  bool aromatic = false;
  Chirality chirality = Chirality::none;
  int radical_electrons = 0;
  // Neighbor order at the chiral center as encountered in the input
  // (atom indices; kImplicitHNeighbor marks the in-bracket hydrogen).
  // Needed to re-emit @/@@ with correct parity after reordering.
  std::vector<int> chiral_order;
};

inline constexpr int kImplicitHNeighbor = -1;

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::single;
  BondStereo stereo = BondStereo::none;
  bool conjugated = false; // filled by perceive()
  bool in_ring = false;    // filled by perceive()
};

inline double bond_order_value(BondOrder o) {
  switch (o) {
  case BondOrder::single: return 1.0;
  case BondOrder::double_bond: return 2.0;
  case BondOrder::triple: return 3.0;
  case BondOrder::aromatic: return 1.5;
  }
  return 1.0;
}

// Integer bond-order contribution used by the valence model (aromatic
// counts 1; the pi contribution is tracked separately per atom).
inline int bond_order_sigma(BondOrder o) {
  switch (o) {
  case BondOrder::single: return 1;
  case BondOrder::double_bond: return 2;
  case BondOrder::triple: return 3;
  case BondOrder::aromatic: return 1;
  }
  return 1;
}

struct Molecule {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::string source_text;

  // adjacency[i] = list of (neighbor atom index, bond index)
  std::vector<std::vector<std::pair<int, int>>> adjacency() const {
    std::vector<std::vector<std::pair<int, int>>> adj(atoms.size());
    for (int bi = 0; bi < static_cast<int>(bonds.size()); ++bi) {
      const Bond &b = bonds[static_cast<std::size_t>(bi)];
      adj[static_cast<std::size_t>(b.a)].emplace_back(b.b, bi);
      adj[static_cast<std::size_t>(b.b)].emplace_back(b.a, bi);
    }
    return adj;
  }

  const Bond *bond_between(int a, int b) const {
    for (const Bond &bd : bonds)
      if ((bd.a == a && bd.b == b) || (bd.a == b && bd.b == a))
        return &bd;
    return nullptr;
  }
};

struct PerceivedMolecule {
  Molecule base;
  std::vector<int> implicit_h;   // resolved hydrogen count per atom
  std::vector<int> degree;       // incident bonds per atom
  std::vector<Hybridization> hybridization;
  std::vector<char> ring_membership; // per atom
  std::vector<char> ring_bonds;      // per bond
  std::vector<char> pi_bonded;       // aromatic pi contribution used
  std::vector<int> valence_used;     // chosen target valence, -1 = unchecked

  int n_atoms() const { return static_cast<int>(base.atoms.size()); }
  int n_bonds() const { return static_cast<int>(base.bonds.size()); }

  // Heavy (non-hydrogen) neighbor count; the degree used by the
  // fragmentation rules.
  int heavy_degree(int atom) const {
    int n = 0;
    for (const Bond &b : base.bonds) {
      int other = -1;
      if (b.a == atom)
        other = b.b;
      else if (b.b == atom)
        other = b.a;
      if (other >= 0 &&
          base.atoms[static_cast<std::size_t>(other)].atomic_number != 1)
        ++n;
    }
    return n;
  }

  // Hydrogen count feature: implicit/bracket hydrogens plus explicit
  // H-atom neighbors.
  int total_h(int atom) const {
    int n = implicit_h[static_cast<std::size_t>(atom)];
    for (const Bond &b : base.bonds) {
      int other = -1;
      if (b.a == atom)
        other = b.b;
      else if (b.b == atom)
        other = b.a;
      if (other >= 0 &&
          base.atoms[static_cast<std::size_t>(other)].atomic_number == 1)
        ++n;
    }
    return n;
  }
};

} // namespace adrgen::chem
