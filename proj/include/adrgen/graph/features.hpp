//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "adrgen/chem/elements.hpp"
#include "adrgen/chem/molecule.hpp"
#include "adrgen/chem/perceive.hpp"

namespace adrgen::graph {

// Node feature layout (9 columns):
//   0 atomic number   1 degree          2 formal charge
//   3 chirality code  4 hydrogen count  5 hybridization code
//   6 aromatic flag   7 atomic mass     8 radical electrons
// Edge feature layout (3 columns):
//   0 bond type code (single 1, double 2, triple 3, aromatic 4)
//   1 stereo code (none 0, cis 1, trans 2)
//   2 conjugation flag
inline constexpr int kNodeFeatureDim = 9;
inline constexpr int kEdgeFeatureDim = 3;

// Columns holding measurements rather than category codes; these are the
// ones the z-score standardization applies to.
inline constexpr std::array<int, 6> kNumericColumns{0, 1, 2, 4, 7, 8};

struct FeatureStats {
  std::array<double, kNodeFeatureDim> mean{};
  std::array<double, kNodeFeatureDim> stdev{}; // 1.0 for untouched columns

  FeatureStats() {
    mean.fill(0.0);
    stdev.fill(1.0);
  }
};

struct MolecularGraphTensors {
  int n_atoms = 0;
  std::vector<double> node_feat;            // n_atoms x 9, row-major
  std::vector<std::pair<int, int>> edge_index; // both directions per bond
  std::vector<double> edge_feat;            // edges x 3, row-major
};

namespace detail {

inline std::array<double, kNodeFeatureDim>
raw_node_features(const chem::PerceivedMolecule &p, int i) {
  const chem::Atom &a = p.base.atoms[static_cast<std::size_t>(i)];
  double mass = a.isotope > 0
                    ? static_cast<double>(a.isotope)
                    : chem::element_by_number(a.atomic_number).atomic_weight;
  return {
      static_cast<double>(a.atomic_number),
      static_cast<double>(p.degree[static_cast<std::size_t>(i)]),
      static_cast<double>(a.formal_charge),
      static_cast<double>(static_cast<int>(a.chirality)),
      static_cast<double>(p.total_h(i)),
      static_cast<double>(static_cast<int>(
          p.hybridization[static_cast<std::size_t>(i)])),
      a.aromatic ? 1.0 : 0.0,
      mass,
      static_cast<double>(a.radical_electrons),
  };
}

inline std::array<double, kEdgeFeatureDim>
raw_edge_features(const chem::Bond &b) {
  double type = 1.0;
  switch (b.order) {
  case chem::BondOrder::single: type = 1.0; break;
  case chem::BondOrder::double_bond: type = 2.0; break;
  case chem::BondOrder::triple: type = 3.0; break;
  case chem::BondOrder::aromatic: type = 4.0; break;
  }
  return {type, static_cast<double>(static_cast<int>(b.stereo)),
          b.conjugated ? 1.0 : 0.0};
}

} // namespace detail

// Mean/variance of the numeric node-feature columns over a corpus;
// compute on the training split only.
inline FeatureStats
compute_feature_stats(const std::vector<chem::PerceivedMolecule> &corpus) {
  FeatureStats s;
  std::array<double, kNodeFeatureDim> sum{}, sq{};
  long count = 0;
  for (const auto &p : corpus)
    for (int i = 0; i < p.n_atoms(); ++i) {
      auto f = detail::raw_node_features(p, i);
      for (int c = 0; c < kNodeFeatureDim; ++c) {
        sum[static_cast<std::size_t>(c)] += f[static_cast<std::size_t>(c)];
        sq[static_cast<std::size_t>(c)] +=
            f[static_cast<std::size_t>(c)] * f[static_cast<std::size_t>(c)];
      }
      ++count;
    }
  if (count == 0)
    return s;
  for (int c : kNumericColumns) {
    double m = sum[static_cast<std::size_t>(c)] / static_cast<double>(count);
    double var =
        sq[static_cast<std::size_t>(c)] / static_cast<double>(count) - m * m;
    s.mean[static_cast<std::size_t>(c)] = m;
    s.stdev[static_cast<std::size_t>(c)] =
        var > 1e-18 ? std::sqrt(var) : 1.0;
  }
  return s;
}

// stats == nullptr gives raw (fidelity-mode) features.
inline MolecularGraphTensors
featurize_molecule(const chem::PerceivedMolecule &p,
                   const FeatureStats *stats = nullptr) {
  MolecularGraphTensors t;
  t.n_atoms = p.n_atoms();
  t.node_feat.reserve(static_cast<std::size_t>(t.n_atoms) * kNodeFeatureDim);
  for (int i = 0; i < t.n_atoms; ++i) {
    auto f = detail::raw_node_features(p, i);
    if (stats)
      for (int c : kNumericColumns)
        f[static_cast<std::size_t>(c)] =
            (f[static_cast<std::size_t>(c)] -
             stats->mean[static_cast<std::size_t>(c)]) /
            stats->stdev[static_cast<std::size_t>(c)];
    t.node_feat.insert(t.node_feat.end(), f.begin(), f.end());
  }
  for (const chem::Bond &b : p.base.bonds) {
    auto f = detail::raw_edge_features(b);
    t.edge_index.emplace_back(b.a, b.b);
    t.edge_feat.insert(t.edge_feat.end(), f.begin(), f.end());
    t.edge_index.emplace_back(b.b, b.a);
    t.edge_feat.insert(t.edge_feat.end(), f.begin(), f.end());
  }
  return t;
}

} // namespace adrgen::graph
