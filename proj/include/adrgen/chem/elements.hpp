//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adrgen/errors.hpp"

namespace adrgen::chem {

struct ElementInfo {
  const char *symbol;
  int atomic_number;
  double atomic_weight; // standard atomic weight; 0 for the wildcard
};

// Z = 0 is the attachment-point wildcard "*".
inline constexpr std::array<ElementInfo, 104> kElements{{
    {"*", 0, 0.0},       {"H", 1, 1.008},     {"He", 2, 4.0026},
    {"Li", 3, 6.94},     {"Be", 4, 9.0122},   {"B", 5, 10.81},
    {"C", 6, 12.011},    {"N", 7, 14.007},    {"O", 8, 15.999},
    {"F", 9, 18.998},    {"Ne", 10, 20.180},  {"Na", 11, 22.990},
    {"Mg", 12, 24.305},  {"Al", 13, 26.982},  {"Si", 14, 28.085},
    {"P", 15, 30.974},   {"S", 16, 32.06},    {"Cl", 17, 35.45},
    {"Ar", 18, 39.95},   {"K", 19, 39.098},   {"Ca", 20, 40.078},
    {"Sc", 21, 44.956},  {"Ti", 22, 47.867},  {"V", 23, 50.942},
    {"Cr", 24, 51.996},  {"Mn", 25, 54.938},  {"Fe", 26, 55.845},
    {"Co", 27, 58.933},  {"Ni", 28, 58.693},  {"Cu", 29, 63.546},
    {"Zn", 30, 65.38},   {"Ga", 31, 69.723},  {"Ge", 32, 72.63},
    {"As", 33, 74.922},  {"Se", 34, 78.971},  {"Br", 35, 79.904},
    {"Kr", 36, 83.798},  {"Rb", 37, 85.468},  {"Sr", 38, 87.62},
    {"Y", 39, 88.906},   {"Zr", 40, 91.224},  {"Nb", 41, 92.906},
    {"Mo", 42, 95.95},   {"Tc", 43, 97.907},  {"Ru", 44, 101.07},
    {"Rh", 45, 102.91},  {"Pd", 46, 106.42},  {"Ag", 47, 107.87},
    {"Cd", 48, 112.41},  {"In", 49, 114.82},  {"Sn", 50, 118.71},
    {"Sb", 51, 121.76},  {"Te", 52, 127.60},  {"I", 53, 126.90},
    {"Xe", 54, 131.29},  {"Cs", 55, 132.91},  {"Ba", 56, 137.33},
    {"La", 57, 138.91},  {"Ce", 58, 140.12},  {"Pr", 59, 140.91},
    {"Nd", 60, 144.24},  {"Pm", 61, 144.91},  {"Sm", 62, 150.36},
    {"Eu", 63, 151.96},  {"Gd", 64, 157.25},  {"Tb", 65, 158.93},
    {"Dy", 66, 162.50},  {"Ho", 67, 164.93},  {"Er", 68, 167.26},
    {"Tm", 69, 168.93},  {"Yb", 70, 173.05},  {"Lu", 71, 174.97},
    {"Hf", 72, 178.49},  {"Ta", 73, 180.95},  {"W", 74, 183.84},
    {"Re", 75, 186.21},  {"Os", 76, 190.23},  {"Ir", 77, 192.22},
    {"Pt", 78, 195.08},  {"Au", 79, 196.97},  {"Hg", 80, 200.59},
    {"Tl", 81, 204.38},  {"Pb", 82, 207.2},   {"Bi", 83, 208.98},
    {"Po", 84, 208.98},  {"At", 85, 209.99},  {"Rn", 86, 222.02},
    {"Fr", 87, 223.02},  {"Ra", 88, 226.03},  {"Ac", 89, 227.03},
    {"Th", 90, 232.04},  {"Pa", 91, 231.04},  {"U", 92, 238.03},
    {"Np", 93, 237.05},  {"Pu", 94, 244.06},  {"Am", 95, 243.06},
    {"Cm", 96, 247.07},  {"Bk", 97, 247.07},  {"Cf", 98, 251.08},
    {"Es", 99, 252.08},  {"Fm", 100, 257.10}, {"Md", 101, 258.10},
    {"No", 102, 259.10}, {"Lr", 103, 266.12},
}};

inline std::optional<int> atomic_number_of(std::string_view symbol) {
  for (const auto &e : kElements)
    if (symbol == e.symbol)
      return e.atomic_number;
  return std::nullopt;
}

inline const ElementInfo &element_by_number(int z) {
  if (z < 0 || z >= static_cast<int>(kElements.size()))
    throw Error(errc::unknown_element, "atomic number " + std::to_string(z));
  return kElements[static_cast<std::size_t>(z)];
}

// Elements that may appear bare (outside brackets) in SMILES.
inline bool organic_subset(int z) {
  switch (z) {
  case 5: case 6: case 7: case 8: case 9:
  case 15: case 16: case 17: case 35: case 53:
    return true;
  default:
    return false;
  }
}

// Elements that may be written lowercase (aromatic). Se and As only in
// brackets.
inline bool aromatic_allowed(int z) {
  switch (z) {
  case 5: case 6: case 7: case 8: case 15: case 16: case 33: case 34:
    return true;
  default:
    return false;
  }
}

// Daylight-style normal valences, keyed by periodic group so formal charge
// can shift an atom to its isoelectronic neighbor column (e.g. N+ counts
// like C, O- like F).
inline int group_of(int z) {
  switch (z) {
  case 1: return 1;
  case 5: case 13: return 13;
  case 6: case 14: case 32: return 14;
  case 7: case 15: case 33: return 15;
  case 8: case 16: case 34: case 52: return 16;
  case 9: case 17: case 35: case 53: case 85: return 17;
  default: return 0; // no valence model; treated permissively
  }
}

// Allowed total valences for an atom given its formal charge. Empty result
// means "unchecked element": implicit hydrogens default to zero and no
// valence validation is performed.
inline std::vector<int> allowed_valences(int z, int charge) {
  int group = group_of(z);
  if (group == 0)
    return {};
  if (group == 1)
    return charge == 0 ? std::vector<int>{1} : std::vector<int>{};
  int column = group - charge;
  switch (column) {
  case 13: return {3};
  case 14: return {4};
  case 15:
    // P (and heavier) admit the pentavalent form; N as well, so that
    // uncharged nitro groups written N(=O)=O stay parseable.
    return {3, 5};
  case 16: return (z == 8) ? std::vector<int>{2} : std::vector<int>{2, 4, 6};
  case 17: return {1};
  default: return {};
  }
}

} // namespace adrgen::chem
