//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "adrgen/chem/molecule.hpp"
#include "adrgen/chem/smiles.hpp"
#include "adrgen/errors.hpp"
#include "adrgen/nn/rng.hpp"

namespace adrgen::pipeline {

struct DatasetRecord {
  std::string drug_id;
  std::string structure; // SMILES text or inline graph JSON
  std::vector<std::string> labels;
};

struct RowError {
  long line = 0;
  std::string message;
};

struct Dataset {
  std::vector<DatasetRecord> records;
  std::vector<RowError> errors;
};

inline constexpr const char *kDatasetHeader = "drug_id\tstructure\tlabels";

namespace detail {

inline std::string trim(const std::string &s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos)
    return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

} // namespace detail

// TSV loader: header line, then drug_id<TAB>structure<TAB>labels with
// comma-separated labels. Malformed rows land in the error report instead
// of being silently dropped.
inline Dataset load_dataset(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(errc::file_not_found, path);
  Dataset out;
  std::string line;
  if (!std::getline(in, line))
    throw Error(errc::empty_dataset, path + " is empty");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != kDatasetHeader)
    throw Error(errc::header_mismatch,
                "expected header '" + std::string(kDatasetHeader) + "'");
  std::set<std::string> seen_ids;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (detail::trim(line).empty())
      continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        cols.push_back(line.substr(start));
        break;
      }
      cols.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (cols.size() != 3) {
      out.errors.push_back({line_no, "expected 3 columns, got " +
                                         std::to_string(cols.size())});
      continue;
    }
    DatasetRecord rec;
    rec.drug_id = detail::trim(cols[0]);
    rec.structure = detail::trim(cols[1]);
    if (rec.drug_id.empty() || rec.structure.empty()) {
      out.errors.push_back({line_no, "empty drug_id or structure"});
      continue;
    }
    if (!seen_ids.insert(rec.drug_id).second) {
      out.errors.push_back({line_no, "duplicate drug_id " + rec.drug_id});
      continue;
    }
    std::stringstream labels(cols[2]);
    std::string label;
    std::set<std::string> dedup;
    while (std::getline(labels, label, ',')) {
      label = detail::trim(label);
      if (label.empty())
        continue;
      if (dedup.insert(label).second)
        rec.labels.push_back(label);
    }
    if (rec.labels.empty()) {
      out.errors.push_back({line_no, "no labels"});
      continue;
    }
    out.records.push_back(std::move(rec));
  }
  if (out.records.empty())
    throw Error(errc::empty_dataset, path + " holds no valid records");
  return out;
}

// Structure cells starting with '{' are pre-parsed graph JSON:
//   {"atoms":[{"element","charge","h","aromatic","isotope"}...],
//    "bonds":[{"a","b","order","stereo"}...]}
inline chem::Molecule molecule_from_json(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw Error(errc::format_error, std::string("graph json: ") + e.what());
  }
  chem::Molecule mol;
  mol.source_text = text;
  for (const auto &ja : j.at("atoms")) {
    chem::Atom a;
    a.element = ja.at("element").get<std::string>();
    auto z = chem::atomic_number_of(a.element);
    if (!z)
      throw Error(errc::unknown_element, "graph json: " + a.element);
    a.atomic_number = *z;
    a.formal_charge = ja.value("charge", 0);
    a.explicit_h = ja.value("h", -1);
    a.aromatic = ja.value("aromatic", false);
    a.isotope = ja.value("isotope", 0);
    std::string chir = ja.value("chirality", "none");
    a.chirality = chir == "clockwise" ? chem::Chirality::clockwise
                  : chir == "counterclockwise"
                      ? chem::Chirality::counterclockwise
                      : chem::Chirality::none;
    mol.atoms.push_back(std::move(a));
  }
  for (const auto &jb : j.at("bonds")) {
    chem::Bond b;
    b.a = jb.at("a").get<int>();
    b.b = jb.at("b").get<int>();
    if (b.a < 0 || b.b < 0 ||
        b.a >= static_cast<int>(mol.atoms.size()) ||
        b.b >= static_cast<int>(mol.atoms.size()) || b.a == b.b)
      throw Error(errc::format_error, "graph json: bad bond endpoints");
    std::string order = jb.value("order", "single");
    b.order = order == "double"     ? chem::BondOrder::double_bond
              : order == "triple"   ? chem::BondOrder::triple
              : order == "aromatic" ? chem::BondOrder::aromatic
                                    : chem::BondOrder::single;
    std::string stereo = jb.value("stereo", "none");
    b.stereo = stereo == "cis"     ? chem::BondStereo::cis
               : stereo == "trans" ? chem::BondStereo::trans
                                   : chem::BondStereo::none;
    mol.atoms[static_cast<std::size_t>(b.a)].chiral_order.push_back(b.b);
    mol.atoms[static_cast<std::size_t>(b.b)].chiral_order.push_back(b.a);
    mol.bonds.push_back(b);
  }
  if (mol.atoms.empty())
    throw Error(errc::format_error, "graph json: no atoms");
  // connectivity: single component required, as for SMILES
  std::vector<char> seen(mol.atoms.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  auto adj = mol.adjacency();
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (auto [v, bi] : adj[static_cast<std::size_t>(u)]) {
      (void)bi;
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        stack.push_back(v);
      }
    }
  }
  for (char c : seen)
    if (!c)
      throw Error(errc::multi_component_input,
                  "graph json: disconnected molecule");
  return mol;
}

inline chem::Molecule parse_structure(const std::string &structure) {
  if (!structure.empty() && structure.front() == '{')
    return molecule_from_json(structure);
  return chem::parse_smiles(structure);
}

struct Split {
  std::vector<std::string> train, valid, test;
  std::uint64_t seed = 0;
};

// Drug-wise 8:1:1 split by seeded shuffle; identical seeds give identical
// splits.
inline Split split_dataset(const std::vector<DatasetRecord> &records,
                           std::uint64_t seed) {
  if (records.size() < 10)
    throw Error(errc::too_few_records,
                "need at least 10 records, got " +
                    std::to_string(records.size()));
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const DatasetRecord &r : records)
    ids.push_back(r.drug_id);
  nn::Rng rng(seed);
  rng.shuffle(ids);
  std::size_t n = ids.size();
  auto round_to = [](double x) {
    return static_cast<std::size_t>(std::lround(x));
  };
  std::size_t n_train = round_to(0.8 * static_cast<double>(n));
  std::size_t n_valid = round_to(0.1 * static_cast<double>(n));
  if (n_train + n_valid >= n)
    n_valid = n - n_train > 1 ? 1 : 0;
  Split s;
  s.seed = seed;
  s.train.assign(ids.begin(), ids.begin() + static_cast<long>(n_train));
  s.valid.assign(ids.begin() + static_cast<long>(n_train),
                 ids.begin() + static_cast<long>(n_train + n_valid));
  s.test.assign(ids.begin() + static_cast<long>(n_train + n_valid),
                ids.end());
  return s;
}

} // namespace adrgen::pipeline
