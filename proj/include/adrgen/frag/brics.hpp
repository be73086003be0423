//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "adrgen/chem/molecule.hpp"
#include "adrgen/chem/perceive.hpp"
#include "adrgen/errors.hpp"
#include "adrgen/frag/brics_rules_data.hpp"

namespace adrgen::frag {

enum class BondKind { single, double_bond, triple, aromatic, ring, any };

struct NeighborSpec {
  std::vector<std::string> elements;
  BondKind bond = BondKind::any;
  std::optional<bool> aromatic;
  std::optional<bool> in_ring;
  bool carbonyl = false; // neighbor itself carries a double-bonded O
  int min_count = 1;
  std::optional<int> max_count;
};

struct EnvSpec {
  int env_id = 0;
  std::string description;
  std::vector<std::string> elements;
  std::optional<bool> aromatic;
  std::optional<bool> in_ring;
  std::optional<int> charge;
  int min_degree = 0;
  std::optional<int> max_degree;
  std::vector<chem::BondOrder> forbid_orders;
  std::optional<std::vector<std::string>> neighbor_elements_only;
  std::vector<NeighborSpec> neighbors;
};

class BricsRuleTable {
public:
  static BricsRuleTable from_json_text(const std::string &text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
      throw Error(errc::format_error,
                  std::string("brics rules: ") + e.what());
    }
    if (!j.contains("version") || !j["version"].is_number_integer())
      throw Error(errc::format_error, "brics rules: missing version field");
    if (j["version"].get<int>() != 1)
      throw Error(errc::format_error,
                  "brics rules: unsupported version " +
                      j["version"].dump());
    BricsRuleTable t;
    for (const auto &je : j.at("environments")) {
      EnvSpec e;
      e.env_id = je.at("env_id").get<int>();
      e.description = je.value("description", "");
      e.elements = je.at("elements").get<std::vector<std::string>>();
      e.aromatic = tri_state(je, "aromatic");
      e.in_ring = tri_state(je, "in_ring");
      if (je.contains("charge") && !je["charge"].is_null())
        e.charge = je["charge"].get<int>();
      e.min_degree = je.value("min_degree", 0);
      if (je.contains("max_degree") && !je["max_degree"].is_null())
        e.max_degree = je["max_degree"].get<int>();
      for (const auto &o : je.value("forbid_orders", nlohmann::json::array()))
        e.forbid_orders.push_back(parse_order(o.get<std::string>()));
      if (je.contains("neighbor_elements_only") &&
          !je["neighbor_elements_only"].is_null())
        e.neighbor_elements_only =
            je["neighbor_elements_only"].get<std::vector<std::string>>();
      for (const auto &jn : je.value("neighbors", nlohmann::json::array())) {
        NeighborSpec n;
        n.elements = jn.at("elements").get<std::vector<std::string>>();
        n.bond = parse_bond_kind(jn.value("bond", std::string("any")));
        n.aromatic = tri_state(jn, "aromatic");
        n.in_ring = tri_state(jn, "in_ring");
        n.carbonyl = jn.value("carbonyl", false);
        n.min_count = jn.value("min_count", 1);
        if (jn.contains("max_count") && !jn["max_count"].is_null())
          n.max_count = jn["max_count"].get<int>();
        e.neighbors.push_back(std::move(n));
      }
      t.environments_.push_back(std::move(e));
    }
    if (t.environments_.size() != 16)
      throw Error(errc::format_error,
                  "brics rules: expected 16 environments, got " +
                      std::to_string(t.environments_.size()));
    for (const auto &jp : j.at("compatible_pairs")) {
      int a = jp.at(0).get<int>();
      int b = jp.at(1).get<int>();
      t.pairs_.insert({std::min(a, b), std::max(a, b)});
    }
    return t;
  }

  static BricsRuleTable from_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw Error(errc::file_not_found, path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return from_json_text(text);
  }

  static const BricsRuleTable &builtin() {
    static const BricsRuleTable table =
        from_json_text(builtin_brics_rules_json());
    return table;
  }

  const std::vector<EnvSpec> &environments() const { return environments_; }

  bool compatible(int a, int b) const {
    return pairs_.count({std::min(a, b), std::max(a, b)}) > 0;
  }

  // All environment ids matching one perceived atom, ascending.
  std::vector<int> matching_environments(const chem::PerceivedMolecule &p,
                                         int atom) const {
    std::vector<int> out;
    for (const EnvSpec &e : environments_)
      if (matches(p, atom, e))
        out.push_back(e.env_id);
    return out;
  }

  bool matches(const chem::PerceivedMolecule &p, int atom,
               const EnvSpec &e) const {
    const chem::Atom &a = p.base.atoms[static_cast<std::size_t>(atom)];
    if (std::find(e.elements.begin(), e.elements.end(), a.element) ==
        e.elements.end())
      return false;
    if (e.aromatic && *e.aromatic != a.aromatic)
      return false;
    if (e.in_ring &&
        *e.in_ring != (p.ring_membership[static_cast<std::size_t>(atom)] != 0))
      return false;
    if (e.charge && *e.charge != a.formal_charge)
      return false;
    int deg = p.heavy_degree(atom);
    if (deg < e.min_degree)
      return false;
    if (e.max_degree && deg > *e.max_degree)
      return false;
    for (chem::BondOrder o : e.forbid_orders)
      for (const chem::Bond &b : p.base.bonds)
        if ((b.a == atom || b.b == atom) && b.order == o)
          return false;
    if (e.neighbor_elements_only) {
      for (const chem::Bond &b : p.base.bonds) {
        int other = b.a == atom ? b.b : (b.b == atom ? b.a : -1);
        if (other < 0)
          continue;
        const chem::Atom &na = p.base.atoms[static_cast<std::size_t>(other)];
        if (na.atomic_number == 1)
          continue;
        if (std::find(e.neighbor_elements_only->begin(),
                      e.neighbor_elements_only->end(),
                      na.element) == e.neighbor_elements_only->end())
          return false;
      }
    }
    for (const NeighborSpec &n : e.neighbors) {
      int count = 0;
      for (int bi = 0; bi < p.n_bonds(); ++bi) {
        const chem::Bond &b = p.base.bonds[static_cast<std::size_t>(bi)];
        int other = b.a == atom ? b.b : (b.b == atom ? b.a : -1);
        if (other < 0)
          continue;
        if (!bond_kind_matches(p, bi, n.bond))
          continue;
        const chem::Atom &na = p.base.atoms[static_cast<std::size_t>(other)];
        if (std::find(n.elements.begin(), n.elements.end(), na.element) ==
            n.elements.end())
          continue;
        if (n.aromatic && *n.aromatic != na.aromatic)
          continue;
        if (n.in_ring && *n.in_ring != (p.ring_membership[static_cast<
                                            std::size_t>(other)] != 0))
          continue;
        if (n.carbonyl && !has_carbonyl(p, other))
          continue;
        ++count;
      }
      if (count < n.min_count)
        return false;
      if (n.max_count && count > *n.max_count)
        return false;
    }
    return true;
  }

private:
  static std::optional<bool> tri_state(const nlohmann::json &j,
                                       const char *key) {
    if (!j.contains(key) || j[key].is_null())
      return std::nullopt;
    return j[key].get<bool>();
  }

  static chem::BondOrder parse_order(const std::string &s) {
    if (s == "single") return chem::BondOrder::single;
    if (s == "double") return chem::BondOrder::double_bond;
    if (s == "triple") return chem::BondOrder::triple;
    if (s == "aromatic") return chem::BondOrder::aromatic;
    throw Error(errc::format_error, "brics rules: bad bond order " + s);
  }

  static BondKind parse_bond_kind(const std::string &s) {
    if (s == "single") return BondKind::single;
    if (s == "double") return BondKind::double_bond;
    if (s == "triple") return BondKind::triple;
    if (s == "aromatic") return BondKind::aromatic;
    if (s == "ring") return BondKind::ring;
    if (s == "any") return BondKind::any;
    throw Error(errc::format_error, "brics rules: bad bond kind " + s);
  }

  static bool bond_kind_matches(const chem::PerceivedMolecule &p, int bi,
                                BondKind k) {
    const chem::Bond &b = p.base.bonds[static_cast<std::size_t>(bi)];
    switch (k) {
    case BondKind::single: return b.order == chem::BondOrder::single;
    case BondKind::double_bond: return b.order == chem::BondOrder::double_bond;
    case BondKind::triple: return b.order == chem::BondOrder::triple;
    case BondKind::aromatic: return b.order == chem::BondOrder::aromatic;
    case BondKind::ring: return p.ring_bonds[static_cast<std::size_t>(bi)] != 0;
    case BondKind::any: return true;
    }
    return false;
  }

  static bool has_carbonyl(const chem::PerceivedMolecule &p, int atom) {
    for (const chem::Bond &b : p.base.bonds) {
      if (b.order != chem::BondOrder::double_bond)
        continue;
      int other = b.a == atom ? b.b : (b.b == atom ? b.a : -1);
      if (other >= 0 &&
          p.base.atoms[static_cast<std::size_t>(other)].atomic_number == 8)
        return true;
    }
    return false;
  }

  std::vector<EnvSpec> environments_;
  std::set<std::pair<int, int>> pairs_;
};

} // namespace adrgen::frag
