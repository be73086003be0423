//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "adrgen/chem/elements.hpp"
#include "adrgen/chem/molecule.hpp"
#include "adrgen/chem/perceive.hpp"
#include "adrgen/errors.hpp"

namespace adrgen::chem {

namespace detail {

// Self-contained fragment with resolved hydrogen counts; the unit the
// canonicalizer works on. Attachment points appear as wildcard atoms.
struct CanonMol {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::vector<int> implicit_h;
  std::vector<std::vector<std::pair<int, int>>> adj; // (neighbor, bond)

  int n() const { return static_cast<int>(atoms.size()); }

  void build_adjacency() {
    adj.assign(atoms.size(), {});
    for (int bi = 0; bi < static_cast<int>(bonds.size()); ++bi) {
      const Bond &b = bonds[static_cast<std::size_t>(bi)];
      adj[static_cast<std::size_t>(b.a)].emplace_back(b.b, bi);
      adj[static_cast<std::size_t>(b.b)].emplace_back(b.a, bi);
    }
  }
};

// Extracts the subgraph induced by `subset`. When `with_attachments` is
// set, each severed bond is replaced by a wildcard atom carrying the
// severed bond order. Throws DisconnectedSubset when the induced graph is
// not connected.
inline CanonMol extract_fragment(const PerceivedMolecule &p,
                                 const std::vector<int> &subset,
                                 bool with_attachments) {
  if (subset.empty())
    throw Error(errc::empty_input, "empty atom subset");
  CanonMol out;
  std::map<int, int> to_local;
  for (int a : subset) {
    if (a < 0 || a >= p.n_atoms())
      throw Error(errc::invalid_syntax, "atom index out of range");
    if (to_local.count(a))
      throw Error(errc::invalid_syntax, "duplicate atom in subset");
    to_local[a] = static_cast<int>(out.atoms.size());
    out.atoms.push_back(p.base.atoms[static_cast<std::size_t>(a)]);
    out.implicit_h.push_back(p.implicit_h[static_cast<std::size_t>(a)]);
  }
  for (const Bond &b : p.base.bonds) {
    auto ia = to_local.find(b.a);
    auto ib = to_local.find(b.b);
    if (ia != to_local.end() && ib != to_local.end()) {
      Bond nb = b;
      nb.a = ia->second;
      nb.b = ib->second;
      out.bonds.push_back(nb);
    } else if (with_attachments &&
               (ia != to_local.end() || ib != to_local.end())) {
      int inside = ia != to_local.end() ? ia->second : ib->second;
      int outside_parent = ia != to_local.end() ? b.b : b.a;
      Atom wc;
      wc.element = "*";
      wc.atomic_number = 0;
      int wc_idx = static_cast<int>(out.atoms.size());
      wc.chiral_order.push_back(inside);
      out.atoms.push_back(std::move(wc));
      out.implicit_h.push_back(0);
      Bond nb;
      nb.a = inside;
      nb.b = wc_idx;
      nb.order = b.order;
      out.bonds.push_back(nb);
      // the wildcard takes the severed neighbor's chirality slot
      for (int &slot : out.atoms[static_cast<std::size_t>(inside)].chiral_order)
        if (slot == outside_parent)
          slot = -1000 - wc_idx; // defer, remapped below
    }
  }
  // remap chiral neighbor references to local indices
  int n_subset = static_cast<int>(subset.size());
  for (int i = 0; i < n_subset; ++i) {
    Atom &a = out.atoms[static_cast<std::size_t>(i)];
    std::vector<int> remapped;
    bool lost = false;
    for (int slot : a.chiral_order) {
      if (slot == kImplicitHNeighbor) {
        remapped.push_back(kImplicitHNeighbor);
      } else if (slot <= -1000) {
        remapped.push_back(-1000 - slot);
      } else {
        auto it = to_local.find(slot);
        if (it == to_local.end())
          lost = true;
        else
          remapped.push_back(it->second);
      }
    }
    if (lost && a.chirality != Chirality::none) {
      a.chirality = Chirality::none;
      remapped.clear();
    }
    a.chiral_order = std::move(remapped);
  }
  out.build_adjacency();
  // connectivity over the induced subgraph (wildcards are leaves and do
  // not affect it)
  std::vector<char> seen(out.atoms.size(), 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    int u = queue.back();
    queue.pop_back();
    for (auto [v, bi] : out.adj[static_cast<std::size_t>(u)]) {
      (void)bi;
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        queue.push_back(v);
      }
    }
  }
  for (int i = 0; i < n_subset; ++i)
    if (!seen[static_cast<std::size_t>(i)])
      throw Error(errc::disconnected_subset,
                  "subset does not induce a connected subgraph");
  return out;
}

inline std::vector<int> dense_ranks(std::vector<std::pair<std::vector<long long>, int>> keyed) {
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> rank(keyed.size(), 0);
  int r = 0;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    if (i > 0 && keyed[i].first != keyed[i - 1].first)
      ++r;
    rank[static_cast<std::size_t>(keyed[i].second)] = r;
  }
  return rank;
}

// ---- deterministic SMILES emission for a fully ranked fragment ----

class RankedWriter {
public:
  RankedWriter(const CanonMol &m, const std::vector<int> &rank)
      : m_(m), rank_(rank) {}

  std::string write() {
    int start = 0;
    for (int i = 0; i < m_.n(); ++i)
      if (rank_[static_cast<std::size_t>(i)] == 0)
        start = i;
    traverse(start);
    assign_digits();
    std::string out;
    emit(start, -1, out);
    return out;
  }

private:
  struct Closure {
    int opener, closer, bond;
    int digit = 0;
  };

  void traverse(int start) {
    visited_.assign(m_.atoms.size(), 0);
    bond_used_.assign(m_.bonds.size(), 0);
    children_.assign(m_.atoms.size(), {});
    order_.clear();
    struct Frame {
      int node;
      std::size_t next;
      std::vector<std::pair<int, int>> nbrs;
    };
    auto sorted_nbrs = [&](int u) {
      auto nb = m_.adj[static_cast<std::size_t>(u)];
      std::sort(nb.begin(), nb.end(), [&](auto &x, auto &y) {
        return rank_[static_cast<std::size_t>(x.first)] <
               rank_[static_cast<std::size_t>(y.first)];
      });
      return nb;
    };
    std::vector<Frame> stack;
    stack.push_back({start, 0, sorted_nbrs(start)});
    visited_[static_cast<std::size_t>(start)] = 1;
    order_.push_back(start);
    while (!stack.empty()) {
      Frame &f = stack.back();
      if (f.next >= f.nbrs.size()) {
        stack.pop_back();
        continue;
      }
      auto [v, bi] = f.nbrs[f.next++];
      if (bond_used_[static_cast<std::size_t>(bi)])
        continue;
      if (visited_[static_cast<std::size_t>(v)]) {
        bond_used_[static_cast<std::size_t>(bi)] = 1;
        closures_.push_back({v, f.node, bi, 0});
        continue;
      }
      bond_used_[static_cast<std::size_t>(bi)] = 1;
      visited_[static_cast<std::size_t>(v)] = 1;
      children_[static_cast<std::size_t>(f.node)].emplace_back(v, bi);
      order_.push_back(v);
      stack.push_back({v, 0, sorted_nbrs(v)});
    }
  }

  void assign_digits() {
    // digits are handed out in emission order and reused after closing
    std::vector<int> pos(m_.atoms.size(), 0);
    for (std::size_t i = 0; i < order_.size(); ++i)
      pos[static_cast<std::size_t>(order_[i])] = static_cast<int>(i);
    open_at_.assign(m_.atoms.size(), {});
    close_at_.assign(m_.atoms.size(), {});
    // closures at an opener sorted by closer emission position; stable for
    // determinism
    std::vector<int> cidx(closures_.size());
    std::iota(cidx.begin(), cidx.end(), 0);
    std::sort(cidx.begin(), cidx.end(), [&](int x, int y) {
      const Closure &a = closures_[static_cast<std::size_t>(x)];
      const Closure &b = closures_[static_cast<std::size_t>(y)];
      return std::make_pair(pos[static_cast<std::size_t>(a.opener)],
                            pos[static_cast<std::size_t>(a.closer)]) <
             std::make_pair(pos[static_cast<std::size_t>(b.opener)],
                            pos[static_cast<std::size_t>(b.closer)]);
    });
    std::vector<char> in_use(100, 0);
    // simulate the emission sequence
    std::vector<std::vector<int>> opening(m_.atoms.size());
    for (int ci : cidx)
      opening[static_cast<std::size_t>(
                  closures_[static_cast<std::size_t>(ci)].opener)]
          .push_back(ci);
    std::vector<std::vector<int>> closing(m_.atoms.size());
    for (std::size_t ci = 0; ci < closures_.size(); ++ci)
      closing[static_cast<std::size_t>(closures_[ci].closer)].push_back(
          static_cast<int>(ci));
    for (int u : order_) {
      for (int ci : closing[static_cast<std::size_t>(u)]) {
        Closure &c = closures_[static_cast<std::size_t>(ci)];
        in_use[static_cast<std::size_t>(c.digit)] = 0;
        close_at_[static_cast<std::size_t>(u)].push_back(ci);
      }
      for (int ci : opening[static_cast<std::size_t>(u)]) {
        Closure &c = closures_[static_cast<std::size_t>(ci)];
        int d = 1;
        while (d < 100 && in_use[static_cast<std::size_t>(d)])
          ++d;
        if (d >= 100)
          throw Error(errc::invalid_syntax, "more than 99 open ring bonds");
        c.digit = d;
        in_use[static_cast<std::size_t>(d)] = 1;
        open_at_[static_cast<std::size_t>(u)].push_back(ci);
      }
    }
    // closings print in ascending digit order
    for (auto &list : close_at_)
      std::sort(list.begin(), list.end(), [&](int x, int y) {
        return closures_[static_cast<std::size_t>(x)].digit <
               closures_[static_cast<std::size_t>(y)].digit;
      });
  }

  std::string bond_token(const Bond &b) const {
    switch (b.order) {
    case BondOrder::single:
      return (m_.atoms[static_cast<std::size_t>(b.a)].aromatic &&
              m_.atoms[static_cast<std::size_t>(b.b)].aromatic)
                 ? "-"
                 : "";
    case BondOrder::double_bond: return "=";
    case BondOrder::triple: return "#";
    case BondOrder::aromatic: return "";
    }
    return "";
  }

  static std::string digit_token(int d) {
    if (d <= 9)
      return std::string(1, static_cast<char>('0' + d));
    return "%" + std::to_string(d);
  }

  void emit(int u, int parent, std::string &out) {
    out += atom_token(u, parent);
    for (int ci : close_at_[static_cast<std::size_t>(u)])
      out += digit_token(closures_[static_cast<std::size_t>(ci)].digit);
    for (int ci : open_at_[static_cast<std::size_t>(u)]) {
      const Closure &c = closures_[static_cast<std::size_t>(ci)];
      out += bond_token(m_.bonds[static_cast<std::size_t>(c.bond)]);
      out += digit_token(c.digit);
    }
    const auto &kids = children_[static_cast<std::size_t>(u)];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      auto [v, bi] = kids[k];
      bool last = (k + 1 == kids.size());
      if (!last)
        out += '(';
      out += bond_token(m_.bonds[static_cast<std::size_t>(bi)]);
      emit(v, u, out);
      if (!last)
        out += ')';
    }
  }

  std::string atom_token(int u, int parent) {
    const Atom &a = m_.atoms[static_cast<std::size_t>(u)];
    int h = m_.implicit_h[static_cast<std::size_t>(u)];
    if (a.atomic_number == 0 && a.formal_charge == 0 && a.isotope == 0)
      return "*";
    bool bracket = a.isotope > 0 || a.formal_charge != 0 ||
                   a.chirality != Chirality::none ||
                   a.radical_electrons > 0 || a.atomic_number == 1 ||
                   (a.atomic_number != 0 && !organic_subset(a.atomic_number));
    if (!bracket && a.atomic_number != 0) {
      // bracket also when a bare re-parse would infer a different H count
      int sigma = 0;
      for (auto [v, bi] : m_.adj[static_cast<std::size_t>(u)]) {
        (void)v;
        sigma += bond_order_sigma(
            m_.bonds[static_cast<std::size_t>(bi)].order);
      }
      ResolvedValence rv =
          resolve_valence(a.atomic_number, 0, sigma, a.aromatic, -1);
      if (rv.implicit_h != h || rv.radicals != 0)
        bracket = true;
    }
    std::string sym = a.atomic_number == 0 ? "*" : a.element;
    if (a.aromatic)
      for (char &c : sym)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!bracket)
      return sym;
    std::string out = "[";
    if (a.isotope > 0)
      out += std::to_string(a.isotope);
    out += sym;
    Chirality chir = emitted_chirality(u, parent, h);
    if (chir == Chirality::counterclockwise)
      out += "@";
    else if (chir == Chirality::clockwise)
      out += "@@";
    if (h > 0) {
      out += "H";
      if (h > 1)
        out += std::to_string(h);
    }
    if (a.formal_charge != 0) {
      out += a.formal_charge > 0 ? "+" : "-";
      int mag = std::abs(a.formal_charge);
      if (mag > 1)
        out += std::to_string(mag);
    }
    out += "]";
    return out;
  }

  // Recomputes @/@@ so that the emitted neighbor order preserves the
  // parity recorded at parse time.
  Chirality emitted_chirality(int u, int parent, int h) {
    const Atom &a = m_.atoms[static_cast<std::size_t>(u)];
    if (a.chirality == Chirality::none)
      return Chirality::none;
    std::vector<int> emitted;
    if (parent >= 0)
      emitted.push_back(parent);
    if (h > 0)
      emitted.push_back(kImplicitHNeighbor);
    for (int ci : close_at_[static_cast<std::size_t>(u)])
      emitted.push_back(closures_[static_cast<std::size_t>(ci)].opener);
    for (int ci : open_at_[static_cast<std::size_t>(u)])
      emitted.push_back(closures_[static_cast<std::size_t>(ci)].closer);
    for (auto [v, bi] : children_[static_cast<std::size_t>(u)]) {
      (void)bi;
      emitted.push_back(v);
    }
    const std::vector<int> &ref = a.chiral_order;
    if (ref.size() != emitted.size())
      return Chirality::none;
    auto sorted_ref = ref;
    auto sorted_emit = emitted;
    std::sort(sorted_ref.begin(), sorted_ref.end());
    std::sort(sorted_emit.begin(), sorted_emit.end());
    if (sorted_ref != sorted_emit)
      return Chirality::none;
    // parity of the permutation taking ref order to emitted order
    std::vector<int> perm;
    for (int v : emitted) {
      auto it = std::find(ref.begin(), ref.end(), v);
      perm.push_back(static_cast<int>(it - ref.begin()));
    }
    int swaps = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j)
        if (perm[i] > perm[j])
          ++swaps;
    if (swaps % 2 == 0)
      return a.chirality;
    return a.chirality == Chirality::clockwise ? Chirality::counterclockwise
                                               : Chirality::clockwise;
  }

  const CanonMol &m_;
  const std::vector<int> &rank_;
  std::vector<char> visited_;
  std::vector<char> bond_used_;
  std::vector<std::vector<std::pair<int, int>>> children_;
  std::vector<int> order_;
  std::vector<Closure> closures_;
  std::vector<std::vector<int>> open_at_, close_at_;
};

// ---- canonical ranking: iterative refinement + branch-and-min ----

class Canonicalizer {
public:
  explicit Canonicalizer(const CanonMol &m) : m_(m) {}

  std::pair<std::vector<int>, std::string> run() {
    std::vector<int> initial = refine(initial_ranks());
    search(initial);
    return {best_rank_, best_string_};
  }

private:
  std::vector<int> initial_ranks() const {
    std::vector<std::pair<std::vector<long long>, int>> keyed;
    for (int i = 0; i < m_.n(); ++i) {
      const Atom &a = m_.atoms[static_cast<std::size_t>(i)];
      keyed.push_back(
          {{a.atomic_number, a.formal_charge,
            static_cast<long long>(m_.adj[static_cast<std::size_t>(i)].size()),
            m_.implicit_h[static_cast<std::size_t>(i)], a.aromatic ? 1 : 0},
           i});
    }
    return dense_ranks(std::move(keyed));
  }

  std::vector<int> refine(std::vector<int> rank) const {
    int classes = count_classes(rank);
    for (;;) {
      std::vector<std::pair<std::vector<long long>, int>> keyed;
      for (int i = 0; i < m_.n(); ++i) {
        std::vector<long long> key{rank[static_cast<std::size_t>(i)]};
        std::vector<std::pair<int, int>> nbr;
        for (auto [v, bi] : m_.adj[static_cast<std::size_t>(i)])
          nbr.emplace_back(
              rank[static_cast<std::size_t>(v)],
              static_cast<int>(
                  m_.bonds[static_cast<std::size_t>(bi)].order));
        std::sort(nbr.begin(), nbr.end());
        for (auto &[r, o] : nbr) {
          key.push_back(r);
          key.push_back(o);
        }
        keyed.push_back({std::move(key), i});
      }
      std::vector<int> next = dense_ranks(std::move(keyed));
      int next_classes = count_classes(next);
      if (next_classes == classes)
        return next;
      classes = next_classes;
      rank = std::move(next);
    }
  }

  static int count_classes(const std::vector<int> &rank) {
    return rank.empty() ? 0 : *std::max_element(rank.begin(), rank.end()) + 1;
  }

  void search(const std::vector<int> &rank) {
    if (count_classes(rank) == m_.n()) {
      if (++leaves_ > kMaxLeaves)
        throw Error(errc::domain_error,
                    "canonical ranking search limit exceeded");
      std::string s = RankedWriter(m_, rank).write();
      if (best_string_.empty() || s < best_string_) {
        best_string_ = s;
        best_rank_ = rank;
      }
      return;
    }
    // smallest still-tied rank class
    int target = -1;
    std::vector<int> members;
    for (int r = 0;; ++r) {
      members.clear();
      for (int i = 0; i < m_.n(); ++i)
        if (rank[static_cast<std::size_t>(i)] == r)
          members.push_back(i);
      if (members.size() > 1) {
        target = r;
        break;
      }
    }
    (void)target;
    for (int m : members) {
      std::vector<std::pair<std::vector<long long>, int>> keyed;
      for (int i = 0; i < m_.n(); ++i)
        keyed.push_back(
            {{rank[static_cast<std::size_t>(i)], i == m ? 0 : 1}, i});
      search(refine(dense_ranks(std::move(keyed))));
    }
  }

  static constexpr long kMaxLeaves = 1000000;
  const CanonMol &m_;
  long leaves_ = 0;
  std::vector<int> best_rank_;
  std::string best_string_;
};

} // namespace detail

// Permutation-invariant ranking of `subset` computed on the induced
// subgraph (attachment points are not considered).
inline std::vector<int> canonical_ranks(const PerceivedMolecule &p,
                                        const std::vector<int> &subset) {
  detail::CanonMol frag = detail::extract_fragment(p, subset, false);
  auto [rank, str] = detail::Canonicalizer(frag).run();
  (void)str;
  rank.resize(subset.size()); // drop any wildcard entries (none here)
  return rank;
}

// Canonical SMILES of the subgraph induced by `subset`; severed bonds are
// rendered as wildcard atoms "*". Byte-identical under any relabeling of
// the parent molecule.
inline std::string write_canonical(const PerceivedMolecule &p,
                                   const std::vector<int> &subset) {
  detail::CanonMol frag = detail::extract_fragment(p, subset, true);
  return detail::Canonicalizer(frag).run().second;
}

inline std::vector<int> all_atom_indices(const PerceivedMolecule &p) {
  std::vector<int> v(static_cast<std::size_t>(p.n_atoms()));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

inline std::string write_canonical(const PerceivedMolecule &p) {
  return write_canonical(p, all_atom_indices(p));
}

} // namespace adrgen::chem
