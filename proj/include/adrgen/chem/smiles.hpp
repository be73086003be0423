//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adrgen/chem/elements.hpp"
#include "adrgen/chem/molecule.hpp"
#include "adrgen/errors.hpp"

namespace adrgen::chem {

// Recursive-descent-free single-pass SMILES reader for the grammar subset:
// organic-subset atoms (B C N O P S F Cl Br I, aromatic lowercase), bracket
// atoms with isotope/chirality/hcount/charge, bonds - = # : / \, branches,
// ring closures 1-9 and %nn, and the wildcard atom '*'. Multi-component
// inputs ('.') are rejected.
namespace detail {

struct PendingBond {
  BondOrder order = BondOrder::single;
  BondStereo stereo = BondStereo::none;
  bool explicit_order = false;
  std::size_t pos = 0;
};

struct RingOpening {
  int atom = -1;
  std::optional<BondOrder> order;
  BondStereo stereo = BondStereo::none;
  std::size_t pos = 0;
  std::size_t chiral_slot = 0; // index into opener's chiral_order to patch
};

class SmilesParser {
public:
  explicit SmilesParser(std::string_view text) : text_(text) {}

  Molecule parse() {
    if (text_.empty())
      throw Error(errc::empty_input, "empty SMILES string");
    for (std::size_t i = 0; i < text_.size(); ++i) {
      unsigned char c = static_cast<unsigned char>(text_[i]);
      if (c > 0x7e || c < 0x21)
        throw Error(errc::invalid_syntax, "non-printable or non-ASCII byte",
                    static_cast<std::ptrdiff_t>(i));
    }
    while (pos_ < text_.size())
      step();
    finish();
    mol_.source_text = std::string(text_);
    return std::move(mol_);
  }

private:
  void step() {
    char c = text_[pos_];
    switch (c) {
    case '.':
      throw Error(errc::multi_component_input,
                  "multi-component SMILES are not supported",
                  static_cast<std::ptrdiff_t>(pos_));
    case '(':
      if (prev_ < 0)
        throw Error(errc::invalid_syntax, "branch before any atom",
                    static_cast<std::ptrdiff_t>(pos_));
      if (pending_)
        throw Error(errc::invalid_syntax, "bond symbol before '('",
                    static_cast<std::ptrdiff_t>(pos_));
      stack_.push_back(prev_);
      ++pos_;
      return;
    case ')':
      if (stack_.empty())
        throw Error(errc::unbalanced_parenthesis, "unmatched ')'",
                    static_cast<std::ptrdiff_t>(pos_));
      if (pending_)
        throw Error(errc::invalid_syntax, "dangling bond before ')'",
                    static_cast<std::ptrdiff_t>(pos_));
      prev_ = stack_.back();
      stack_.pop_back();
      ++pos_;
      return;
    case '-': case '=': case '#': case ':': case '/': case '\\':
      if (pending_)
        throw Error(errc::invalid_syntax, "two consecutive bond symbols",
                    static_cast<std::ptrdiff_t>(pos_));
      if (prev_ < 0)
        throw Error(errc::invalid_syntax, "bond symbol before any atom",
                    static_cast<std::ptrdiff_t>(pos_));
      pending_ = make_bond(c, pos_);
      ++pos_;
      return;
    case '%': {
      if (pos_ + 2 >= text_.size() || !std::isdigit(text_[pos_ + 1]) ||
          !std::isdigit(text_[pos_ + 2]))
        throw Error(errc::invalid_syntax, "'%' needs two digits",
                    static_cast<std::ptrdiff_t>(pos_));
      int num = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      ring_digit(num, pos_);
      pos_ += 3;
      return;
    }
    default:
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ring_digit(c - '0', pos_);
        ++pos_;
        return;
      }
      if (c == '[') {
        bracket_atom();
        return;
      }
      organic_atom();
      return;
    }
  }

  static detail::PendingBond make_bond(char c, std::size_t pos) {
    PendingBond b;
    b.pos = pos;
    b.explicit_order = true;
    switch (c) {
    case '-': b.order = BondOrder::single; break;
    case '=': b.order = BondOrder::double_bond; break;
    case '#': b.order = BondOrder::triple; break;
    case ':': b.order = BondOrder::aromatic; break;
    case '/':
      b.order = BondOrder::single;
      b.stereo = BondStereo::cis;
      break;
    case '\\':
      b.order = BondOrder::single;
      b.stereo = BondStereo::trans;
      break;
    }
    return b;
  }

  void organic_atom() {
    std::size_t start = pos_;
    std::string_view rest = text_.substr(pos_);
    Atom atom;
    auto take = [&](std::string_view sym, int z, bool aromatic) {
      atom.element = element_by_number(z).symbol;
      atom.atomic_number = z;
      atom.aromatic = aromatic;
      pos_ += sym.size();
    };
    if (rest.starts_with("Cl"))
      take("Cl", 17, false);
    else if (rest.starts_with("Br"))
      take("Br", 35, false);
    else {
      char c = rest[0];
      switch (c) {
      case 'B': take("B", 5, false); break;
      case 'C': take("C", 6, false); break;
      case 'N': take("N", 7, false); break;
      case 'O': take("O", 8, false); break;
      case 'P': take("P", 15, false); break;
      case 'S': take("S", 16, false); break;
      case 'F': take("F", 9, false); break;
      case 'I': take("I", 53, false); break;
      case 'b': take("b", 5, true); break;
      case 'c': take("c", 6, true); break;
      case 'n': take("n", 7, true); break;
      case 'o': take("o", 8, true); break;
      case 'p': take("p", 15, true); break;
      case 's': take("s", 16, true); break;
      case '*': take("*", 0, false); break;
      default:
        throw Error(errc::unknown_element,
                    std::string("unexpected character '") + c + "'",
                    static_cast<std::ptrdiff_t>(start));
      }
    }
    add_atom(std::move(atom), start);
  }

  void bracket_atom() {
    std::size_t start = pos_;
    ++pos_; // '['
    Atom atom;
    atom.explicit_h = 0;
    // isotope
    int isotope = 0;
    bool has_iso = false;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      has_iso = true;
      isotope = isotope * 10 + (text_[pos_] - '0');
      if (isotope > 999)
        throw Error(errc::invalid_syntax, "isotope out of range",
                    static_cast<std::ptrdiff_t>(pos_));
      ++pos_;
    }
    atom.isotope = has_iso ? isotope : 0;
    // element symbol
    if (pos_ >= text_.size())
      throw Error(errc::invalid_syntax, "unterminated bracket atom",
                  static_cast<std::ptrdiff_t>(start));
    if (text_[pos_] == '*') {
      atom.element = "*";
      atom.atomic_number = 0;
      ++pos_;
    } else if (std::isupper(static_cast<unsigned char>(text_[pos_]))) {
      std::string sym(1, text_[pos_]);
      if (pos_ + 1 < text_.size() &&
          std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        std::string two = sym + text_[pos_ + 1];
        if (atomic_number_of(two)) {
          sym = two;
        }
      }
      auto z = atomic_number_of(sym);
      if (!z)
        throw Error(errc::unknown_element, "unknown element '" + sym + "'",
                    static_cast<std::ptrdiff_t>(pos_));
      atom.element = sym;
      atom.atomic_number = *z;
      pos_ += sym.size();
    } else if (std::islower(static_cast<unsigned char>(text_[pos_]))) {
      // aromatic symbol; se/as are the two-letter cases
      std::string sym(1, text_[pos_]);
      if (pos_ + 1 < text_.size() &&
          (text_.substr(pos_, 2) == "se" || text_.substr(pos_, 2) == "as"))
        sym = std::string(text_.substr(pos_, 2));
      std::string upper = sym;
      upper[0] = static_cast<char>(std::toupper(upper[0]));
      auto z = atomic_number_of(upper);
      if (!z || !aromatic_allowed(*z))
        throw Error(errc::unknown_element,
                    "unknown aromatic symbol '" + sym + "'",
                    static_cast<std::ptrdiff_t>(pos_));
      atom.element = upper;
      atom.atomic_number = *z;
      atom.aromatic = true;
      pos_ += sym.size();
    } else {
      throw Error(errc::invalid_syntax, "expected element symbol",
                  static_cast<std::ptrdiff_t>(pos_));
    }
    // chirality
    if (pos_ < text_.size() && text_[pos_] == '@') {
      ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '@') {
        atom.chirality = Chirality::clockwise;
        ++pos_;
      } else {
        atom.chirality = Chirality::counterclockwise;
      }
    }
    // hydrogen count
    if (pos_ < text_.size() && text_[pos_] == 'H') {
      ++pos_;
      int h = 1;
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        h = text_[pos_] - '0';
        ++pos_;
      }
      atom.explicit_h = h;
    }
    // charge
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      char sign = text_[pos_];
      int mag = 1;
      ++pos_;
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        mag = text_[pos_] - '0';
        ++pos_;
      } else {
        while (pos_ < text_.size() && text_[pos_] == sign) {
          ++mag;
          ++pos_;
        }
      }
      atom.formal_charge = (sign == '+') ? mag : -mag;
    }
    // atom class: accepted and ignored
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw Error(errc::invalid_syntax, "atom class needs digits",
                    static_cast<std::ptrdiff_t>(pos_));
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    if (pos_ >= text_.size() || text_[pos_] != ']')
      throw Error(errc::invalid_syntax, "expected ']'",
                  static_cast<std::ptrdiff_t>(pos_));
    ++pos_;
    add_atom(std::move(atom), start);
  }

  void add_atom(Atom atom, std::size_t text_pos) {
    int idx = static_cast<int>(mol_.atoms.size());
    bool has_bracket_h = atom.explicit_h >= 1;
    mol_.atoms.push_back(std::move(atom));
    if (prev_ >= 0) {
      make_edge(prev_, idx, pending_, text_pos);
      mol_.atoms[static_cast<std::size_t>(idx)].chiral_order.push_back(prev_);
    }
    // The in-bracket hydrogen takes the neighbor slot right after the
    // preceding atom for chiral parity purposes.
    if (has_bracket_h)
      mol_.atoms[static_cast<std::size_t>(idx)].chiral_order.push_back(
          kImplicitHNeighbor);
    pending_.reset();
    prev_ = idx;
  }

  void make_edge(int a, int b, const std::optional<PendingBond> &pb,
                 std::size_t text_pos) {
    if (a == b)
      throw Error(errc::invalid_syntax, "bond joins an atom to itself",
                  static_cast<std::ptrdiff_t>(text_pos));
    if (mol_.bond_between(a, b))
      throw Error(errc::invalid_syntax, "duplicate bond between atoms",
                  static_cast<std::ptrdiff_t>(text_pos));
    Bond bond;
    bond.a = a;
    bond.b = b;
    if (pb && pb->explicit_order) {
      bond.order = pb->order;
      bond.stereo = pb->stereo;
    } else {
      bool both_aromatic =
          mol_.atoms[static_cast<std::size_t>(a)].aromatic &&
          mol_.atoms[static_cast<std::size_t>(b)].aromatic;
      bond.order = both_aromatic ? BondOrder::aromatic : BondOrder::single;
    }
    if (bond.order == BondOrder::aromatic &&
        (!mol_.atoms[static_cast<std::size_t>(a)].aromatic ||
         !mol_.atoms[static_cast<std::size_t>(b)].aromatic))
      throw Error(errc::invalid_syntax,
                  "aromatic bond between non-aromatic atoms",
                  static_cast<std::ptrdiff_t>(text_pos));
    mol_.atoms[static_cast<std::size_t>(a)].chiral_order.push_back(b);
    mol_.bonds.push_back(bond);
  }

  void ring_digit(int num, std::size_t text_pos) {
    if (prev_ < 0)
      throw Error(errc::invalid_syntax, "ring closure before any atom",
                  static_cast<std::ptrdiff_t>(text_pos));
    auto it = open_rings_.find(num);
    if (it == open_rings_.end()) {
      RingOpening o;
      o.atom = prev_;
      if (pending_ && pending_->explicit_order) {
        o.order = pending_->order;
        o.stereo = pending_->stereo;
      }
      o.pos = text_pos;
      auto &order_list =
          mol_.atoms[static_cast<std::size_t>(prev_)].chiral_order;
      o.chiral_slot = order_list.size();
      order_list.push_back(-2); // patched on closure
      open_rings_.emplace(num, o);
      pending_.reset();
      return;
    }
    RingOpening o = it->second;
    open_rings_.erase(it);
    if (o.atom == prev_)
      throw Error(errc::invalid_syntax, "ring closure on a single atom",
                  static_cast<std::ptrdiff_t>(text_pos));
    std::optional<BondOrder> here;
    BondStereo stereo_here = BondStereo::none;
    if (pending_ && pending_->explicit_order) {
      here = pending_->order;
      stereo_here = pending_->stereo;
    }
    if (here && o.order && *here != *o.order)
      throw Error(errc::bond_order_mismatch,
                  "ring closure bond orders disagree",
                  static_cast<std::ptrdiff_t>(text_pos));
    if (mol_.bond_between(o.atom, prev_))
      throw Error(errc::invalid_syntax, "duplicate bond between atoms",
                  static_cast<std::ptrdiff_t>(text_pos));
    Bond bond;
    bond.a = o.atom;
    bond.b = prev_;
    if (here || o.order) {
      bond.order = here ? *here : *o.order;
      bond.stereo = here ? stereo_here : o.stereo;
    } else {
      bool both_aromatic =
          mol_.atoms[static_cast<std::size_t>(o.atom)].aromatic &&
          mol_.atoms[static_cast<std::size_t>(prev_)].aromatic;
      bond.order = both_aromatic ? BondOrder::aromatic : BondOrder::single;
    }
    if (bond.order == BondOrder::aromatic &&
        (!mol_.atoms[static_cast<std::size_t>(o.atom)].aromatic ||
         !mol_.atoms[static_cast<std::size_t>(prev_)].aromatic))
      throw Error(errc::invalid_syntax,
                  "aromatic bond between non-aromatic atoms",
                  static_cast<std::ptrdiff_t>(text_pos));
    mol_.bonds.push_back(bond);
    // patch chiral neighbor slots on both endpoints
    mol_.atoms[static_cast<std::size_t>(o.atom)]
        .chiral_order[o.chiral_slot] = prev_;
    mol_.atoms[static_cast<std::size_t>(prev_)].chiral_order.push_back(
        o.atom);
    pending_.reset();
  }

  void finish() {
    if (pending_)
      throw Error(errc::invalid_syntax, "dangling bond at end of input",
                  static_cast<std::ptrdiff_t>(pending_->pos));
    if (!stack_.empty())
      throw Error(errc::unbalanced_parenthesis, "unclosed '('",
                  static_cast<std::ptrdiff_t>(text_.size()));
    if (!open_rings_.empty()) {
      const RingOpening &o = open_rings_.begin()->second;
      throw Error(errc::unclosed_ring_bond, "unclosed ring bond",
                  static_cast<std::ptrdiff_t>(o.pos));
    }
    if (mol_.atoms.empty())
      throw Error(errc::invalid_syntax, "no atoms in input");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Molecule mol_;
  int prev_ = -1;
  std::vector<int> stack_;
  std::optional<PendingBond> pending_;
  std::map<int, RingOpening> open_rings_;
};

} // namespace detail

inline Molecule parse_smiles(std::string_view text) {
  return detail::SmilesParser(text).parse();
}

} // namespace adrgen::chem
