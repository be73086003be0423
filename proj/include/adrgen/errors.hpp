//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adrgen {

// Typed error codes for every failure the library can raise. CLI maps these
// onto process exit codes (usage=1, data=2, numeric=3).
enum class errc {
  // chem
  empty_input,
  unbalanced_parenthesis,
  unclosed_ring_bond,
  unknown_element,
  multi_component_input,
  bond_order_mismatch,
  invalid_syntax,
  valence_exceeded,
  disconnected_subset,
  // graph
  domain_error,
  empty_corpus,
  unknown_motif,
  no_known_motif,
  // nn / model
  shape_mismatch,
  all_positions_masked,
  non_scalar_loss,
  step_out_of_range,
  sequence_too_long,
  too_many_atoms,
  unknown_molecule_node,
  numeric_failure,
  // pipeline / io
  file_not_found,
  header_mismatch,
  empty_dataset,
  too_few_records,
  length_mismatch,
  unknown_drug,
  format_error,
};

inline const char *errc_name(errc c) {
  switch (c) {
  case errc::empty_input: return "EmptyInput";
  case errc::unbalanced_parenthesis: return "UnbalancedParenthesis";
  case errc::unclosed_ring_bond: return "UnclosedRingBond";
  case errc::unknown_element: return "UnknownElement";
  case errc::multi_component_input: return "MultiComponentInput";
  case errc::bond_order_mismatch: return "BondOrderMismatch";
  case errc::invalid_syntax: return "InvalidSyntax";
  case errc::valence_exceeded: return "ValenceExceeded";
  case errc::disconnected_subset: return "DisconnectedSubset";
  case errc::domain_error: return "DomainError";
  case errc::empty_corpus: return "EmptyCorpus";
  case errc::unknown_motif: return "UnknownMotif";
  case errc::no_known_motif: return "NoKnownMotif";
  case errc::shape_mismatch: return "ShapeMismatch";
  case errc::all_positions_masked: return "AllPositionsMasked";
  case errc::non_scalar_loss: return "NonScalarLoss";
  case errc::step_out_of_range: return "StepOutOfRange";
  case errc::sequence_too_long: return "SequenceTooLong";
  case errc::too_many_atoms: return "TooManyAtoms";
  case errc::unknown_molecule_node: return "UnknownMoleculeNode";
  case errc::numeric_failure: return "NumericFailure";
  case errc::file_not_found: return "FileNotFound";
  case errc::header_mismatch: return "HeaderMismatch";
  case errc::empty_dataset: return "EmptyDataset";
  case errc::too_few_records: return "TooFewRecords";
  case errc::length_mismatch: return "LengthMismatch";
  case errc::unknown_drug: return "UnknownDrug";
  case errc::format_error: return "FormatError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
public:
  // offset, when >= 0, is a byte offset into the offending input text.
  Error(errc code, const std::string &msg, std::ptrdiff_t offset = -1)
      : std::runtime_error(format(code, msg, offset)), code_(code),
        offset_(offset) {}

  errc code() const noexcept { return code_; }
  std::ptrdiff_t offset() const noexcept { return offset_; }

private:
  static std::string format(errc code, const std::string &msg,
                            std::ptrdiff_t offset) {
    std::string s = errc_name(code);
    s += ": ";
    s += msg;
    if (offset >= 0) {
      s += " (at byte ";
      s += std::to_string(offset);
      s += ")";
    }
    return s;
  }

  errc code_;
  std::ptrdiff_t offset_;
};

} // namespace adrgen
