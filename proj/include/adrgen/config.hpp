//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "adrgen/errors.hpp"

namespace adrgen {

// Run configuration. The defaults are the published operating point of
// the model; everything is overridable from a flat key=value config file
// and again from command-line flags.
struct RunConfig {
  int gat_heads = 2;
  int epochs = 50;
  int batch_size = 64;
  int num_layers = 3; // transformer decoder layers
  int d_model = 128;
  int max_len = 200;
  int vocab_size = 13191; // label codec cap
  double lr_max = 1e-3;
  double lr_min = 1e-5;

  int decoder_heads = 4;
  int gat_layers = 2;
  int max_atoms = 128;
  double dropout = 0.1;
  double prune_threshold = 0.0; // motif avg-tfidf pruning; 0 = off
  bool prune_enabled = false;
  bool raw_features = false;    // skip z-score standardization
  bool sinusoidal_pos = false;  // fixed sinusoidal positional table
  bool allow_duplicates = false;
  bool float64 = false;         // train in 64-bit instead of 32-bit
  // target label ordering during teacher forcing: "frequency" (descending
  // training-corpus frequency), "dataset" (record order), or "random"
  // (reshuffled every epoch)
  std::string label_order = "frequency";
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

  void set(const std::string &key, const std::string &value) {
    auto as_bool = [&] {
      if (value == "true" || value == "1")
        return true;
      if (value == "false" || value == "0")
        return false;
      throw Error(errc::format_error, "config: bad bool for " + key);
    };
    try {
      if (key == "gat_heads") gat_heads = std::stoi(value);
      else if (key == "epochs") epochs = std::stoi(value);
      else if (key == "batch_size") batch_size = std::stoi(value);
      else if (key == "num_layers") num_layers = std::stoi(value);
      else if (key == "d_model") d_model = std::stoi(value);
      else if (key == "max_len") max_len = std::stoi(value);
      else if (key == "vocab_size") vocab_size = std::stoi(value);
      else if (key == "lr_max") lr_max = std::stod(value);
      else if (key == "lr_min") lr_min = std::stod(value);
      else if (key == "decoder_heads") decoder_heads = std::stoi(value);
      else if (key == "gat_layers") gat_layers = std::stoi(value);
      else if (key == "max_atoms") max_atoms = std::stoi(value);
      else if (key == "dropout") dropout = std::stod(value);
      else if (key == "prune_threshold") {
        prune_threshold = std::stod(value);
        prune_enabled = true;
      } else if (key == "raw_features") raw_features = as_bool();
      else if (key == "sinusoidal_pos") sinusoidal_pos = as_bool();
      else if (key == "allow_duplicates") allow_duplicates = as_bool();
      else if (key == "float64") float64 = as_bool();
      else if (key == "label_order") {
        if (value != "frequency" && value != "dataset" && value != "random")
          throw Error(errc::format_error,
                      "config: label_order must be frequency, dataset or "
                      "random");
        label_order = value;
      }
      else if (key == "seeds") {
        seeds.clear();
        std::stringstream ss(value);
        std::string tok;
        while (std::getline(ss, tok, ','))
          if (!tok.empty())
            seeds.push_back(std::stoull(tok));
        if (seeds.empty())
          throw Error(errc::format_error, "config: empty seed list");
      } else {
        throw Error(errc::format_error, "config: unknown key " + key);
      }
    } catch (const std::invalid_argument &) {
      throw Error(errc::format_error, "config: bad value for " + key);
    } catch (const std::out_of_range &) {
      throw Error(errc::format_error, "config: value out of range for " + key);
    }
  }

  void load_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
      throw Error(errc::file_not_found, path);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::size_t hash = line.find('#');
      if (hash != std::string::npos)
        line = line.substr(0, hash);
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        std::string t = line;
        t.erase(0, t.find_first_not_of(" \t\r\n"));
        if (t.empty())
          continue;
        throw Error(errc::format_error,
                    "config line " + std::to_string(line_no) +
                        ": expected key=value");
      }
      auto trim = [](std::string s) {
        std::size_t a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos)
          return std::string();
        std::size_t b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
      };
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (!key.empty())
        set(key, value);
    }
  }

  // Canonical serialization; its hash is embedded in every output.
  std::string canonical_text() const {
    std::ostringstream out;
    out << "allow_duplicates=" << (allow_duplicates ? 1 : 0) << "\n"
        << "batch_size=" << batch_size << "\n"
        << "d_model=" << d_model << "\n"
        << "decoder_heads=" << decoder_heads << "\n"
        << "dropout=" << dropout << "\n"
        << "epochs=" << epochs << "\n"
        << "float64=" << (float64 ? 1 : 0) << "\n"
        << "gat_heads=" << gat_heads << "\n"
        << "gat_layers=" << gat_layers << "\n"
        << "label_order=" << label_order << "\n"
        << "lr_max=" << lr_max << "\n"
        << "lr_min=" << lr_min << "\n"
        << "max_atoms=" << max_atoms << "\n"
        << "max_len=" << max_len << "\n"
        << "num_layers=" << num_layers << "\n"
        << "prune_enabled=" << (prune_enabled ? 1 : 0) << "\n"
        << "prune_threshold=" << prune_threshold << "\n"
        << "raw_features=" << (raw_features ? 1 : 0) << "\n"
        << "sinusoidal_pos=" << (sinusoidal_pos ? 1 : 0) << "\n"
        << "vocab_size=" << vocab_size << "\n";
    out << "seeds=";
    for (std::size_t i = 0; i < seeds.size(); ++i)
      out << (i ? "," : "") << seeds[i];
    out << "\n";
    return out.str();
  }

  std::string hash() const {
    // FNV-1a 64
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_text()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
  }
};

} // namespace adrgen
