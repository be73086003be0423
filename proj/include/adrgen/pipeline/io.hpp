//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "adrgen/config.hpp"
#include "adrgen/graph/io.hpp"
#include "adrgen/pipeline/codec.hpp"
#include "adrgen/pipeline/metrics.hpp"
#include "adrgen/pipeline/train.hpp"

namespace adrgen::pipeline {

inline constexpr int kCodecFormatVersion = 1;
inline constexpr int kManifestFormatVersion = 1;

inline nlohmann::json codec_to_json(const LabelCodec &codec) {
  return nlohmann::json{{"version", kCodecFormatVersion},
                        {"labels", codec.labels()}};
}

inline LabelCodec codec_from_json(const nlohmann::json &j) {
  if (!j.contains("version") || j["version"].get<int>() != kCodecFormatVersion)
    throw Error(errc::format_error, "codec: unsupported version");
  return LabelCodec::from_labels(
      j.at("labels").get<std::vector<std::string>>());
}

inline nlohmann::json metrics_to_json(const MetricsReport &r,
                                      std::uint64_t seed,
                                      const std::string &config_hash) {
  return nlohmann::json{{"seed", seed},
                        {"precision", r.precision},
                        {"recall", r.recall},
                        {"f1", r.f1},
                        {"tp", r.tp},
                        {"fp", r.fp},
                        {"fn", r.fn},
                        {"config_hash", config_hash}};
}

inline nlohmann::json aggregate_to_json(const AggregateMetrics &a,
                                        const std::vector<std::uint64_t> &seeds,
                                        const std::string &config_hash) {
  nlohmann::json per_seed = nlohmann::json::array();
  for (std::size_t i = 0; i < a.per_seed.size(); ++i)
    per_seed.push_back(metrics_to_json(a.per_seed[i], seeds[i], config_hash));
  return nlohmann::json{
      {"precision", format_pm(a.precision_mean, a.precision_std)},
      {"recall", format_pm(a.recall_mean, a.recall_std)},
      {"f1", format_pm(a.f1_mean, a.f1_std)},
      {"precision_mean", a.precision_mean},
      {"precision_std", a.precision_std},
      {"recall_mean", a.recall_mean},
      {"recall_std", a.recall_std},
      {"f1_mean", a.f1_mean},
      {"f1_std", a.f1_std},
      {"single_seed_warning", a.single_seed_warning},
      {"per_seed", per_seed},
      {"config_hash", config_hash}};
}

// model.json: enough to rebuild the network and run prediction.
inline nlohmann::json manifest_to_json(const RunConfig &cfg,
                                       std::uint64_t primary_seed,
                                       int n_tokens, int assoc_dim) {
  return nlohmann::json{{"version", kManifestFormatVersion},
                        {"config_hash", cfg.hash()},
                        {"primary_seed", primary_seed},
                        {"n_tokens", n_tokens},
                        {"assoc_dim", assoc_dim},
                        {"d_model", cfg.d_model},
                        {"gat_heads", cfg.gat_heads},
                        {"gat_layers", cfg.gat_layers},
                        {"decoder_heads", cfg.decoder_heads},
                        {"num_layers", cfg.num_layers},
                        {"max_len", cfg.max_len},
                        {"max_atoms", cfg.max_atoms},
                        {"sinusoidal_pos", cfg.sinusoidal_pos},
                        {"raw_features", cfg.raw_features},
                        {"allow_duplicates", cfg.allow_duplicates},
                        {"float64", cfg.float64}};
}

} // namespace adrgen::pipeline
