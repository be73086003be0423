//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: molecule-level commands stream stdin to stdout,
// corpus-level commands work on files. Exit codes: 0 success, 1 usage
// error, 2 data error, 3 numeric failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adrgen/chem/canonical.hpp"
#include "adrgen/chem/perceive.hpp"
#include "adrgen/chem/smiles.hpp"
#include "adrgen/config.hpp"
#include "adrgen/errors.hpp"
#include "adrgen/frag/brics.hpp"
#include "adrgen/frag/fragment.hpp"
#include "adrgen/graph/io.hpp"
#include "adrgen/nn/checkpoint.hpp"
#include "adrgen/pipeline/contrib.hpp"
#include "adrgen/pipeline/dataset.hpp"
#include "adrgen/pipeline/io.hpp"
#include "adrgen/pipeline/selftest.hpp"
#include "adrgen/pipeline/train.hpp"

namespace {

using namespace adrgen;

constexpr const char *kToolVersion = "1.0.0";

int exit_code_for(const Error &e) {
  switch (e.code()) {
  case errc::shape_mismatch:
  case errc::all_positions_masked:
  case errc::non_scalar_loss:
  case errc::step_out_of_range:
  case errc::numeric_failure:
    return 3;
  default:
    return 2;
  }
}

std::string order_name(chem::BondOrder o) {
  switch (o) {
  case chem::BondOrder::single: return "single";
  case chem::BondOrder::double_bond: return "double";
  case chem::BondOrder::triple: return "triple";
  case chem::BondOrder::aromatic: return "aromatic";
  }
  return "single";
}

std::string stereo_name(chem::BondStereo s) {
  switch (s) {
  case chem::BondStereo::none: return "none";
  case chem::BondStereo::cis: return "cis";
  case chem::BondStereo::trans: return "trans";
  }
  return "none";
}

std::string hyb_name(chem::Hybridization h) {
  switch (h) {
  case chem::Hybridization::other: return "other";
  case chem::Hybridization::sp: return "sp";
  case chem::Hybridization::sp2: return "sp2";
  case chem::Hybridization::sp3: return "sp3";
  }
  return "other";
}

std::string chir_name(chem::Chirality c) {
  switch (c) {
  case chem::Chirality::none: return "none";
  case chem::Chirality::clockwise: return "clockwise";
  case chem::Chirality::counterclockwise: return "counterclockwise";
  }
  return "none";
}

nlohmann::json perceived_to_json(const chem::PerceivedMolecule &p) {
  nlohmann::json atoms = nlohmann::json::array();
  for (int i = 0; i < p.n_atoms(); ++i) {
    const chem::Atom &a = p.base.atoms[static_cast<std::size_t>(i)];
    atoms.push_back({{"element", a.element},
                     {"atomic_number", a.atomic_number},
                     {"charge", a.formal_charge},
                     {"isotope", a.isotope},
                     {"aromatic", a.aromatic},
                     {"chirality", chir_name(a.chirality)},
                     {"radical_electrons", a.radical_electrons},
                     {"implicit_h", p.implicit_h[static_cast<std::size_t>(i)]},
                     {"degree", p.degree[static_cast<std::size_t>(i)]},
                     {"hybridization",
                      hyb_name(p.hybridization[static_cast<std::size_t>(i)])},
                     {"in_ring",
                      p.ring_membership[static_cast<std::size_t>(i)] != 0}});
  }
  nlohmann::json bonds = nlohmann::json::array();
  for (const chem::Bond &b : p.base.bonds)
    bonds.push_back({{"a", b.a},
                     {"b", b.b},
                     {"order", order_name(b.order)},
                     {"stereo", stereo_name(b.stereo)},
                     {"conjugated", b.conjugated},
                     {"in_ring", b.in_ring}});
  return nlohmann::json{{"smiles", p.base.source_text},
                        {"canonical", chem::write_canonical(p)},
                        {"atoms", atoms},
                        {"bonds", bonds}};
}

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::string brics_rules_path;
};

void add_common(CLI::App *cmd, CommonOpts &opts) {
  cmd->add_option("--config", opts.config_path,
                  "flat key=value configuration file");
  cmd->add_option("--set", opts.sets,
                  "override one config key, e.g. --set epochs=3");
  cmd->add_option("--brics-rules", opts.brics_rules_path,
                  "fragmentation rule table (defaults to the built-in)");
}

// Bad configuration input is a usage error (exit 1), not a data error.
RunConfig make_config(const CommonOpts &opts) {
  try {
    RunConfig cfg;
    if (!opts.config_path.empty())
      cfg.load_file(opts.config_path);
    for (const std::string &kv : opts.sets) {
      std::size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw Error(errc::format_error, "--set needs key=value, got " + kv);
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
  } catch (const Error &e) {
    std::cerr << e.what() << "\n";
    std::exit(1);
  }
}

const frag::BricsRuleTable &rules_for(const CommonOpts &opts,
                                      frag::BricsRuleTable &storage) {
  if (opts.brics_rules_path.empty())
    return frag::BricsRuleTable::builtin();
  storage = frag::BricsRuleTable::from_file(opts.brics_rules_path);
  return storage;
}

int stream_molecules(
    const std::function<void(const chem::PerceivedMolecule &)> &emit) {
  std::string line;
  long line_no = 0;
  int failures = 0;
  while (std::getline(std::cin, line)) {
    ++line_no;
    if (line.empty())
      continue;
    try {
      emit(chem::perceive(chem::parse_smiles(line)));
    } catch (const Error &e) {
      std::cerr << "line " << line_no << ": " << e.what() << "\n";
      ++failures;
    }
  }
  return failures == 0 ? 0 : 2;
}

// ---- subcommand bodies ----

int cmd_parse() {
  return stream_molecules([](const chem::PerceivedMolecule &p) {
    std::cout << perceived_to_json(p).dump() << "\n";
  });
}

int cmd_fragment(const frag::BricsRuleTable &rules) {
  return stream_molecules([&](const chem::PerceivedMolecule &p) {
    for (const frag::Motif &m : frag::motifs_of(p, rules))
      std::cout << m.canonical << "\n";
  });
}

pipeline::Artifacts
artifacts_for(const std::vector<pipeline::DatasetRecord> &records,
              std::uint64_t seed, const RunConfig &cfg,
              const frag::BricsRuleTable &rules) {
  pipeline::Split split = pipeline::split_dataset(records, seed);
  std::map<std::string, pipeline::PreparedDrug> drugs;
  for (const pipeline::DatasetRecord &r : records)
    drugs[r.drug_id] = pipeline::prepare_drug(r, rules);
  return pipeline::build_artifacts(drugs, split.train, cfg);
}

int cmd_vocab(const std::string &data, std::uint64_t seed,
              const std::string &out, const RunConfig &cfg,
              const frag::BricsRuleTable &rules) {
  pipeline::Dataset ds = pipeline::load_dataset(data);
  for (const pipeline::RowError &e : ds.errors)
    std::cerr << data << ":" << e.line << ": " << e.message << "\n";
  pipeline::Artifacts art = artifacts_for(ds.records, seed, cfg, rules);
  graph::write_text_file(out, graph::vocab_to_jsonl(art.vocab));
  std::cerr << "wrote " << out << " (" << art.vocab.size() << " motifs)\n";
  return 0;
}

int cmd_graph(const std::string &data, std::uint64_t seed,
              const std::string &out, const RunConfig &cfg,
              const frag::BricsRuleTable &rules) {
  pipeline::Dataset ds = pipeline::load_dataset(data);
  for (const pipeline::RowError &e : ds.errors)
    std::cerr << data << ":" << e.line << ": " << e.message << "\n";
  pipeline::Artifacts art = artifacts_for(ds.records, seed, cfg, rules);
  graph::write_text_file(out, graph::assoc_to_json(art.train_graph).dump(2) +
                                  "\n");
  std::cerr << "wrote " << out << " (" << art.train_graph.nodes.size()
            << " nodes, " << art.train_graph.edges.size() << " edges)\n";
  return 0;
}

template <class T>
int cmd_train(const std::string &data, const std::string &out_dir,
              const RunConfig &cfg, const frag::BricsRuleTable &rules) {
  namespace fs = std::filesystem;
  pipeline::Dataset ds = pipeline::load_dataset(data);
  for (const pipeline::RowError &e : ds.errors)
    std::cerr << data << ":" << e.line << ": " << e.message << "\n";
  fs::create_directories(out_dir);
  pipeline::SeedRunResult<T> result =
      pipeline::run_seeds<T>(cfg, rules, ds.records, cfg.seeds);
  std::string hash = cfg.hash();
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    const pipeline::TrainResult<T> &run = result.runs[i];
    std::string tag = std::to_string(cfg.seeds[i]);
    nn::save_checkpoint(run.net->params(),
                        out_dir + "/checkpoint_seed" + tag + ".bin");
    graph::write_text_file(
        out_dir + "/metrics_seed" + tag + ".json",
        pipeline::metrics_to_json(run.test_metrics, cfg.seeds[i], hash)
                .dump(2) +
            "\n");
    std::string log;
    for (const pipeline::EpochLog &l : run.log)
      log += nlohmann::json{{"epoch", l.epoch},
                            {"train_loss", l.train_loss},
                            {"valid_f1", l.valid_f1},
                            {"lr", l.lr}}
                 .dump() +
             "\n";
    graph::write_text_file(out_dir + "/train_log_seed" + tag + ".jsonl", log);
    if (run.oversize_truncations > 0)
      std::cerr << "seed " << tag << ": truncated " << run.oversize_truncations
                << " oversize molecules\n";
    if (run.unpredictable_drugs > 0)
      std::cerr << "seed " << tag << ": " << run.unpredictable_drugs
                << " drugs had no in-vocabulary motif\n";
  }
  // artifacts of the primary (first) seed serve prediction
  const pipeline::TrainResult<T> &primary = result.runs.front();
  graph::write_text_file(out_dir + "/vocab.jsonl",
                         graph::vocab_to_jsonl(primary.artifacts.vocab));
  graph::write_text_file(
      out_dir + "/assoc_graph.json",
      graph::assoc_to_json(primary.artifacts.train_graph).dump(2) + "\n");
  graph::write_text_file(
      out_dir + "/codec.json",
      pipeline::codec_to_json(primary.artifacts.codec).dump(2) + "\n");
  graph::write_text_file(
      out_dir + "/model.json",
      pipeline::manifest_to_json(cfg, cfg.seeds.front(),
                                 primary.artifacts.codec.size(),
                                 primary.artifacts.vocab.size())
              .dump(2) +
          "\n");
  nlohmann::json agg =
      pipeline::aggregate_to_json(result.test_aggregate, cfg.seeds, hash);
  graph::write_text_file(out_dir + "/metrics.json", agg.dump(2) + "\n");
  std::cout << agg.dump(2) << "\n";
  if (result.test_aggregate.single_seed_warning)
    std::cerr << "warning: single seed, standard deviation reported as 0\n";
  return 0;
}

template <class T> struct LoadedModel {
  RunConfig cfg;
  pipeline::Artifacts art;
  std::shared_ptr<model::Network<T>> net;
};

template <class T> LoadedModel<T> load_model(const std::string &dir) {
  LoadedModel<T> m;
  nlohmann::json manifest =
      nlohmann::json::parse(graph::read_text_file(dir + "/model.json"));
  if (manifest.value("version", 0) != pipeline::kManifestFormatVersion)
    throw Error(errc::format_error, "model.json: unsupported version");
  m.cfg.d_model = manifest.at("d_model").get<int>();
  m.cfg.gat_heads = manifest.at("gat_heads").get<int>();
  m.cfg.gat_layers = manifest.at("gat_layers").get<int>();
  m.cfg.decoder_heads = manifest.at("decoder_heads").get<int>();
  m.cfg.num_layers = manifest.at("num_layers").get<int>();
  m.cfg.max_len = manifest.at("max_len").get<int>();
  m.cfg.max_atoms = manifest.at("max_atoms").get<int>();
  m.cfg.sinusoidal_pos = manifest.at("sinusoidal_pos").get<bool>();
  m.cfg.raw_features = manifest.at("raw_features").get<bool>();
  m.cfg.allow_duplicates = manifest.at("allow_duplicates").get<bool>();
  m.cfg.float64 = manifest.at("float64").get<bool>();
  m.art.vocab =
      graph::vocab_from_jsonl(graph::read_text_file(dir + "/vocab.jsonl"));
  m.art.train_graph = graph::assoc_from_json(
      nlohmann::json::parse(graph::read_text_file(dir + "/assoc_graph.json")));
  m.art.stats = m.art.train_graph.feature_stats;
  m.art.codec = pipeline::codec_from_json(
      nlohmann::json::parse(graph::read_text_file(dir + "/codec.json")));
  m.art.raw_features = m.cfg.raw_features;

  model::NetworkDims dims;
  dims.d_model = m.cfg.d_model;
  dims.gat_heads = m.cfg.gat_heads;
  dims.gat_layers = m.cfg.gat_layers;
  dims.decoder_heads = m.cfg.decoder_heads;
  dims.decoder_layers = m.cfg.num_layers;
  dims.max_len = m.cfg.max_len;
  dims.max_atoms = m.cfg.max_atoms;
  dims.n_tokens = manifest.at("n_tokens").get<int>();
  dims.assoc_dim = manifest.at("assoc_dim").get<int>();
  dims.dropout = 0.0;
  dims.sinusoidal_pos = m.cfg.sinusoidal_pos;
  nn::Rng rng(0);
  m.net = std::make_shared<model::Network<T>>(dims, rng);
  std::uint64_t seed = manifest.at("primary_seed").get<std::uint64_t>();
  nn::load_checkpoint(m.net->params(),
                      dir + "/checkpoint_seed" + std::to_string(seed) +
                          ".bin");
  return m;
}

template <class T>
int cmd_predict(const std::string &model_dir,
                const frag::BricsRuleTable &rules) {
  LoadedModel<T> m = load_model<T>(model_dir);
  std::string line;
  long line_no = 0;
  int failures = 0;
  while (std::getline(std::cin, line)) {
    ++line_no;
    if (line.empty())
      continue;
    try {
      pipeline::DatasetRecord rec;
      rec.drug_id = "stdin:" + std::to_string(line_no);
      rec.structure = line;
      pipeline::PreparedDrug drug = pipeline::prepare_drug(rec, rules);
      auto tensors = graph::featurize_molecule(
          drug.mol, m.art.raw_features ? nullptr : &m.art.stats);
      std::set<int> ids = pipeline::predict_label_set(
          *m.net, m.art, drug, tensors, m.cfg.allow_duplicates);
      std::string out;
      for (int id : ids) {
        if (!out.empty())
          out += ",";
        out += m.art.codec.label_of(id);
      }
      std::cout << out << "\n";
    } catch (const Error &e) {
      if (e.code() == errc::no_known_motif) {
        std::cerr << "line " << line_no
                  << ": no known motif, empty prediction\n";
        std::cout << "\n";
      } else {
        std::cerr << "line " << line_no << ": " << e.what() << "\n";
        std::cout << "\n";
        ++failures;
      }
    }
  }
  return failures == 0 ? 0 : 2;
}

std::map<std::string, std::set<std::string>>
label_sets_from_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(errc::file_not_found, path);
  std::map<std::string, std::set<std::string>> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
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
    if (line_no == 1 && cols.size() >= 2 && cols[0] == "drug_id")
      continue; // header
    if (cols.size() < 2)
      throw Error(errc::format_error,
                  path + ":" + std::to_string(line_no) +
                      ": expected drug_id<TAB>labels");
    const std::string &labels = cols.back();
    std::set<std::string> set;
    std::stringstream ss(labels);
    std::string label;
    while (std::getline(ss, label, ',')) {
      std::size_t a = label.find_first_not_of(" \t");
      if (a == std::string::npos)
        continue;
      std::size_t b = label.find_last_not_of(" \t");
      set.insert(label.substr(a, b - a + 1));
    }
    out[cols[0]] = std::move(set);
  }
  return out;
}

int cmd_eval(const std::string &pred_path, const std::string &truth_path,
             const std::string &out, const RunConfig &cfg) {
  auto pred = label_sets_from_file(pred_path);
  auto truth = label_sets_from_file(truth_path);
  std::vector<std::set<std::string>> ps, ts;
  for (const auto &[id, tset] : truth) {
    auto it = pred.find(id);
    if (it == pred.end())
      throw Error(errc::length_mismatch,
                  "prediction file is missing drug " + id);
    ps.push_back(it->second);
    ts.push_back(tset);
  }
  if (ts.empty())
    throw Error(errc::empty_dataset, "no drugs to evaluate");
  pipeline::MetricsReport r = pipeline::evaluate(ps, ts);
  nlohmann::json j = pipeline::metrics_to_json(r, 0, cfg.hash());
  graph::write_text_file(out, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

template <class T>
int cmd_explain(const std::string &model_dir, const std::string &data,
                const std::string &drug_id, const std::string &smiles,
                const std::string &out, const frag::BricsRuleTable &rules) {
  LoadedModel<T> m = load_model<T>(model_dir);
  pipeline::DatasetRecord rec;
  if (!smiles.empty()) {
    rec.drug_id = "query";
    rec.structure = smiles;
  } else {
    pipeline::Dataset ds = pipeline::load_dataset(data);
    bool found = false;
    for (const pipeline::DatasetRecord &r : ds.records)
      if (r.drug_id == drug_id) {
        rec = r;
        found = true;
      }
    if (!found)
      throw Error(errc::unknown_drug, drug_id + " not in " + data);
  }
  pipeline::PreparedDrug drug = pipeline::prepare_drug(rec, rules);
  auto tensors = graph::featurize_molecule(
      drug.mol, m.art.raw_features ? nullptr : &m.art.stats);
  pipeline::ContributionMatrix cm = pipeline::contribution_analysis(
      *m.net, m.art, drug, tensors, m.cfg.allow_duplicates);
  std::string csv = pipeline::contribution_csv(cm, m.art.vocab, m.art.codec);
  graph::write_text_file(out, csv);
  std::cerr << "wrote " << out << " (" << cm.motif_indices.size()
            << " motifs x " << cm.label_ids.size() << " labels)\n";
  return 0;
}

void print_version() {
  std::cout << "adrgen " << kToolVersion << "\n"
            << "checkpoint format " << nn::kCheckpointVersion << "\n"
            << "vocab format " << graph::kVocabFormatVersion << "\n"
            << "association graph format " << graph::kAssocFormatVersion
            << "\n"
            << "codec format " << pipeline::kCodecFormatVersion << "\n"
            << "model manifest format " << pipeline::kManifestFormatVersion
            << "\n"
            << "brics rules format 1\n"
            << "dataset header: " << pipeline::kDatasetHeader << "\n";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"molecular structure to adverse-reaction label sequences"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "print tool and format versions");

  CommonOpts parse_opts, frag_opts, vocab_opts, graph_opts, train_opts,
      predict_opts, eval_opts, explain_opts;

  CLI::App *parse_cmd =
      app.add_subcommand("parse", "SMILES on stdin to perceived graph JSON");
  add_common(parse_cmd, parse_opts);

  CLI::App *frag_cmd = app.add_subcommand(
      "fragment", "SMILES on stdin to motif canonicals, one per line");
  add_common(frag_cmd, frag_opts);

  std::string data_path, out_path = "vocab.jsonl";
  std::uint64_t split_seed = 1;
  CLI::App *vocab_cmd =
      app.add_subcommand("vocab", "build the motif vocabulary file");
  vocab_cmd->add_option("--data", data_path, "dataset TSV")->required();
  vocab_cmd->add_option("--seed", split_seed, "split seed");
  vocab_cmd->add_option("--out", out_path, "output path");
  add_common(vocab_cmd, vocab_opts);

  std::string gdata_path, gout_path = "assoc_graph.json";
  std::uint64_t gsplit_seed = 1;
  CLI::App *graph_cmd =
      app.add_subcommand("graph", "build the association graph file");
  graph_cmd->add_option("--data", gdata_path, "dataset TSV")->required();
  graph_cmd->add_option("--seed", gsplit_seed, "split seed");
  graph_cmd->add_option("--out", gout_path, "output path");
  add_common(graph_cmd, graph_opts);

  std::string tdata_path, tout_dir;
  CLI::App *train_cmd =
      app.add_subcommand("train", "train and write checkpoint + metrics");
  train_cmd->add_option("--data", tdata_path, "dataset TSV")->required();
  train_cmd->add_option("--out-dir", tout_dir, "output directory")
      ->required();
  add_common(train_cmd, train_opts);

  std::string model_dir;
  CLI::App *predict_cmd = app.add_subcommand(
      "predict", "SMILES on stdin to label lists on stdout");
  predict_cmd->add_option("--model-dir", model_dir, "train output directory")
      ->required();
  add_common(predict_cmd, predict_opts);

  std::string pred_path, truth_path, eval_out = "metrics.json";
  CLI::App *eval_cmd =
      app.add_subcommand("eval", "set metrics for prediction vs truth files");
  eval_cmd->add_option("--pred", pred_path, "predictions TSV")->required();
  eval_cmd->add_option("--truth", truth_path, "ground truth TSV")->required();
  eval_cmd->add_option("--out", eval_out, "metrics.json path");
  add_common(eval_cmd, eval_opts);

  std::string emodel_dir, edata_path, edrug_id, esmiles,
      eout = "contrib.csv";
  CLI::App *explain_cmd = app.add_subcommand(
      "explain", "per-motif contribution scores for one drug");
  explain_cmd->add_option("--model-dir", emodel_dir, "train output directory")
      ->required();
  explain_cmd->add_option("--data", edata_path, "dataset TSV");
  explain_cmd->add_option("--drug-id", edrug_id, "drug to explain");
  explain_cmd->add_option("--smiles", esmiles,
                          "explain an unlabeled structure instead");
  explain_cmd->add_option("--out", eout, "contrib.csv path");
  add_common(explain_cmd, explain_opts);

  CLI::App *selftest_cmd = app.add_subcommand(
      "selftest", "gradient and invariant suites; nonzero exit on failure");
  (void)selftest_cmd;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1; // usage errors exit 1; --help exits 0
  }

  if (show_version) {
    print_version();
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help() << "\n";
    return 1;
  }

  try {
    frag::BricsRuleTable storage;
    if (parse_cmd->parsed())
      return cmd_parse();
    if (frag_cmd->parsed())
      return cmd_fragment(rules_for(frag_opts, storage));
    if (vocab_cmd->parsed())
      return cmd_vocab(data_path, split_seed, out_path,
                       make_config(vocab_opts), rules_for(vocab_opts, storage));
    if (graph_cmd->parsed())
      return cmd_graph(gdata_path, gsplit_seed, gout_path,
                       make_config(graph_opts), rules_for(graph_opts, storage));
    if (train_cmd->parsed()) {
      RunConfig cfg = make_config(train_opts);
      const auto &rules = rules_for(train_opts, storage);
      return cfg.float64 ? cmd_train<double>(tdata_path, tout_dir, cfg, rules)
                         : cmd_train<float>(tdata_path, tout_dir, cfg, rules);
    }
    if (predict_cmd->parsed()) {
      nlohmann::json manifest = nlohmann::json::parse(
          graph::read_text_file(model_dir + "/model.json"));
      bool f64 = manifest.value("float64", false);
      const auto &rules = rules_for(predict_opts, storage);
      return f64 ? cmd_predict<double>(model_dir, rules)
                 : cmd_predict<float>(model_dir, rules);
    }
    if (eval_cmd->parsed())
      return cmd_eval(pred_path, truth_path, eval_out,
                      make_config(eval_opts));
    if (explain_cmd->parsed()) {
      if (esmiles.empty() && (edata_path.empty() || edrug_id.empty())) {
        std::cerr << "explain needs --smiles or --data with --drug-id\n";
        return 1;
      }
      nlohmann::json manifest = nlohmann::json::parse(
          graph::read_text_file(emodel_dir + "/model.json"));
      bool f64 = manifest.value("float64", false);
      const auto &rules = rules_for(explain_opts, storage);
      return f64 ? cmd_explain<double>(emodel_dir, edata_path, edrug_id,
                                       esmiles, eout, rules)
                 : cmd_explain<float>(emodel_dir, edata_path, edrug_id,
                                      esmiles, eout, rules);
    }
    if (selftest_cmd->parsed()) {
      bool ok = pipeline::selftest(stderr);
      std::cerr << (ok ? "selftest passed\n" : "selftest FAILED\n");
      return ok ? 0 : 3;
    }
  } catch (const Error &e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception &e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
