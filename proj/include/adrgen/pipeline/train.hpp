//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "adrgen/chem/perceive.hpp"
#include "adrgen/config.hpp"
#include "adrgen/errors.hpp"
#include "adrgen/frag/fragment.hpp"
#include "adrgen/graph/assoc.hpp"
#include "adrgen/graph/features.hpp"
#include "adrgen/graph/vocab.hpp"
#include "adrgen/model/network.hpp"
#include "adrgen/nn/checkpoint.hpp"
#include "adrgen/nn/optim.hpp"
#include "adrgen/pipeline/codec.hpp"
#include "adrgen/pipeline/dataset.hpp"
#include "adrgen/pipeline/metrics.hpp"

namespace adrgen::pipeline {

// One drug, parsed and fragmented; featurization happens later because it
// needs the training-split statistics.
struct PreparedDrug {
  std::string drug_id;
  chem::PerceivedMolecule mol;
  graph::MoleculeMotifInfo motifs;
  std::vector<std::string> labels;
};

inline PreparedDrug prepare_drug(const DatasetRecord &rec,
                                 const frag::BricsRuleTable &rules) {
  PreparedDrug d;
  d.drug_id = rec.drug_id;
  d.mol = chem::perceive(parse_structure(rec.structure));
  auto r = frag::fragment_molecule(d.mol, rules);
  d.motifs.drug_id = rec.drug_id;
  for (const auto &m : r.motifs)
    d.motifs.motifs.push_back(m.canonical);
  d.motifs.adjacent_fragments = r.adjacent;
  d.labels = rec.labels;
  return d;
}

// Everything derived from the training split alone.
struct Artifacts {
  graph::MotifVocabulary vocab;
  graph::FeatureStats stats;
  graph::AssociationGraph train_graph;
  LabelCodec codec;
  bool raw_features = false;
};

// `train_order` fixes the molecule-node order of the association graph;
// it must come from the split so the result is a pure function of the
// training records.
inline Artifacts build_artifacts(const std::map<std::string, PreparedDrug> &drugs,
                                 const std::vector<std::string> &train_order,
                                 const RunConfig &cfg) {
  Artifacts a;
  a.raw_features = cfg.raw_features;
  std::vector<std::pair<std::string, std::vector<std::string>>> vocab_corpus;
  std::vector<chem::PerceivedMolecule> train_mols;
  std::vector<std::vector<std::string>> label_lists;
  for (const std::string &id : train_order) {
    const PreparedDrug &d = drugs.at(id);
    vocab_corpus.push_back({id, d.motifs.motifs});
    train_mols.push_back(d.mol);
    label_lists.push_back(d.labels);
  }
  a.vocab = graph::build_vocabulary(vocab_corpus);
  if (cfg.prune_enabled) {
    // keep motifs whose averaged tf-idf clears the threshold; re-index
    graph::MotifVocabulary pruned;
    pruned.n_molecules = a.vocab.n_molecules;
    for (const graph::VocabEntry &e : a.vocab.entries)
      if (e.avg_tfidf >= cfg.prune_threshold) {
        graph::VocabEntry kept = e;
        kept.index = static_cast<int>(pruned.entries.size());
        pruned.entries.push_back(kept);
      }
    if (pruned.entries.empty())
      throw Error(errc::empty_corpus, "pruning removed every motif");
    pruned.rebuild_lookup();
    a.vocab = pruned;
  }
  a.stats = cfg.raw_features ? graph::FeatureStats()
                             : graph::compute_feature_stats(train_mols);
  std::vector<graph::MoleculeMotifInfo> infos;
  for (const std::string &id : train_order) {
    graph::MoleculeMotifInfo info = drugs.at(id).motifs;
    if (cfg.prune_enabled) {
      // drop pruned motifs and remap severed-bond adjacency
      graph::MoleculeMotifInfo filtered;
      filtered.drug_id = info.drug_id;
      std::vector<int> keep_index(info.motifs.size(), -1);
      for (std::size_t i = 0; i < info.motifs.size(); ++i)
        if (a.vocab.index_of(info.motifs[i]) >= 0) {
          keep_index[i] = static_cast<int>(filtered.motifs.size());
          filtered.motifs.push_back(info.motifs[i]);
        }
      for (auto [x, y] : info.adjacent_fragments)
        if (keep_index[static_cast<std::size_t>(x)] >= 0 &&
            keep_index[static_cast<std::size_t>(y)] >= 0)
          filtered.adjacent_fragments.emplace_back(
              keep_index[static_cast<std::size_t>(x)],
              keep_index[static_cast<std::size_t>(y)]);
      info = filtered;
    }
    infos.push_back(info);
  }
  a.train_graph = graph::build_association_graph(infos, a.vocab);
  a.train_graph.feature_stats = a.stats;
  a.codec = LabelCodec::build(label_lists,
                              static_cast<std::size_t>(cfg.vocab_size));
  return a;
}

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_f1 = 0.0;
  double lr = 0.0;
};

template <class T> struct TrainResult {
  Split split;
  Artifacts artifacts;
  std::shared_ptr<model::Network<T>> net;
  std::vector<EpochLog> log;
  int best_epoch = -1;
  MetricsReport train_metrics;
  MetricsReport valid_metrics;
  MetricsReport test_metrics;
  long oversize_truncations = 0;
  long unpredictable_drugs = 0; // no in-vocabulary motif at eval time
};

namespace detail {

// Trims the padded target sequence to the teacher-forcing pair:
// inputs BOS..last-label, targets labels..EOS.
inline std::pair<std::vector<int>, std::vector<int>>
teacher_pair(const std::vector<int> &padded) {
  std::size_t eos = 0;
  while (eos < padded.size() && padded[eos] != kEos)
    ++eos;
  std::vector<int> inputs(padded.begin(),
                          padded.begin() + static_cast<long>(eos));
  std::vector<int> targets(padded.begin() + 1,
                           padded.begin() + static_cast<long>(eos) + 1);
  return {inputs, targets};
}

} // namespace detail

// Runs the molecule through both GAT stacks into a decoder memory,
// truncating molecules that exceed the serialization cap.
template <class T>
model::Memory<T> make_memory(model::Network<T> &net, nn::Tape<T> &tape,
                             const graph::MolecularGraphTensors &tensors,
                             nn::Tensor<T> assoc_emb, int mol_node,
                             long *truncation_counter = nullptr) {
  nn::Tensor<T> atom_emb = net.atom_embeddings(tape, tensors);
  if (atom_emb.rows() > static_cast<std::size_t>(net.dims().max_atoms)) {
    std::vector<int> head(static_cast<std::size_t>(net.dims().max_atoms));
    for (std::size_t i = 0; i < head.size(); ++i)
      head[i] = static_cast<int>(i);
    atom_emb = tape.select_rows(atom_emb, head);
    if (truncation_counter)
      ++*truncation_counter;
  }
  nn::Tensor<T> global = tape.select_rows(assoc_emb, {mol_node});
  return net.serialize_and_fuse(tape, atom_emb, global);
}

// Per-drug evaluation-time forward: a fresh subgraph of the drug's known
// motifs (training topology preserved), the drug attached to it.
template <class T>
std::set<int> predict_label_set(model::Network<T> &net, const Artifacts &art,
                                const PreparedDrug &drug,
                                const graph::MolecularGraphTensors &tensors,
                                bool allow_duplicates,
                                long *truncation_counter = nullptr) {
  std::set<int> motif_indices;
  for (const std::string &m : drug.motifs.motifs) {
    int idx = art.vocab.index_of(m);
    if (idx >= 0)
      motif_indices.insert(idx);
  }
  if (motif_indices.empty())
    throw Error(errc::no_known_motif,
                "no motif of " + drug.drug_id + " is in the vocabulary");
  graph::AssociationGraph sub =
      graph::motif_subgraph(art.train_graph, motif_indices);
  int node =
      graph::attach_query_molecule(sub, art.vocab, drug.motifs.motifs,
                                   drug.drug_id)
          .node_id;
  nn::Tape<T> tape(false);
  auto assoc_in = net.assoc_input(sub);
  nn::Tensor<T> assoc_emb = net.assoc_embeddings(tape, assoc_in);
  model::Memory<T> mem =
      make_memory(net, tape, tensors, assoc_emb, node, truncation_counter);
  std::vector<int> out = model::generate(mem, net.decoder(),
                                         art.codec.specials(),
                                         net.dims().max_len,
                                         allow_duplicates);
  return std::set<int>(out.begin(), out.end());
}

template <class T> class Trainer {
public:
  Trainer(const RunConfig &cfg, const frag::BricsRuleTable &rules)
      : cfg_(cfg), rules_(rules) {}

  TrainResult<T> run(const std::vector<DatasetRecord> &records,
                     std::uint64_t seed) {
    TrainResult<T> result;
    result.split = split_dataset(records, seed);
    std::map<std::string, DatasetRecord> by_id;
    for (const DatasetRecord &r : records)
      by_id[r.drug_id] = r;
    std::map<std::string, PreparedDrug> drugs;
    for (const DatasetRecord &r : records)
      drugs[r.drug_id] = prepare_drug(r, rules_);
    result.artifacts = build_artifacts(drugs, result.split.train, cfg_);
    const Artifacts &art = result.artifacts;

    // featurize everything with train-split statistics
    std::map<std::string, graph::MolecularGraphTensors> tensors;
    for (const auto &[id, d] : drugs)
      tensors[id] = graph::featurize_molecule(
          d.mol, art.raw_features ? nullptr : &art.stats);

    model::NetworkDims dims;
    dims.d_model = cfg_.d_model;
    dims.gat_heads = cfg_.gat_heads;
    dims.gat_layers = cfg_.gat_layers;
    dims.decoder_heads = cfg_.decoder_heads;
    dims.decoder_layers = cfg_.num_layers;
    dims.max_len = cfg_.max_len;
    dims.max_atoms = cfg_.max_atoms;
    dims.n_tokens = art.codec.size();
    dims.assoc_dim = art.vocab.size();
    dims.dropout = cfg_.dropout;
    dims.sinusoidal_pos = cfg_.sinusoidal_pos;
    nn::Rng init_rng(seed);
    result.net = std::make_shared<model::Network<T>>(dims, init_rng);
    model::Network<T> &net = *result.net;

    // precompute teacher-forcing pairs and truth sets; under random
    // ordering the pairs are re-drawn every epoch instead
    LabelOrder order_mode = cfg_.label_order == "dataset"
                                ? LabelOrder::dataset
                            : cfg_.label_order == "random"
                                ? LabelOrder::random
                                : LabelOrder::frequency;
    std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> tf;
    std::map<std::string, std::set<int>> truth;
    for (const auto &[id, d] : drugs) {
      std::vector<int> padded = encode_targets(d.labels, art.codec,
                                               cfg_.max_len);
      if (order_mode != LabelOrder::random)
        tf[id] = detail::teacher_pair(encode_targets(
            d.labels, art.codec, cfg_.max_len, order_mode, nullptr));
      truth[id] = clean_sequence(padded, art.codec);
    }

    auto assoc_in = net.assoc_input(art.train_graph);
    std::map<std::string, int> train_node;
    for (const std::string &id : result.split.train)
      train_node[id] = art.train_graph.find_molecule_node(id);

    long steps_per_epoch =
        (static_cast<long>(result.split.train.size()) + cfg_.batch_size - 1) /
        cfg_.batch_size;
    nn::CosineSchedule sched{cfg_.lr_max, cfg_.lr_min,
                             std::max(1L, cfg_.epochs * steps_per_epoch)};
    nn::Adam<T> adam;
    nn::Rng train_rng(seed ^ 0x9e3779b97f4a7c15ull);
    long global_step = 0;
    double best_f1 = -1.0;
    std::map<std::string, std::vector<T>> best_snapshot;

    for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
      std::vector<std::string> order = result.split.train;
      train_rng.shuffle(order);
      double loss_sum = 0.0;
      long token_count = 0;
      for (std::size_t batch_start = 0; batch_start < order.size();
           batch_start += static_cast<std::size_t>(cfg_.batch_size)) {
        std::size_t batch_end =
            std::min(order.size(),
                     batch_start + static_cast<std::size_t>(cfg_.batch_size));
        nn::Tape<T> tape;
        nn::Tensor<T> assoc_emb = net.assoc_embeddings(tape, assoc_in);
        nn::Tensor<T> sum_loss;
        long batch_tokens = 0;
        for (std::size_t bi = batch_start; bi < batch_end; ++bi) {
          const std::string &id = order[bi];
          model::Memory<T> mem =
              make_memory(net, tape, tensors[id], assoc_emb, train_node[id],
                          &result.oversize_truncations);
          if (order_mode == LabelOrder::random)
            tf[id] = detail::teacher_pair(
                encode_targets(drugs.at(id).labels, art.codec, cfg_.max_len,
                               LabelOrder::random, &train_rng));
          const auto &[inputs, targets] = tf[id];
          nn::Tensor<T> logits =
              net.decode(tape, inputs, mem, true, &train_rng);
          long n_valid = 0;
          nn::Tensor<T> ce =
              tape.cross_entropy_masked(logits, targets, kPad, &n_valid);
          nn::Tensor<T> record_sum =
              tape.scale(ce, static_cast<T>(n_valid));
          batch_tokens += n_valid;
          sum_loss = sum_loss.valid() ? tape.add(sum_loss, record_sum)
                                      : record_sum;
        }
        nn::Tensor<T> batch_loss = tape.scale(
            sum_loss, static_cast<T>(1.0 / static_cast<double>(batch_tokens)));
        double loss_value = static_cast<double>(batch_loss.item());
        if (!std::isfinite(loss_value)) {
          dump_numeric_state(net, epoch, global_step, order, batch_start,
                             batch_end);
          throw Error(errc::numeric_failure,
                      "loss is not finite at epoch " + std::to_string(epoch) +
                          " step " + std::to_string(global_step));
        }
        net.params().zero_grad();
        tape.backward(batch_loss);
        adam.step(net.params(), nn::cosine_lr(global_step, sched));
        ++global_step;
        loss_sum += loss_value * static_cast<double>(batch_tokens);
        token_count += batch_tokens;
      }
      EpochLog log;
      log.epoch = epoch;
      log.train_loss = loss_sum / static_cast<double>(token_count);
      log.lr = nn::cosine_lr(std::min(global_step, sched.total_steps), sched);
      log.valid_f1 = evaluate_split(net, art, drugs, tensors, truth,
                                    result.split.valid, result)
                         .f1;
      result.log.push_back(log);
      if (log.valid_f1 > best_f1) {
        best_f1 = log.valid_f1;
        best_snapshot = net.params().snapshot_values();
        result.best_epoch = epoch;
      }
    }
    // training-set metrics probe the final parameters (memorization);
    // valid/test run against the retained best-validation checkpoint
    result.train_metrics = evaluate_split(net, art, drugs, tensors, truth,
                                          result.split.train, result);
    if (!best_snapshot.empty())
      net.params().restore_values(best_snapshot);
    result.valid_metrics = evaluate_split(net, art, drugs, tensors, truth,
                                          result.split.valid, result);
    result.test_metrics = evaluate_split(net, art, drugs, tensors, truth,
                                         result.split.test, result);
    return result;
  }

private:
  // written to stderr right before aborting on a non-finite loss
  static void dump_numeric_state(model::Network<T> &net, int epoch,
                                 long step,
                                 const std::vector<std::string> &order,
                                 std::size_t batch_start,
                                 std::size_t batch_end) {
    std::fprintf(stderr,
                 "numeric failure: epoch %d step %ld, batch [%zu, %zu):\n",
                 epoch, step, batch_start, batch_end);
    for (std::size_t i = batch_start; i < batch_end && i < order.size(); ++i)
      std::fprintf(stderr, "  drug %s\n", order[i].c_str());
    for (const auto &[name, t] : net.params().all()) {
      double norm = 0.0, gnorm = 0.0;
      for (T v : t.values())
        norm += static_cast<double>(v) * static_cast<double>(v);
      for (T v : t.grad())
        gnorm += static_cast<double>(v) * static_cast<double>(v);
      std::fprintf(stderr, "  %-34s |w|=%.4e |g|=%.4e\n", name.c_str(),
                   std::sqrt(norm), std::sqrt(gnorm));
    }
  }

  MetricsReport
  evaluate_split(model::Network<T> &net, const Artifacts &art,
                 const std::map<std::string, PreparedDrug> &drugs,
                 std::map<std::string, graph::MolecularGraphTensors> &tensors,
                 const std::map<std::string, std::set<int>> &truth,
                 const std::vector<std::string> &ids,
                 TrainResult<T> &result) {
    std::vector<std::set<int>> preds, truths;
    for (const std::string &id : ids) {
      std::set<int> pred;
      try {
        pred = predict_label_set(net, art, drugs.at(id), tensors[id],
                                 cfg_.allow_duplicates,
                                 &result.oversize_truncations);
      } catch (const Error &e) {
        if (e.code() == errc::no_known_motif)
          ++result.unpredictable_drugs;
        else
          throw;
      }
      preds.push_back(std::move(pred));
      truths.push_back(truth.at(id));
    }
    if (preds.empty())
      return MetricsReport{};
    return evaluate(preds, truths);
  }

  RunConfig cfg_;
  const frag::BricsRuleTable &rules_;
};

template <class T> struct SeedRunResult {
  std::vector<TrainResult<T>> runs;
  AggregateMetrics test_aggregate;
};

// Full split+train+evaluate per seed, aggregated mean and sample standard
// deviation on the test metrics.
template <class T>
SeedRunResult<T> run_seeds(const RunConfig &cfg,
                           const frag::BricsRuleTable &rules,
                           const std::vector<DatasetRecord> &records,
                           const std::vector<std::uint64_t> &seeds) {
  if (seeds.empty())
    throw Error(errc::too_few_records, "need at least one seed");
  SeedRunResult<T> out;
  std::vector<MetricsReport> per_seed;
  for (std::uint64_t seed : seeds) {
    try {
      Trainer<T> trainer(cfg, rules);
      out.runs.push_back(trainer.run(records, seed));
      per_seed.push_back(out.runs.back().test_metrics);
    } catch (const Error &e) {
      throw Error(e.code(), "seed " + std::to_string(seed) + ": " + e.what());
    }
  }
  out.test_aggregate = aggregate(per_seed);
  return out;
}

} // namespace adrgen::pipeline
