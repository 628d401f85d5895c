#pragma once

#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gplp/error.hpp"
#include "gplp/graph.hpp"
#include "gplp/ingest.hpp"
#include "gplp/metrics.hpp"
#include "gplp/model.hpp"
#include "gplp/optimizer.hpp"
#include "gplp/subgraph.hpp"

namespace gplp {

struct TrainConfig {
  AdaBeliefConfig optimizer;
  std::size_t batch_size = 256;
  std::size_t epochs = 1000;
  std::uint64_t seed = 0;
  // Evaluate on the test records every this many epochs; 0 evaluates only
  // after the last epoch. The last epoch is always evaluated.
  std::size_t eval_every = 0;
  RebalanceMode rebalance = RebalanceMode::Upsample;
  bool resample_each_epoch = false;

  void validate() const {
    optimizer.validate();
    if (batch_size < 1) throw Error(ErrorKind::BadConfig, "batch_size must be >= 1");
  }
};

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  std::optional<double> test_auroc;
  std::optional<double> test_aupr;
};

using PairTransform = std::function<SubgraphPair(const SubgraphPair&, std::size_t record_index)>;

struct FitOptions {
  PairTransform train_transform;  // applied to each training pair after extraction
  PairTransform test_transform;
  const InteractionMatrix* test_matrix = nullptr;  // topology for test pairs; defaults to the training matrix
  std::function<void(const EpochStats&)> on_epoch;
};

struct FitResult {
  ModelParams params;
  std::vector<EpochStats> history;
  std::optional<MetricsReport> final_report;
};

// Featurized inputs for records[i] in `order`, extracted from the matrix.
inline std::vector<FeaturizedGraph> featurize_records(const InteractionMatrix& m, std::span<const EdgeRecord> records,
                                                      std::span<const std::size_t> order, FeatureMode mode,
                                                      const PairTransform& transform = {}) {
  std::vector<FeaturizedGraph> graphs;
  graphs.reserve(order.size());
  for (auto i : order) {
    auto pair = extract_pair(m, records[i].attacker, records[i].target);
    if (transform) pair = transform(pair, i);
    graphs.push_back(featurize(pair, m, mode));
  }
  return graphs;
}

inline ScoredSet score_records(const ModelParams& params, const ModelConfig& cfg, const InteractionMatrix& m,
                               std::span<const EdgeRecord> records, const PairTransform& transform = {}) {
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  ScoredSet out;
  constexpr std::size_t chunk = 512;
  for (std::size_t i = 0; i < order.size(); i += chunk) {
    auto part = std::span<const std::size_t>(order).subspan(i, std::min(chunk, order.size() - i));
    auto graphs = featurize_records(m, records, part, cfg.features, transform);
    for (float p : predict(params, cfg, graphs)) out.scores.push_back(p);
  }
  for (const auto& r : records) out.labels.push_back(r.label);
  return out;
}

// Mini-batch AdaBelief training on subgraph pairs extracted from `matrix`,
// which should hold the training records' topology only.
inline FitResult fit(const InteractionMatrix& matrix, std::span<const EdgeRecord> train,
                     std::span<const EdgeRecord> test, const ModelConfig& model_cfg, const TrainConfig& cfg,
                     const FitOptions& opts = {}) {
  model_cfg.validate();
  cfg.validate();
  if (train.empty()) throw Error(ErrorKind::EmptyDataset, "no training records");
  std::size_t train_pos = 0;
  for (const auto& r : train) train_pos += r.label == 1 ? 1 : 0;
  if (train_pos == 0 || train_pos == train.size())
    throw Error(ErrorKind::SingleClass, "training records hold a single class");

  FitResult result;
  result.params = init_params(model_cfg, cfg.seed);
  auto state = make_optimizer_state(std::span<const Tensor>(result.params.tensors));
  auto pool = rebalance_indices(train, cfg.seed, cfg.rebalance);

  auto evaluate_test = [&]() -> std::optional<MetricsReport> {
    if (test.empty()) return std::nullopt;
    const auto& topology = opts.test_matrix ? *opts.test_matrix : matrix;
    auto scored = score_records(result.params, model_cfg, topology, test, opts.test_transform);
    auto [pos, neg] = detail::class_counts(scored);
    if (pos == 0 || neg == 0) return std::nullopt;
    return dual_class_report(scored);
  };

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.resample_each_epoch && epoch > 0) pool = rebalance_indices(train, derive_seed(cfg.seed, {epoch}), cfg.rebalance);
    auto order = epoch_shuffle(pool, cfg.seed, epoch);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      auto part = std::span<const std::size_t>(order).subspan(start, std::min(cfg.batch_size, order.size() - start));
      auto graphs = featurize_records(matrix, train, part, model_cfg.features, opts.train_transform);
      std::vector<float> labels;
      labels.reserve(part.size());
      for (auto i : part) labels.push_back(static_cast<float>(train[i].label));
      LossAndGrad<float> lg;
      try {
        lg = loss_and_grad(result.params, model_cfg, make_batch(graphs), std::move(labels));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NonFinite && e.kind() != ErrorKind::NonFiniteLoss) throw;
        throw Error(ErrorKind::NonFiniteLoss, "epoch " + std::to_string(epoch) + ", batch starting at " +
                                                  std::to_string(start) + ": " + e.what());
      }
      loss_sum += lg.loss * static_cast<double>(part.size());
      adabelief_step(std::span<Tensor>(result.params.tensors), std::span<const Tensor>(lg.grads), state, cfg.optimizer);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(order.size());
    const bool last = epoch + 1 == cfg.epochs;
    if (last || (cfg.eval_every > 0 && (epoch + 1) % cfg.eval_every == 0)) {
      if (auto rep = evaluate_test()) {
        stats.test_auroc = rep->auroc_harmonic;
        stats.test_aupr = rep->aupr_harmonic;
        if (last) result.final_report = rep;
      }
    }
    result.history.push_back(stats);
    if (opts.on_epoch) opts.on_epoch(stats);
  }
  return result;
}

// "epoch<TAB>train_loss<TAB>test_auroc<TAB>test_aupr"; unevaluated epochs show NA.
inline void write_history(std::ostream& os, const std::vector<EpochStats>& history) {
  os << "epoch\ttrain_loss\ttest_auroc\ttest_aupr\n" << std::setprecision(9);
  auto opt = [&](const std::optional<double>& v) -> std::ostream& {
    if (v) return os << *v;
    return os << "NA";
  };
  for (const auto& h : history) {
    os << h.epoch << '\t' << h.train_loss << '\t';
    opt(h.test_auroc) << '\t';
    opt(h.test_aupr) << '\n';
  }
}

}  // namespace gplp
