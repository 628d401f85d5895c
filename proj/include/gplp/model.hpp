#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gplp/autodiff.hpp"
#include "gplp/error.hpp"
#include "gplp/ingest.hpp"
#include "gplp/ops.hpp"
#include "gplp/random.hpp"
#include "gplp/subgraph.hpp"
#include "gplp/tensor.hpp"

namespace gplp {

enum class Readout : std::uint8_t {
  MeanAll = 0,        // mean over every node of the regrouped graph
  PerStarConcat = 1,  // mean of each star, concatenated
};

struct ModelConfig {
  std::size_t input_dim = 6;
  std::size_t hidden_dim = 64;
  std::size_t num_layers = 3;
  std::vector<std::size_t> head_dims{64, 32, 1};
  std::size_t phi_depth = 1;
  Readout readout = Readout::MeanAll;
  FeatureMode features = FeatureMode::RoleDegreeBridge;

  void validate() const {
    auto bad = [](const std::string& why) { throw Error(ErrorKind::BadConfig, why); };
    if (num_layers < 1) bad("num_layers must be >= 1");
    if (phi_depth < 1) bad("phi_depth must be >= 1");
    if (hidden_dim < 1 || input_dim < 1) bad("dimensions must be >= 1");
    if (head_dims.size() != 3) bad("head must have exactly 3 affine layers");
    for (auto d : head_dims)
      if (d < 1) bad("head widths must be >= 1");
    if (head_dims.back() != 1) bad("head must end in a single output");
    if (input_dim != feature_dim(features)) bad("input_dim does not match the feature mode");
  }

  std::size_t head_input_dim() const { return readout == Readout::PerStarConcat ? 2 * hidden_dim : hidden_dim; }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// All learnable arrays, as (weight, bias) pairs in declared order:
// input projection, then phi_depth pairs per message-passing layer, then the
// three head layers. Weights are [fan_in x fan_out]; biases are [1 x fan_out].
template <class S>
struct BasicModelParams {
  std::vector<BasicTensor<S>> tensors;

  std::size_t count() const {
    std::size_t n = 0;
    for (const auto& t : tensors) n += t.size();
    return n;
  }

  template <class Other>
  BasicModelParams<Other> cast() const {
    BasicModelParams<Other> out;
    for (const auto& t : tensors) out.tensors.push_back(t.template cast<Other>());
    return out;
  }

  friend bool operator==(const BasicModelParams&, const BasicModelParams&) = default;
};

using ModelParams = BasicModelParams<float>;

// (fan_in, fan_out) of each affine layer, in declared order.
inline std::vector<std::pair<std::size_t, std::size_t>> layer_shapes(const ModelConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  shapes.emplace_back(cfg.input_dim, cfg.hidden_dim);
  for (std::size_t k = 0; k < cfg.num_layers; ++k)
    for (std::size_t j = 0; j < cfg.phi_depth; ++j)
      shapes.emplace_back(j == 0 ? 2 * cfg.hidden_dim : cfg.hidden_dim, cfg.hidden_dim);
  std::size_t in = cfg.head_input_dim();
  for (auto out : cfg.head_dims) {
    shapes.emplace_back(in, out);
    in = out;
  }
  return shapes;
}

inline std::vector<std::string> param_names(const ModelConfig& cfg) {
  std::vector<std::string> names{"input.W", "input.b"};
  for (std::size_t k = 0; k < cfg.num_layers; ++k)
    for (std::size_t j = 0; j < cfg.phi_depth; ++j) {
      auto p = "layer" + std::to_string(k) + ".phi" + std::to_string(j);
      names.push_back(p + ".W");
      names.push_back(p + ".b");
    }
  for (int h = 0; h < 3; ++h) {
    names.push_back("head" + std::to_string(h) + ".W");
    names.push_back("head" + std::to_string(h) + ".b");
  }
  return names;
}

inline void check_params(const ModelConfig& cfg, const ModelParams& params) {
  auto shapes = layer_shapes(cfg);
  if (params.tensors.size() != 2 * shapes.size())
    throw Error(ErrorKind::ShapeMismatch, "parameter count does not match config");
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto& w = params.tensors[2 * i];
    const auto& b = params.tensors[2 * i + 1];
    if (w.rows() != shapes[i].first || w.cols() != shapes[i].second || b.rows() != 1 || b.cols() != shapes[i].second)
      throw Error(ErrorKind::ShapeMismatch, "parameter " + std::to_string(i) + " has wrong shape");
  }
}

// Glorot-uniform weights, zero biases.
inline ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed) {
  auto rng = make_rng(seed, {stream::init});
  ModelParams p;
  for (auto [fan_in, fan_out] : layer_shapes(cfg)) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Tensor w(fan_in, fan_out);
    for (auto& v : w.values()) v = static_cast<float>(dist(rng));
    p.tensors.push_back(std::move(w));
    p.tensors.emplace_back(1, fan_out);
  }
  return p;
}

template <class S>
std::vector<Var> bind_params(Tape<S>& tape, const BasicModelParams<S>& params, bool requires_grad) {
  std::vector<Var> vars;
  vars.reserve(params.tensors.size());
  for (const auto& t : params.tensors) vars.push_back(tape.leaf(t, requires_grad));
  return vars;
}

// One message-passing layer: out_v = phi(concat(h_v, sum_N(v) h_u + max_N(v) h_u)),
// where phi is (linear, relu) repeated; `phi` holds W,b,W,b,...
template <class S>
Var hagnet_layer(Tape<S>& tape, Var h, const Adjacency& adj, std::span<const Var> phi) {
  if (phi.empty() || phi.size() % 2 != 0) throw Error(ErrorKind::ShapeMismatch, "phi needs (W, b) pairs");
  Var x = concat_rows(tape, h, neighbor_sum_max(tape, h, adj));
  for (std::size_t j = 0; j < phi.size(); j += 2) x = relu(tape, linear(tape, x, phi[j], phi[j + 1]));
  return x;
}

// Link probabilities [num_graphs x 1] for a batch.
template <class S>
Var forward_batch(Tape<S>& tape, std::span<const Var> params, const ModelConfig& cfg, const GraphBatch& batch) {
  if (batch.feature_dim != cfg.input_dim)
    throw Error(ErrorKind::ShapeMismatch, "batch features are " + std::to_string(batch.feature_dim) +
                                              "-dim, model expects " + std::to_string(cfg.input_dim));
  if (params.size() != 2 * (1 + cfg.num_layers * cfg.phi_depth + 3))
    throw Error(ErrorKind::ShapeMismatch, "parameter count does not match config");

  std::vector<S> feats(batch.node_features.begin(), batch.node_features.end());
  Var x = tape.constant(BasicTensor<S>(batch.num_nodes, batch.feature_dim, std::move(feats)));
  Var h = relu(tape, linear(tape, x, params[0], params[1]));

  std::size_t p = 2;
  const std::size_t per_layer = 2 * cfg.phi_depth;
  for (std::size_t k = 0; k < cfg.num_layers; ++k, p += per_layer)
    h = hagnet_layer(tape, h, batch.adjacency, params.subspan(p, per_layer));

  const std::size_t graphs = batch.num_graphs();
  Var pooled;
  if (cfg.readout == Readout::MeanAll) {
    std::vector<RowRange> ranges;
    for (std::size_t g = 0; g < graphs; ++g) ranges.emplace_back(batch.graph_start[g], batch.graph_start[g + 1]);
    pooled = segment_mean(tape, h, std::move(ranges));
  } else {
    std::vector<RowRange> attacker, target;
    for (std::size_t g = 0; g < graphs; ++g) {
      attacker.emplace_back(batch.graph_start[g], batch.attacker_end[g]);
      target.emplace_back(batch.attacker_end[g], batch.graph_start[g + 1]);
    }
    pooled = concat_rows(tape, segment_mean(tape, h, std::move(attacker)), segment_mean(tape, h, std::move(target)));
  }

  Var z = relu(tape, linear(tape, pooled, params[p], params[p + 1]));
  z = relu(tape, linear(tape, z, params[p + 2], params[p + 3]));
  z = linear(tape, z, params[p + 4], params[p + 5]);
  return sigmoid(tape, z);
}

// Inference on many graphs, chunked to bound memory.
inline std::vector<float> predict(const ModelParams& params, const ModelConfig& cfg,
                                  std::span<const FeaturizedGraph> graphs, std::size_t chunk = 512) {
  std::vector<float> out;
  out.reserve(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); i += chunk) {
    auto part = graphs.subspan(i, std::min(chunk, graphs.size() - i));
    auto batch = make_batch(part);
    Tape<float> tape;
    auto vars = bind_params(tape, params, false);
    Var p = forward_batch(tape, vars, cfg, batch);
    const auto& pv = tape.value(p);
    out.insert(out.end(), pv.values().begin(), pv.values().end());
  }
  return out;
}

inline float forward(const ModelParams& params, const ModelConfig& cfg, const FeaturizedGraph& g) {
  return predict(params, cfg, std::span<const FeaturizedGraph>(&g, 1)).front();
}

template <class S>
struct LossAndGrad {
  double loss = 0.0;
  std::vector<BasicTensor<S>> grads;
};

// Mean cross-entropy over the batch and its gradient w.r.t. every parameter.
template <class S>
LossAndGrad<S> loss_and_grad(const BasicModelParams<S>& params, const ModelConfig& cfg, const GraphBatch& batch,
                             std::vector<S> labels) {
  Tape<S> tape;
  auto vars = bind_params(tape, params, true);
  Var p = forward_batch(tape, vars, cfg, batch);
  Var loss = bce_loss(tape, p, std::move(labels));
  LossAndGrad<S> out;
  out.loss = static_cast<double>(tape.value(loss)[0]);
  if (!std::isfinite(out.loss)) throw Error(ErrorKind::NonFiniteLoss, "batch loss is not finite");
  tape.backward(loss);
  out.grads.reserve(vars.size());
  for (auto v : vars) out.grads.push_back(tape.grad(v));
  return out;
}

}  // namespace gplp
