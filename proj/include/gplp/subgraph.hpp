#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gplp/adjacency.hpp"
#include "gplp/error.hpp"
#include "gplp/graph.hpp"

namespace gplp {

// 1-hop neighborhood of one node. In a bipartite graph this is always a star.
struct Star {
  NodeId center;
  std::vector<NodeId> leaves;

  std::size_t degree() const { return leaves.size(); }
};

// One model input: the attacker star and the target star for a queried pair.
struct SubgraphPair {
  Star attacker_star;
  Star target_star;
  Label label = Label::Unknown;
};

// Structural position of a node inside a regrouped graph; also the one-hot slot.
enum class NodeKind : std::uint8_t { CenterAttacker = 0, CenterTarget = 1, LeafTarget = 2, LeafAttacker = 3 };

// RoleAndDegree: role one-hot + log(1 + degree).
// RoleOnly: role one-hot.
// RoleDegreeBridge: RoleAndDegree + log(1 + b), where b counts the positive
//   links from a leaf to the leaves of the other star (0 for centers).
enum class FeatureMode : std::uint8_t { RoleAndDegree = 0, RoleOnly = 1, RoleDegreeBridge = 2 };

inline std::size_t feature_dim(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::RoleOnly: return 4;
    case FeatureMode::RoleAndDegree: return 5;
    case FeatureMode::RoleDegreeBridge: return 6;
  }
  return 0;
}

inline const char* to_string(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::RoleOnly: return "role";
    case FeatureMode::RoleAndDegree: return "degree";
    case FeatureMode::RoleDegreeBridge: return "bridge";
  }
  return "?";
}

struct FeaturizedGraph {
  std::size_t num_nodes = 0;
  std::size_t feature_dim = 0;
  std::vector<float> node_features;  // num_nodes x feature_dim, row-major
  std::vector<std::pair<std::uint32_t, std::uint32_t>> adjacency;  // undirected center-leaf links
  std::vector<NodeKind> node_kinds;
  std::size_t attacker_part = 0;  // nodes [0, attacker_part) form the attacker star

  std::span<const float> features(std::size_t node) const {
    return {node_features.data() + node * feature_dim, feature_dim};
  }
};

// Builds the pair for (a, t). For an observed positive the queried link is
// removed from both stars so the input never shows the edge being predicted.
inline SubgraphPair extract_pair(const InteractionMatrix& m, std::uint32_t a, std::uint32_t t) {
  SubgraphPair pair;
  pair.label = m.label(a, t);
  pair.attacker_star.center = NodeId::attacker(a);
  pair.target_star.center = NodeId::target(t);
  const bool drop = pair.label == Label::Positive;
  for (auto tt : m.positive_indices(NodeId::attacker(a)))
    if (!(drop && tt == t)) pair.attacker_star.leaves.push_back(NodeId::target(tt));
  for (auto aa : m.positive_indices(NodeId::target(t)))
    if (!(drop && aa == a)) pair.target_star.leaves.push_back(NodeId::attacker(aa));
  return pair;
}

namespace detail {

// Size of the intersection of two ascending index lists.
inline std::size_t sorted_overlap(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) {
  std::size_t i = 0, j = 0, n = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] < y[j]) ++i;
    else if (y[j] < x[i]) ++j;
    else { ++n; ++i; ++j; }
  }
  return n;
}

inline std::vector<std::uint32_t> sorted_leaf_indices(const Star& star) {
  std::vector<std::uint32_t> idx;
  idx.reserve(star.leaves.size());
  for (const auto& l : star.leaves) idx.push_back(l.index);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace detail

// Node order: attacker center, its leaves, target center, its leaves. Leaf
// degrees come from the matrix; a center's degree is its star size, which is
// the matrix degree after the queried link has been removed.
inline FeaturizedGraph featurize(const SubgraphPair& pair, const InteractionMatrix& m,
                                 FeatureMode mode = FeatureMode::RoleDegreeBridge) {
  if (pair.attacker_star.center.role != Role::Attacker || pair.target_star.center.role != Role::Target)
    throw Error(ErrorKind::BadParameter, "pair centers have wrong roles");

  FeaturizedGraph g;
  g.feature_dim = feature_dim(mode);
  g.num_nodes = 2 + pair.attacker_star.leaves.size() + pair.target_star.leaves.size();
  g.attacker_part = 1 + pair.attacker_star.leaves.size();
  g.node_features.assign(g.num_nodes * g.feature_dim, 0.0f);
  g.node_kinds.reserve(g.num_nodes);
  g.adjacency.reserve(g.num_nodes - 2);

  auto add_node = [&](NodeKind kind, std::size_t degree, std::size_t bridge) {
    std::size_t row = g.node_kinds.size();
    g.node_kinds.push_back(kind);
    float* f = g.node_features.data() + row * g.feature_dim;
    f[static_cast<std::size_t>(kind)] = 1.0f;
    if (mode != FeatureMode::RoleOnly) f[4] = static_cast<float>(std::log1p(static_cast<double>(degree)));
    if (mode == FeatureMode::RoleDegreeBridge) f[5] = static_cast<float>(std::log1p(static_cast<double>(bridge)));
    return static_cast<std::uint32_t>(row);
  };

  std::vector<std::uint32_t> other_leaves[2];
  if (mode == FeatureMode::RoleDegreeBridge) {
    other_leaves[0] = detail::sorted_leaf_indices(pair.target_star);
    other_leaves[1] = detail::sorted_leaf_indices(pair.attacker_star);
  }

  auto add_star = [&](const Star& star, NodeKind center_kind, NodeKind leaf_kind, int side) {
    auto c = add_node(center_kind, star.leaves.size(), 0);
    for (const auto& leaf : star.leaves) {
      if (leaf.role == star.center.role) throw Error(ErrorKind::BadParameter, "leaf has center's role");
      std::size_t bridge = 0;
      if (mode == FeatureMode::RoleDegreeBridge)
        bridge = detail::sorted_overlap(m.positive_indices(leaf), other_leaves[side]);
      auto l = add_node(leaf_kind, m.degree(leaf), bridge);
      g.adjacency.emplace_back(c, l);
    }
  };
  add_star(pair.attacker_star, NodeKind::CenterAttacker, NodeKind::LeafTarget, 0);
  add_star(pair.target_star, NodeKind::CenterTarget, NodeKind::LeafAttacker, 1);
  return g;
}

// Several graphs laid out as one disjoint union.
struct GraphBatch {
  std::size_t num_nodes = 0;
  std::size_t feature_dim = 0;
  std::vector<float> node_features;
  Adjacency adjacency;
  std::vector<std::size_t> graph_start;   // size num_graphs + 1
  std::vector<std::size_t> attacker_end;  // exclusive end of each graph's attacker star

  std::size_t num_graphs() const { return graph_start.empty() ? 0 : graph_start.size() - 1; }
};

inline GraphBatch make_batch(std::span<const FeaturizedGraph> graphs) {
  if (graphs.empty()) throw Error(ErrorKind::EmptyInput, "empty batch");
  GraphBatch b;
  b.feature_dim = graphs.front().feature_dim;
  std::size_t total = 0;
  for (const auto& g : graphs) {
    if (g.feature_dim != b.feature_dim) throw Error(ErrorKind::ShapeMismatch, "mixed feature widths in batch");
    total += g.num_nodes;
  }
  b.num_nodes = total;
  b.node_features.reserve(total * b.feature_dim);
  b.graph_start.reserve(graphs.size() + 1);
  b.attacker_end.reserve(graphs.size());
  std::vector<std::vector<std::uint32_t>> rows(total);
  std::size_t base = 0;
  for (const auto& g : graphs) {
    b.graph_start.push_back(base);
    b.attacker_end.push_back(base + g.attacker_part);
    b.node_features.insert(b.node_features.end(), g.node_features.begin(), g.node_features.end());
    for (auto [i, j] : g.adjacency) {
      if (i >= g.num_nodes || j >= g.num_nodes) throw Error(ErrorKind::IndexError, "adjacency index out of range");
      rows[base + i].push_back(static_cast<std::uint32_t>(base + j));
      rows[base + j].push_back(static_cast<std::uint32_t>(base + i));
    }
    base += g.num_nodes;
  }
  b.graph_start.push_back(base);
  b.adjacency = Adjacency::from_rows(rows);
  return b;
}

inline GraphBatch make_batch(const FeaturizedGraph& g) { return make_batch(std::span<const FeaturizedGraph>(&g, 1)); }

}  // namespace gplp
