#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gplp/error.hpp"

namespace gplp {

// Compressed neighbor lists of an undirected graph; each row is ascending.
struct Adjacency {
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint32_t> neighbors;

  std::size_t num_nodes() const { return offsets.size() - 1; }

  std::span<const std::uint32_t> neighbors_of(std::size_t v) const {
    return {neighbors.data() + offsets[v], neighbors.data() + offsets[v + 1]};
  }

  static Adjacency from_edges(std::size_t num_nodes,
                              std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
    std::vector<std::vector<std::uint32_t>> rows(num_nodes);
    for (auto [i, j] : edges) {
      if (i >= num_nodes || j >= num_nodes) throw Error(ErrorKind::IndexError, "edge endpoint out of range");
      rows[i].push_back(j);
      rows[j].push_back(i);
    }
    return from_rows(rows);
  }

  static Adjacency from_rows(std::vector<std::vector<std::uint32_t>>& rows) {
    Adjacency adj;
    adj.offsets.reserve(rows.size() + 1);
    for (auto& row : rows) {
      std::sort(row.begin(), row.end());
      adj.neighbors.insert(adj.neighbors.end(), row.begin(), row.end());
      adj.offsets.push_back(static_cast<std::uint32_t>(adj.neighbors.size()));
    }
    return adj;
  }
};

}  // namespace gplp
