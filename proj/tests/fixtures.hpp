#pragma once

// Shared builders for the test suites.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "gplp/model.hpp"
#include "gplp/ops.hpp"
#include "gplp/subgraph.hpp"
#include "oracles.hpp"

namespace gplp::fixture {

// rows x cols of distinct values at least 0.06 apart and at least 0.03 from
// zero, in random positions. Finite differences at eps = 1e-3 then never cross
// a relu kink or change a max winner.
inline BasicTensor<double> spread(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  const std::size_t n = rows * cols;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  BasicTensor<double> t(rows, cols);
  const double mid = static_cast<double>(n / 2);
  for (std::size_t i = 0; i < n; ++i) t[i] = (static_cast<double>(perm[i]) - mid) * 0.1 + 0.05 + jitter(rng);
  return t;
}

inline BasicTensor<double> uniform(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  BasicTensor<double> t(rows, cols);
  for (auto& v : t.values()) v = u(rng);
  return t;
}

inline ModelConfig small_config() {
  ModelConfig cfg;
  cfg.hidden_dim = 6;
  cfg.num_layers = 2;
  cfg.head_dims = {5, 4, 1};
  return cfg;
}

// A few featurized pairs from a small random matrix, with both labels present.
inline std::vector<FeaturizedGraph> small_graphs(std::uint64_t seed, std::size_t count, FeatureMode mode,
                                                 std::vector<double>* labels = nullptr) {
  auto recs = oracle::random_records(8, 7, 0.3, 0.3, seed);
  auto m = build_matrix(8, 7, recs);
  std::mt19937_64 rng(seed);
  std::vector<FeaturizedGraph> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& r = recs[rng() % recs.size()];
    out.push_back(featurize(extract_pair(m, r.attacker, r.target), m, mode));
    if (labels) labels->push_back(i % 2 == 0 ? 1.0 : 0.0);
  }
  return out;
}

}  // namespace gplp::fixture
