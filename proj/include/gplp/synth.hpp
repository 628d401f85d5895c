#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gplp/error.hpp"
#include "gplp/graph.hpp"
#include "gplp/ingest.hpp"
#include "gplp/random.hpp"

namespace gplp {

// Planted co-block benchmark: attackers and targets are cut into `blocks`
// contiguous groups; attacker block b and target block b form a co-block.
struct BlockModelSpec {
  std::uint32_t num_attackers = 200;
  std::uint32_t num_targets = 100;
  std::uint32_t blocks = 4;
  double p_in = 0.3;
  double p_out = 0.02;
  double neg_ratio = 2.0;
  std::uint64_t seed = 7;

  void validate() const {
    auto bad = [](const char* why) { throw Error(ErrorKind::BadParameter, why); };
    if (num_attackers < 1 || num_targets < 1) bad("need at least one attacker and one target");
    if (blocks < 1 || blocks > std::min(num_attackers, num_targets)) bad("blocks must lie in [1, min(M, N)]");
    if (!(p_in >= 0 && p_in <= 1) || !(p_out >= 0 && p_out <= 1)) bad("probabilities must lie in [0,1]");
    if (!(neg_ratio >= 0) || !std::isfinite(neg_ratio)) bad("neg_ratio must be >= 0");
  }
};

inline std::uint32_t block_of(std::uint32_t index, std::uint32_t count, std::uint32_t blocks) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) * blocks / count);
}

// Positives first drawn pair by pair; then round(neg_ratio * |positives|)
// negatives (capped at the number of remaining pairs) drawn uniformly without
// replacement from the non-positive pairs. Output is ordered by (attacker, target).
inline EdgeList generate_block_model(const BlockModelSpec& spec) {
  spec.validate();
  auto rng = make_rng(spec.seed, {stream::synth});
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const std::uint32_t M = spec.num_attackers, N = spec.num_targets;

  std::vector<char> positive(static_cast<std::size_t>(M) * N, 0);
  std::size_t n_pos = 0;
  for (std::uint32_t a = 0; a < M; ++a)
    for (std::uint32_t t = 0; t < N; ++t) {
      const bool same = block_of(a, M, spec.blocks) == block_of(t, N, spec.blocks);
      if (coin(rng) < (same ? spec.p_in : spec.p_out)) {
        positive[static_cast<std::size_t>(a) * N + t] = 1;
        ++n_pos;
      }
    }

  std::vector<std::size_t> candidates;
  candidates.reserve(positive.size() - n_pos);
  for (std::size_t k = 0; k < positive.size(); ++k)
    if (!positive[k]) candidates.push_back(k);
  const auto n_neg = std::min<std::size_t>(
      candidates.size(), static_cast<std::size_t>(std::llround(spec.neg_ratio * static_cast<double>(n_pos))));
  for (std::size_t i = 0; i < n_neg; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
    std::swap(candidates[i], candidates[pick(rng)]);
  }
  for (std::size_t i = 0; i < n_neg; ++i) positive[candidates[i]] = 2;

  EdgeList out{M, N, {}};
  for (std::size_t k = 0; k < positive.size(); ++k)
    if (positive[k])
      out.records.push_back({static_cast<std::uint32_t>(k / N), static_cast<std::uint32_t>(k % N), positive[k] == 1 ? 1 : 0});
  return out;
}

}  // namespace gplp
