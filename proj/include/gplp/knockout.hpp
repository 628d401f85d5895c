#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gplp/error.hpp"
#include "gplp/graph.hpp"
#include "gplp/ingest.hpp"
#include "gplp/metrics.hpp"
#include "gplp/random.hpp"
#include "gplp/subgraph.hpp"

namespace gplp {

enum class KnockoutScope : std::uint8_t { TrainOnly, TrainAndTest };

enum class KnockoutMode : std::uint8_t {
  Subgraph,      // knock each extracted star independently
  GlobalMatrix,  // knock the stars of the matrix itself, then extract
};

struct KnockoutConfig {
  std::uint64_t seed = 0;
  KnockoutScope scope = KnockoutScope::TrainOnly;
  bool allow_empty = true;
  KnockoutMode mode = KnockoutMode::Subgraph;
  // Scales the sampled count (rounded, kept within [1, degree]). 1 leaves the
  // sampled count untouched.
  double severity = 1.0;

  void validate() const {
    if (!(severity > 0.0 && severity <= 1.0)) throw Error(ErrorKind::BadConfig, "severity must lie in (0,1]");
  }
};

// Number of leaves to knock out of a star with `degree` leaves:
// P(k) = C(degree, k) / (2^degree - 1) for k = 1..degree. That is the size of a
// uniformly random non-empty subset, drawn here as the popcount of `degree`
// fair bits with the all-zero draw rejected.
template <class Engine>
std::size_t sample_knockout_count(std::size_t degree, Engine& rng) {
  if (degree < 1) throw Error(ErrorKind::BadDegree, "knock-out needs degree >= 1");
  for (;;) {
    std::size_t k = 0;
    for (std::size_t left = degree; left > 0;) {
      const std::size_t take = std::min<std::size_t>(left, 64);
      std::uint64_t bits = rng();
      if (take < 64) bits &= (std::uint64_t{1} << take) - 1;
      k += static_cast<std::size_t>(std::popcount(bits));
      left -= take;
    }
    if (k > 0) return k;
  }
}

template <class Engine>
Star knock_star(const Star& star, const KnockoutConfig& cfg, Engine& rng) {
  const std::size_t degree = star.leaves.size();
  if (degree == 0) return star;
  if (!cfg.allow_empty && degree == 1) return star;  // nothing can go without emptying the star

  std::size_t k = 0;
  do {
    k = sample_knockout_count(degree, rng);
    if (cfg.severity != 1.0)
      k = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(cfg.severity * static_cast<double>(k))), 1, degree);
  } while (!cfg.allow_empty && k == degree);

  // Partial Fisher-Yates: the first k slots of `order` are the removed leaves.
  std::vector<std::size_t> order(degree);
  for (std::size_t i = 0; i < degree; ++i) order[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, degree - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  std::vector<char> removed(degree, 0);
  for (std::size_t i = 0; i < k; ++i) removed[order[i]] = 1;

  Star out;
  out.center = star.center;
  out.leaves.reserve(degree - k);
  for (std::size_t i = 0; i < degree; ++i)
    if (!removed[i]) out.leaves.push_back(star.leaves[i]);
  return out;
}

// Both stars are knocked with draws from a stream owned by `pair_index`, so
// the result does not depend on processing order.
inline SubgraphPair knock_pair(const SubgraphPair& pair, const KnockoutConfig& cfg, std::uint64_t pair_index) {
  auto rng = make_rng(cfg.seed, {stream::knockout, pair_index});
  SubgraphPair out;
  out.label = pair.label;
  out.attacker_star = knock_star(pair.attacker_star, cfg, rng);
  out.target_star = knock_star(pair.target_star, cfg, rng);
  return out;
}

inline std::vector<SubgraphPair> knockout_training_set(std::span<const SubgraphPair> pairs, const KnockoutConfig& cfg) {
  cfg.validate();
  std::vector<SubgraphPair> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) out.push_back(knock_pair(pairs[i], cfg, i));
  return out;
}

// Global variant: every attacker star of the matrix is knocked, then every
// target star of what remains. Negative entries are kept; knocked positives
// become unknown.
inline InteractionMatrix knockout_matrix(const InteractionMatrix& m, const KnockoutConfig& cfg) {
  cfg.validate();
  constexpr std::uint64_t kTargetTag = std::uint64_t{1} << 40;
  auto knock_side = [&](const InteractionMatrix& src, Role role) {
    std::vector<EdgeRecord> kept;
    for (const auto& r : src.observed())
      if (r.label == 0) kept.push_back(r);
    for (std::uint32_t i = 0; i < src.size(role); ++i) {
      Star star{{role, i}, positive_neighbors(src, {role, i})};
      auto rng = make_rng(cfg.seed, {stream::knockout, (role == Role::Target ? kTargetTag : 0) + i});
      for (const auto& leaf : knock_star(star, cfg, rng).leaves)
        kept.push_back(role == Role::Attacker ? EdgeRecord{i, leaf.index, 1} : EdgeRecord{leaf.index, i, 1});
    }
    return build_matrix(src.num_attackers(), src.num_targets(), kept);
  };
  return knock_side(knock_side(m, Role::Attacker), Role::Target);
}

struct DegradationRow {
  std::string metric;
  double clean = 0.0;
  double degraded = 0.0;
  double delta = 0.0;     // degraded - clean
  double relative = 0.0;  // delta / clean, 0 when clean is 0
};

inline std::vector<DegradationRow> degradation_report(const MetricsReport& clean, const MetricsReport& degraded) {
  std::vector<DegradationRow> rows;
  auto c = clean.values();
  auto d = degraded.values();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double delta = d[i] - c[i];
    rows.push_back({MetricsReport::names[i], c[i], d[i], delta, c[i] != 0.0 ? delta / c[i] : 0.0});
  }
  return rows;
}

inline void write_degradation_report(std::ostream& os, const std::vector<DegradationRow>& rows) {
  os << std::setprecision(10) << "metric\tclean\tdegraded\tdelta\trelative_delta\n";
  for (const auto& r : rows)
    os << r.metric << '\t' << r.clean << '\t' << r.degraded << '\t' << r.delta << '\t' << r.relative << '\n';
}

inline void write_degree_histogram(std::ostream& os, const DegreeHistogram& hist) {
  os << "degree\tcount\n";
  for (auto [degree, count] : hist) os << degree << '\t' << count << '\n';
}

}  // namespace gplp
