#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gplp/error.hpp"
#include "gplp/graph.hpp"
#include "gplp/random.hpp"

namespace gplp {

struct EdgeList {
  std::uint32_t num_attackers = 0;
  std::uint32_t num_targets = 0;
  std::vector<EdgeRecord> records;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == '\t' || line[i] == ' ')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != '\t' && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace detail

// Tab-separated "attacker target label" per line. Lines beginning with '#' are
// comments, except "#dims M N" which fixes the index spaces. Blank lines are
// skipped; CRLF is accepted.
inline EdgeList parse_edge_list(std::istream& in) {
  EdgeList out;
  bool have_dims = false;
  std::uint32_t max_a = 0, max_t = 0;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto fields = detail::split_fields(line.substr(1));
      if (!fields.empty() && fields[0] == "dims") {
        if (fields.size() != 3 || !detail::parse_int(fields[1], out.num_attackers) ||
            !detail::parse_int(fields[2], out.num_targets))
          throw ParseError(lineno, "malformed #dims header");
        have_dims = true;
      }
      continue;
    }
    auto fields = detail::split_fields(line);
    if (fields.size() != 3) throw ParseError(lineno, "expected 3 fields, got " + std::to_string(fields.size()));
    EdgeRecord r;
    if (!detail::parse_int(fields[0], r.attacker)) throw ParseError(lineno, "bad attacker id");
    if (!detail::parse_int(fields[1], r.target)) throw ParseError(lineno, "bad target id");
    if (!detail::parse_int(fields[2], r.label) || (r.label != 0 && r.label != 1))
      throw ParseError(lineno, "bad label");
    if (have_dims && (r.attacker >= out.num_attackers || r.target >= out.num_targets))
      throw ParseError(lineno, "index exceeds #dims");
    max_a = std::max(max_a, r.attacker + 1);
    max_t = std::max(max_t, r.target + 1);
    out.records.push_back(r);
  }
  if (in.bad()) throw Error(ErrorKind::IoError, "read failure");
  if (!have_dims) {
    out.num_attackers = max_a;
    out.num_targets = max_t;
  }
  return out;
}

inline void write_edge_list(std::ostream& os, std::uint32_t num_attackers, std::uint32_t num_targets,
                            std::span<const EdgeRecord> records) {
  os << "#dims " << num_attackers << ' ' << num_targets << '\n';
  for (const auto& r : records) os << r.attacker << '\t' << r.target << '\t' << r.label << '\n';
}

// Stream tags for derive_seed; keeps the randomized steps independent of each other.
namespace stream {
inline constexpr std::uint64_t split = 1;
inline constexpr std::uint64_t kfold = 2;
inline constexpr std::uint64_t rebalance = 3;
inline constexpr std::uint64_t shuffle = 4;
inline constexpr std::uint64_t init = 5;
inline constexpr std::uint64_t knockout = 6;
inline constexpr std::uint64_t synth = 7;
}  // namespace stream

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool stratified = false;
};

struct Split {
  std::vector<EdgeRecord> train;
  std::vector<EdgeRecord> test;
};

namespace detail {

inline std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

}  // namespace detail

// Records keep their relative input order on each side of the split.
inline Split split_train_test(std::span<const EdgeRecord> records, const SplitSpec& spec) {
  if (records.empty()) throw Error(ErrorKind::EmptyDataset, "no records to split");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw Error(ErrorKind::BadParameter, "train_fraction must lie in (0,1)");

  auto rng = make_rng(spec.seed, {stream::split});
  std::vector<char> in_train(records.size(), 0);
  auto take = [&](std::vector<std::size_t> pool) {
    std::shuffle(pool.begin(), pool.end(), rng);
    auto n_train = static_cast<std::size_t>(std::lround(spec.train_fraction * pool.size()));
    for (std::size_t i = 0; i < n_train; ++i) in_train[pool[i]] = 1;
  };
  if (spec.stratified) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < records.size(); ++i) (records[i].label == 1 ? pos : neg).push_back(i);
    take(std::move(pos));
    take(std::move(neg));
  } else {
    std::vector<std::size_t> all(records.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    take(std::move(all));
  }

  Split out;
  for (std::size_t i = 0; i < records.size(); ++i)
    (in_train[i] ? out.train : out.test).push_back(records[i]);
  return out;
}

struct Fold {
  std::vector<EdgeRecord> train;
  std::vector<EdgeRecord> validation;
};

// Fold sizes differ by at most one; the first (n mod k) folds get the extra record.
inline std::vector<Fold> kfold(std::span<const EdgeRecord> records, std::size_t k, std::uint64_t seed) {
  if (k < 2 || records.size() < k)
    throw Error(ErrorKind::BadFoldCount,
                "k=" + std::to_string(k) + " with " + std::to_string(records.size()) + " records");
  auto rng = make_rng(seed, {stream::kfold});
  auto order = detail::shuffled_indices(records.size(), rng);
  std::vector<std::size_t> fold_of(records.size());
  std::size_t base = records.size() / k, extra = records.size() % k, pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    std::size_t sz = base + (f < extra ? 1 : 0);
    for (std::size_t i = 0; i < sz; ++i) fold_of[order[pos++]] = f;
  }
  std::vector<Fold> folds(k);
  for (std::size_t i = 0; i < records.size(); ++i)
    for (std::size_t f = 0; f < k; ++f)
      (fold_of[i] == f ? folds[f].validation : folds[f].train).push_back(records[i]);
  return folds;
}

enum class RebalanceMode { Off, Upsample, Downsample };

// Indices into `records` forming a 1:1 class-balanced multiset. Upsampling keeps
// every record and appends minority copies drawn with replacement;
// downsampling keeps the minority and draws the majority without replacement.
inline std::vector<std::size_t> rebalance_indices(std::span<const EdgeRecord> records, std::uint64_t seed,
                                                  RebalanceMode mode = RebalanceMode::Upsample) {
  std::vector<std::size_t> all(records.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (mode == RebalanceMode::Off) return all;

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < records.size(); ++i) (records[i].label == 1 ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) throw Error(ErrorKind::SingleClass, "rebalance needs both classes");
  if (pos.size() == neg.size()) return all;

  auto rng = make_rng(seed, {stream::rebalance});
  auto& minority = pos.size() < neg.size() ? pos : neg;
  auto& majority = pos.size() < neg.size() ? neg : pos;
  if (mode == RebalanceMode::Upsample) {
    std::uniform_int_distribution<std::size_t> pick(0, minority.size() - 1);
    for (std::size_t i = minority.size(); i < majority.size(); ++i) all.push_back(minority[pick(rng)]);
    return all;
  }
  std::shuffle(majority.begin(), majority.end(), rng);
  majority.resize(minority.size());
  std::vector<std::size_t> kept(minority);
  kept.insert(kept.end(), majority.begin(), majority.end());
  std::sort(kept.begin(), kept.end());
  return kept;
}

inline std::vector<EdgeRecord> rebalance_1to1(std::span<const EdgeRecord> records, std::uint64_t seed,
                                              RebalanceMode mode = RebalanceMode::Upsample) {
  std::vector<EdgeRecord> out;
  for (auto i : rebalance_indices(records, seed, mode)) out.push_back(records[i]);
  return out;
}

template <class T>
std::vector<T> epoch_shuffle(std::span<const T> items, std::uint64_t seed, std::uint64_t epoch) {
  std::vector<T> out(items.begin(), items.end());
  auto rng = make_rng(seed, {stream::shuffle, epoch});
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

template <class T>
std::vector<T> epoch_shuffle(const std::vector<T>& items, std::uint64_t seed, std::uint64_t epoch) {
  return epoch_shuffle(std::span<const T>(items), seed, epoch);
}

}  // namespace gplp
