#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gplp/error.hpp"

namespace gplp {

enum class Role : std::uint8_t { Attacker, Target };

inline Role opposite(Role r) { return r == Role::Attacker ? Role::Target : Role::Attacker; }

inline const char* to_string(Role r) { return r == Role::Attacker ? "attacker" : "target"; }

struct NodeId {
  Role role = Role::Attacker;
  std::uint32_t index = 0;

  static NodeId attacker(std::uint32_t i) { return {Role::Attacker, i}; }
  static NodeId target(std::uint32_t i) { return {Role::Target, i}; }

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

// Observed value of one matrix entry. Unknown is the "x" of an unobserved pair.
enum class Label : std::int8_t { Negative = 0, Positive = 1, Unknown = -1 };

struct EdgeRecord {
  std::uint32_t attacker = 0;
  std::uint32_t target = 0;
  int label = 0;  // 0 or 1
};

// Sparse observed attacker x target matrix. Positive entries are the graph's
// edges; negative entries are only ever used as labels. Adjacency lists are
// kept sorted so neighbor queries are deterministic and lookups are binary
// searches.
class InteractionMatrix {
 public:
  InteractionMatrix() = default;

  std::uint32_t num_attackers() const { return num_attackers_; }
  std::uint32_t num_targets() const { return num_targets_; }
  std::uint32_t size(Role role) const {
    return role == Role::Attacker ? num_attackers_ : num_targets_;
  }

  std::size_t num_positives() const { return num_positives_; }
  std::size_t num_negatives() const { return num_negatives_; }

  Label label(std::uint32_t a, std::uint32_t t) const {
    check_index(Role::Attacker, a);
    check_index(Role::Target, t);
    if (std::binary_search(pos_by_attacker_[a].begin(), pos_by_attacker_[a].end(), t))
      return Label::Positive;
    if (std::binary_search(neg_by_attacker_[a].begin(), neg_by_attacker_[a].end(), t))
      return Label::Negative;
    return Label::Unknown;
  }

  // Sorted opposite-role indices linked to v by a positive entry.
  std::span<const std::uint32_t> positive_indices(NodeId v) const {
    check_index(v.role, v.index);
    return v.role == Role::Attacker ? std::span<const std::uint32_t>(pos_by_attacker_[v.index])
                                    : std::span<const std::uint32_t>(pos_by_target_[v.index]);
  }

  std::size_t degree(NodeId v) const { return positive_indices(v).size(); }

  // All observed entries, ordered by (attacker, target).
  std::vector<EdgeRecord> observed() const {
    std::vector<EdgeRecord> out;
    out.reserve(num_positives_ + num_negatives_);
    for (std::uint32_t a = 0; a < num_attackers_; ++a) {
      auto& pos = pos_by_attacker_[a];
      auto& neg = neg_by_attacker_[a];
      std::size_t i = 0, j = 0;
      while (i < pos.size() || j < neg.size()) {
        if (j == neg.size() || (i < pos.size() && pos[i] < neg[j]))
          out.push_back({a, pos[i++], 1});
        else
          out.push_back({a, neg[j++], 0});
      }
    }
    return out;
  }

  void check_index(Role role, std::uint32_t index) const {
    if (index >= size(role))
      throw Error(ErrorKind::OutOfRange, std::string(to_string(role)) + " index " +
                                             std::to_string(index) + " >= " +
                                             std::to_string(size(role)));
  }

 private:
  friend InteractionMatrix build_matrix(std::uint32_t, std::uint32_t,
                                        std::span<const EdgeRecord>);

  std::uint32_t num_attackers_ = 0;
  std::uint32_t num_targets_ = 0;
  std::size_t num_positives_ = 0;
  std::size_t num_negatives_ = 0;
  std::vector<std::vector<std::uint32_t>> pos_by_attacker_;
  std::vector<std::vector<std::uint32_t>> pos_by_target_;
  std::vector<std::vector<std::uint32_t>> neg_by_attacker_;
};

// Duplicate records with the same label are accepted and collapse to one entry.
inline InteractionMatrix build_matrix(std::uint32_t num_attackers, std::uint32_t num_targets,
                                      std::span<const EdgeRecord> records) {
  InteractionMatrix m;
  m.num_attackers_ = num_attackers;
  m.num_targets_ = num_targets;
  m.pos_by_attacker_.resize(num_attackers);
  m.pos_by_target_.resize(num_targets);
  m.neg_by_attacker_.resize(num_attackers);

  for (const auto& r : records) {
    m.check_index(Role::Attacker, r.attacker);
    m.check_index(Role::Target, r.target);
    if (r.label != 0 && r.label != 1)
      throw Error(ErrorKind::BadParameter, "label must be 0 or 1, got " + std::to_string(r.label));
    (r.label == 1 ? m.pos_by_attacker_ : m.neg_by_attacker_)[r.attacker].push_back(r.target);
  }

  auto sort_unique = [](std::vector<std::uint32_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  for (std::uint32_t a = 0; a < num_attackers; ++a) {
    sort_unique(m.pos_by_attacker_[a]);
    sort_unique(m.neg_by_attacker_[a]);
    const auto& pos = m.pos_by_attacker_[a];
    const auto& neg = m.neg_by_attacker_[a];
    std::vector<std::uint32_t> both;
    std::set_intersection(pos.begin(), pos.end(), neg.begin(), neg.end(),
                          std::back_inserter(both));
    if (!both.empty())
      throw Error(ErrorKind::ConflictingLabel,
                  "(" + std::to_string(a) + "," + std::to_string(both.front()) + ")");
    m.num_positives_ += pos.size();
    m.num_negatives_ += neg.size();
    for (auto t : pos) m.pos_by_target_[t].push_back(a);
  }
  // Targets were appended in ascending attacker order, so already sorted.
  return m;
}

inline std::vector<NodeId> positive_neighbors(const InteractionMatrix& m, NodeId v) {
  auto idx = m.positive_indices(v);
  std::vector<NodeId> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back({opposite(v.role), i});
  return out;
}

using DegreeHistogram = std::map<std::size_t, std::size_t>;

inline DegreeHistogram degree_histogram(const InteractionMatrix& m, Role role) {
  DegreeHistogram hist;
  for (std::uint32_t i = 0; i < m.size(role); ++i) ++hist[m.degree({role, i})];
  return hist;
}

}  // namespace gplp
