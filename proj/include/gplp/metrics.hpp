#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gplp/error.hpp"

namespace gplp {

struct ScoredSet {
  std::vector<double> scores;
  std::vector<int> labels;  // 0 or 1

  std::size_t size() const { return scores.size(); }
};

namespace detail {

inline std::pair<std::size_t, std::size_t> class_counts(const ScoredSet& s) {
  if (s.scores.size() != s.labels.size()) throw Error(ErrorKind::ShapeMismatch, "scores and labels differ in length");
  std::size_t pos = 0;
  for (int l : s.labels) {
    if (l != 0 && l != 1) throw Error(ErrorKind::BadParameter, "labels must be 0 or 1");
    pos += static_cast<std::size_t>(l);
  }
  return {pos, s.labels.size() - pos};
}

inline std::pair<std::size_t, std::size_t> require_both_classes(const ScoredSet& s) {
  auto [pos, neg] = class_counts(s);
  if (pos == 0 || neg == 0) throw Error(ErrorKind::SingleClass, "curve metrics need both classes");
  return {pos, neg};
}

// Indices sorted by descending score; ties keep input order.
inline std::vector<std::size_t> descending_order(const ScoredSet& s) {
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.scores[a] > s.scores[b]; });
  return idx;
}

}  // namespace detail

// Mann-Whitney form: P(score_pos > score_neg) + P(tie)/2, from rank sums with
// tied scores sharing their average rank.
inline double auroc(const ScoredSet& s) {
  auto [pos, neg] = detail::require_both_classes(s);
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.scores[a] < s.scores[b]; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && s.scores[idx[j]] == s.scores[idx[i]]) ++j;
    const double avg_rank = static_cast<double>(i + 1 + j) / 2.0;  // ranks i+1..j
    for (std::size_t k = i; k < j; ++k)
      if (s.labels[idx[k]] == 1) rank_sum += avg_rank;
    i = j;
  }
  const double p = static_cast<double>(pos), n = static_cast<double>(neg);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

// Points (recall, precision), one per distinct score threshold, descending.
inline std::vector<CurvePoint> pr_curve(const ScoredSet& s) {
  auto [pos, neg] = detail::require_both_classes(s);
  (void)neg;
  auto idx = detail::descending_order(s);
  std::vector<CurvePoint> pts;
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && s.scores[idx[j]] == s.scores[idx[i]]) {
      (s.labels[idx[j]] == 1 ? tp : fp) += 1;
      ++j;
    }
    pts.push_back({static_cast<double>(tp) / static_cast<double>(pos),
                   static_cast<double>(tp) / static_cast<double>(tp + fp)});
    i = j;
  }
  return pts;
}

// Step-wise area: each recall increment is weighted by the precision at the
// threshold that reaches it.
inline double aupr(const ScoredSet& s) {
  double area = 0.0, prev_recall = 0.0;
  for (auto [recall, precision] : pr_curve(s)) {
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return area;
}

// Points (fpr, tpr) starting at (0,0), one per distinct threshold.
inline std::vector<CurvePoint> roc_curve(const ScoredSet& s) {
  auto [pos, neg] = detail::require_both_classes(s);
  auto idx = detail::descending_order(s);
  std::vector<CurvePoint> pts{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && s.scores[idx[j]] == s.scores[idx[i]]) {
      (s.labels[idx[j]] == 1 ? tp : fp) += 1;
      ++j;
    }
    pts.push_back({static_cast<double>(fp) / static_cast<double>(neg), static_cast<double>(tp) / static_cast<double>(pos)});
    i = j;
  }
  return pts;
}

inline double harmonic(double x, double y) { return x + y > 0.0 ? 2.0 * x * y / (x + y) : 0.0; }

struct MetricsReport {
  double auroc_pos = 0, auroc_neg = 0, auroc_harmonic = 0;
  double aupr_pos = 0, aupr_neg = 0, aupr_harmonic = 0;
  double precision = 0, recall = 0;

  static constexpr std::array<const char*, 8> names{"auroc_pos", "auroc_neg", "auroc_harmonic", "aupr_pos",
                                                    "aupr_neg",  "aupr_harmonic", "precision", "recall"};

  std::array<double, 8> values() const {
    return {auroc_pos, auroc_neg, auroc_harmonic, aupr_pos, aupr_neg, aupr_harmonic, precision, recall};
  }

  static MetricsReport from_values(const std::array<double, 8>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
  }
};

inline constexpr double kDecisionThreshold = 0.5;

// Positive-class metrics on (scores, labels), negative-class metrics on
// (1 - scores, 1 - labels), and their harmonic means. Precision and recall
// are for the positive class with score >= 0.5 predicted positive; precision
// is 0 when nothing is predicted positive.
inline MetricsReport dual_class_report(const ScoredSet& s) {
  detail::require_both_classes(s);
  ScoredSet flipped;
  flipped.scores.reserve(s.size());
  flipped.labels.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    flipped.scores.push_back(1.0 - s.scores[i]);
    flipped.labels.push_back(1 - s.labels[i]);
  }
  MetricsReport r;
  r.auroc_pos = auroc(s);
  r.auroc_neg = auroc(flipped);
  r.auroc_harmonic = harmonic(r.auroc_pos, r.auroc_neg);
  r.aupr_pos = aupr(s);
  r.aupr_neg = aupr(flipped);
  r.aupr_harmonic = harmonic(r.aupr_pos, r.aupr_neg);

  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool predicted = s.scores[i] >= kDecisionThreshold;
    if (predicted && s.labels[i] == 1) ++tp;
    else if (predicted) ++fp;
    else if (s.labels[i] == 1) ++fn;
  }
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return r;
}

// "metric<TAB>value" lines.
inline void write_report(std::ostream& os, const MetricsReport& r) {
  auto v = r.values();
  os << std::setprecision(10);
  for (std::size_t i = 0; i < v.size(); ++i) os << MetricsReport::names[i] << '\t' << v[i] << '\n';
}

inline MetricsReport read_report(std::istream& in) {
  std::array<double, 8> v{};
  std::array<bool, 8> seen{};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ss(line);
    std::string name;
    double value = 0;
    if (!(ss >> name >> value)) throw ParseError(lineno, "expected 'metric<TAB>value'");
    auto it = std::find(MetricsReport::names.begin(), MetricsReport::names.end(), name);
    if (it == MetricsReport::names.end()) throw ParseError(lineno, "unknown metric " + name);
    auto k = static_cast<std::size_t>(it - MetricsReport::names.begin());
    v[k] = value;
    seen[k] = true;
  }
  for (std::size_t k = 0; k < seen.size(); ++k)
    if (!seen[k]) throw Error(ErrorKind::FormatError, std::string("report is missing ") + MetricsReport::names[k]);
  return MetricsReport::from_values(v);
}

inline void write_curve(std::ostream& os, const std::vector<CurvePoint>& pts, const char* x_name, const char* y_name) {
  os << std::setprecision(10) << x_name << '\t' << y_name << '\n';
  for (auto p : pts) os << p.x << '\t' << p.y << '\n';
}

}  // namespace gplp
