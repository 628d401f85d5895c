#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gplp/adjacency.hpp"
#include "gplp/autodiff.hpp"
#include "gplp/error.hpp"
#include "gplp/tensor.hpp"

// Differentiable ops used by the model. Each op checks shapes, computes its
// forward value and records a closure that pushes the output gradient back to
// whichever inputs require one.

namespace gplp {

namespace detail {

template <class S>
using RowMatrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class S>
Eigen::Map<RowMatrix<S>> as_matrix(BasicTensor<S>& t) {
  return {t.data(), static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols())};
}

template <class S>
Eigen::Map<const RowMatrix<S>> as_matrix(const BasicTensor<S>& t) {
  return {t.data(), static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols())};
}

inline std::string shape_str(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

template <class S>
std::string shape_str(const BasicTensor<S>& t) {
  return shape_str(t.rows(), t.cols());
}

}  // namespace detail

// out = x W + b, with x [n x p], W [p x q], b [1 x q].
template <class S>
Var linear(Tape<S>& tape, Var x, Var w, Var b) {
  const auto& xv = tape.value(x);
  const auto& wv = tape.value(w);
  const auto& bv = tape.value(b);
  if (xv.cols() != wv.rows() || bv.rows() != 1 || bv.cols() != wv.cols())
    throw Error(ErrorKind::ShapeMismatch, "linear: x " + detail::shape_str(xv) + ", W " + detail::shape_str(wv) +
                                              ", b " + detail::shape_str(bv));
  BasicTensor<S> out(xv.rows(), wv.cols());
  auto om = detail::as_matrix(out);
  om.noalias() = detail::as_matrix(xv) * detail::as_matrix(wv);
  om.rowwise() += detail::as_matrix(bv).row(0);

  bool rg = tape.requires_grad(x) || tape.requires_grad(w) || tape.requires_grad(b);
  return tape.record(
      std::move(out), rg,
      [x, w, b](Tape<S>& t, std::size_t self) {
        const auto& g = t.grad_accumulator(self);
        auto gm = detail::as_matrix(g);
        if (t.requires_grad(x))
          detail::as_matrix(t.grad_accumulator(x.id)).noalias() += gm * detail::as_matrix(t.value(w)).transpose();
        if (t.requires_grad(w))
          detail::as_matrix(t.grad_accumulator(w.id)).noalias() += detail::as_matrix(t.value(x)).transpose() * gm;
        if (t.requires_grad(b)) {
          auto& gb = t.grad_accumulator(b.id);
          for (std::size_t c = 0; c < g.cols(); ++c) {
            double acc = 0.0;
            for (std::size_t r = 0; r < g.rows(); ++r) acc += g(r, c);
            gb[c] += static_cast<S>(acc);
          }
        }
      },
      "linear");
}

// Gradient at exactly zero is zero.
template <class S>
Var relu(Tape<S>& tape, Var x) {
  const auto& xv = tape.value(x);
  BasicTensor<S> out(xv.rows(), xv.cols());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = xv[i] > S(0) ? xv[i] : S(0);
  return tape.record(
      std::move(out), tape.requires_grad(x),
      [x](Tape<S>& t, std::size_t self) {
        const auto& g = t.grad_accumulator(self);
        const auto& xv = t.value(x);
        auto& gx = t.grad_accumulator(x.id);
        for (std::size_t i = 0; i < g.size(); ++i)
          if (xv[i] > S(0)) gx[i] += g[i];
      },
      "relu");
}

// Output is kept strictly inside (0,1) even where the scalar type would round to 0 or 1.
template <class S>
Var sigmoid(Tape<S>& tape, Var x) {
  const auto& xv = tape.value(x);
  constexpr S lo = std::numeric_limits<S>::min();
  const S hi = std::nextafter(S(1), S(0));
  BasicTensor<S> out(xv.rows(), xv.cols());
  for (std::size_t i = 0; i < xv.size(); ++i) {
    double z = static_cast<double>(xv[i]);
    double s = z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    out[i] = std::clamp(static_cast<S>(s), lo, hi);
  }
  return tape.record(
      std::move(out), tape.requires_grad(x),
      [x](Tape<S>& t, std::size_t self) {
        const auto& g = t.grad_accumulator(self);
        const auto& y = t.value(Var{self});
        auto& gx = t.grad_accumulator(x.id);
        for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * y[i] * (S(1) - y[i]);
      },
      "sigmoid");
}

// Row-wise concatenation: [n x p] and [n x q] give [n x (p+q)].
template <class S>
Var concat_rows(Tape<S>& tape, Var x, Var y) {
  const auto& xv = tape.value(x);
  const auto& yv = tape.value(y);
  if (xv.rows() != yv.rows())
    throw Error(ErrorKind::ShapeMismatch, "concat_rows: " + detail::shape_str(xv) + " vs " + detail::shape_str(yv));
  const std::size_t n = xv.rows(), p = xv.cols(), q = yv.cols();
  BasicTensor<S> out(n, p + q);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy_n(xv.data() + r * p, p, out.data() + r * (p + q));
    std::copy_n(yv.data() + r * q, q, out.data() + r * (p + q) + p);
  }
  return tape.record(
      std::move(out), tape.requires_grad(x) || tape.requires_grad(y),
      [x, y, p, q](Tape<S>& t, std::size_t self) {
        const auto& g = t.grad_accumulator(self);
        const std::size_t n = g.rows();
        if (t.requires_grad(x)) {
          auto& gx = t.grad_accumulator(x.id);
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < p; ++c) gx[r * p + c] += g[r * (p + q) + c];
        }
        if (t.requires_grad(y)) {
          auto& gy = t.grad_accumulator(y.id);
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < q; ++c) gy[r * q + c] += g[r * (p + q) + p + c];
        }
      },
      "concat_rows");
}

// Row v of the output is sum_{u in N(v)} h_u + max_{u in N(v)} h_u (elementwise),
// or zeros when N(v) is empty. The max gradient goes to the first maximizing
// neighbor in ascending node order.
template <class S>
Var neighbor_sum_max(Tape<S>& tape, Var h, const Adjacency& adj) {
  const auto& hv = tape.value(h);
  if (adj.num_nodes() != hv.rows())
    throw Error(ErrorKind::ShapeMismatch,
                "neighbor_sum_max: adjacency has " + std::to_string(adj.num_nodes()) + " nodes, h has " +
                    std::to_string(hv.rows()) + " rows");
  const std::size_t n = hv.rows(), d = hv.cols();
  for (auto u : adj.neighbors)
    if (u >= n) throw Error(ErrorKind::IndexError, "neighbor index " + std::to_string(u) + " >= " + std::to_string(n));

  BasicTensor<S> out(n, d);
  std::vector<std::uint32_t> argmax(n * d, 0);
  std::vector<double> acc(d);
  for (std::size_t v = 0; v < n; ++v) {
    auto nb = adj.neighbors_of(v);
    if (nb.empty()) continue;
    std::fill(acc.begin(), acc.end(), 0.0);
    const S* first = hv.data() + nb[0] * d;
    S* o = out.data() + v * d;
    std::uint32_t* am = argmax.data() + v * d;
    for (std::size_t c = 0; c < d; ++c) {
      o[c] = first[c];
      am[c] = nb[0];
    }
    for (auto u : nb) {
      const S* hu = hv.data() + u * d;
      for (std::size_t c = 0; c < d; ++c) {
        acc[c] += hu[c];
        if (hu[c] > o[c]) {
          o[c] = hu[c];
          am[c] = u;
        }
      }
    }
    for (std::size_t c = 0; c < d; ++c) o[c] = static_cast<S>(acc[c] + static_cast<double>(o[c]));
  }
  return tape.record(
      std::move(out), tape.requires_grad(h),
      [h, adj, argmax = std::move(argmax)](Tape<S>& t, std::size_t self) {
        const auto& g = t.grad_accumulator(self);
        auto& gh = t.grad_accumulator(h.id);
        const std::size_t n = g.rows(), d = g.cols();
        for (std::size_t v = 0; v < n; ++v) {
          auto nb = adj.neighbors_of(v);
          if (nb.empty()) continue;
          const S* gv = g.data() + v * d;
          for (auto u : nb) {
            S* gu = gh.data() + u * d;
            for (std::size_t c = 0; c < d; ++c) gu[c] += gv[c];
          }
          const std::uint32_t* am = argmax.data() + v * d;
          for (std::size_t c = 0; c < d; ++c) gh[am[c] * d + c] += gv[c];
        }
      },
      "neighbor_sum_max");
}

// Selects row r as a [1 x d] tensor.
template <class S>
Var take_row(Tape<S>& tape, Var x, std::size_t r) {
  const auto& xv = tape.value(x);
  if (r >= xv.rows()) throw Error(ErrorKind::IndexError, "row " + std::to_string(r) + " of " + detail::shape_str(xv));
  const std::size_t d = xv.cols();
  BasicTensor<S> out(1, d, std::vector<S>(xv.data() + r * d, xv.data() + (r + 1) * d));
  return tape.record(
      std::move(out), tape.requires_grad(x),
      [x, r](Tape<S>& t, std::size_t self) {
        const auto& g = t.grad_accumulator(self);
        auto& gx = t.grad_accumulator(x.id);
        for (std::size_t c = 0; c < g.cols(); ++c) gx[r * g.cols() + c] += g[c];
      },
      "take_row");
}

// Single-node form of the aggregate: [1 x d] for node v.
template <class S>
Var neighbor_sum_max(Tape<S>& tape, Var h, const Adjacency& adj, std::size_t v) {
  if (v >= adj.num_nodes()) throw Error(ErrorKind::IndexError, "node " + std::to_string(v));
  return take_row(tape, neighbor_sum_max(tape, h, adj), v);
}

using RowRange = std::pair<std::size_t, std::size_t>;  // [begin, end)

// One output row per range: the column means of x over that row range.
template <class S>
Var segment_mean(Tape<S>& tape, Var x, std::vector<RowRange> ranges) {
  const auto& xv = tape.value(x);
  const std::size_t d = xv.cols();
  for (auto [b, e] : ranges) {
    if (e <= b) throw Error(ErrorKind::EmptyInput, "mean over an empty row range");
    if (e > xv.rows()) throw Error(ErrorKind::IndexError, "row range past end of " + detail::shape_str(xv));
  }
  BasicTensor<S> out(ranges.size(), d);
  std::vector<double> acc(d);
  for (std::size_t s = 0; s < ranges.size(); ++s) {
    auto [b, e] = ranges[s];
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t r = b; r < e; ++r)
      for (std::size_t c = 0; c < d; ++c) acc[c] += xv(r, c);
    for (std::size_t c = 0; c < d; ++c) out(s, c) = static_cast<S>(acc[c] / static_cast<double>(e - b));
  }
  return tape.record(
      std::move(out), tape.requires_grad(x),
      [x, ranges = std::move(ranges)](Tape<S>& t, std::size_t self) {
        const auto& g = t.grad_accumulator(self);
        auto& gx = t.grad_accumulator(x.id);
        const std::size_t d = g.cols();
        for (std::size_t s = 0; s < ranges.size(); ++s) {
          auto [b, e] = ranges[s];
          const S inv = static_cast<S>(1.0 / static_cast<double>(e - b));
          for (std::size_t r = b; r < e; ++r)
            for (std::size_t c = 0; c < d; ++c) gx(r, c) += g(s, c) * inv;
        }
      },
      "segment_mean");
}

template <class S>
Var mean_rows(Tape<S>& tape, Var x) {
  const auto rows = tape.value(x).rows();
  if (rows == 0) throw Error(ErrorKind::EmptyInput, "mean_rows of zero rows");
  return segment_mean(tape, x, {RowRange{0, rows}});
}

inline constexpr double kProbabilityClamp = 1e-7;

// Cross-entropy of one probability against a 0/1 label, on the clamped probability.
inline double bce_value(double p, double label) {
  const double pc = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return -(label * std::log(pc) + (1.0 - label) * std::log(1.0 - pc));
}

// Mean cross-entropy of p [n x 1] against labels; returns [1 x 1].
template <class S>
Var bce_loss(Tape<S>& tape, Var p, std::vector<S> labels) {
  const auto& pv = tape.value(p);
  if (pv.cols() != 1 || pv.rows() != labels.size() || labels.empty())
    throw Error(ErrorKind::ShapeMismatch,
                "bce_loss: p " + detail::shape_str(pv) + " with " + std::to_string(labels.size()) + " labels");
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) total += bce_value(pv[i], labels[i]);
  BasicTensor<S> out(1, 1, static_cast<S>(total / static_cast<double>(labels.size())));
  return tape.record(
      std::move(out), tape.requires_grad(p),
      [p, labels = std::move(labels)](Tape<S>& t, std::size_t self) {
        const double g = t.grad_accumulator(self)[0];
        const auto& pv = t.value(p);
        auto& gp = t.grad_accumulator(p.id);
        const double n = static_cast<double>(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
          const double pc = std::clamp(static_cast<double>(pv[i]), kProbabilityClamp, 1.0 - kProbabilityClamp);
          gp[i] += static_cast<S>(g * (pc - labels[i]) / (pc * (1.0 - pc)) / n);
        }
      },
      "bce_loss");
}

// sum(x .* weights) as [1 x 1]; turns any tensor into a scalar for gradient checks.
template <class S>
Var weighted_sum(Tape<S>& tape, Var x, BasicTensor<S> weights) {
  const auto& xv = tape.value(x);
  if (!xv.same_shape(weights))
    throw Error(ErrorKind::ShapeMismatch, "weighted_sum: " + detail::shape_str(xv) + " vs " + detail::shape_str(weights));
  double acc = 0.0;
  for (std::size_t i = 0; i < xv.size(); ++i) acc += static_cast<double>(xv[i]) * weights[i];
  return tape.record(
      BasicTensor<S>(1, 1, static_cast<S>(acc)), tape.requires_grad(x),
      [x, weights = std::move(weights)](Tape<S>& t, std::size_t self) {
        const S g = t.grad_accumulator(self)[0];
        auto& gx = t.grad_accumulator(x.id);
        for (std::size_t i = 0; i < weights.size(); ++i) gx[i] += g * weights[i];
      },
      "weighted_sum");
}

}  // namespace gplp
