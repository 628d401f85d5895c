#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "gplp/autodiff.hpp"
#include "gplp/error.hpp"
#include "gplp/tensor.hpp"

namespace gplp {

template <class S>
using ScalarFunction = std::function<Var(Tape<S>&, std::span<const Var>)>;

// Largest relative disagreement between the tape gradient and a central
// finite difference, over every entry of every input:
//   |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
template <class S = double>
double grad_check(const ScalarFunction<S>& fn, const std::vector<BasicTensor<S>>& inputs, double eps = 1e-3) {
  Tape<S> tape;
  std::vector<Var> vars;
  for (const auto& x : inputs) vars.push_back(tape.leaf(x));
  Var out = fn(tape, vars);
  if (tape.value(out).size() != 1) throw Error(ErrorKind::ShapeMismatch, "grad_check needs a scalar function");
  tape.backward(out);

  auto value_at = [&](const std::vector<BasicTensor<S>>& xs) {
    Tape<S> t;
    std::vector<Var> v;
    for (const auto& x : xs) v.push_back(t.leaf(x, false));
    return static_cast<double>(t.value(fn(t, v))[0]);
  };

  double worst = 0.0;
  auto probe = inputs;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const auto& analytic = tape.grad(vars[k]);
    for (std::size_t i = 0; i < inputs[k].size(); ++i) {
      const S orig = probe[k][i];
      probe[k][i] = static_cast<S>(orig + eps);
      const double up = value_at(probe);
      probe[k][i] = static_cast<S>(orig - eps);
      const double down = value_at(probe);
      probe[k][i] = orig;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = static_cast<double>(analytic[i]);
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
  }
  return worst;
}

}  // namespace gplp
