#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gplp/error.hpp"
#include "gplp/tensor.hpp"

namespace gplp {

struct AdaBeliefConfig {
  double lr = 0.001;
  double eps = 1e-16;
  double beta0 = 0.9;
  double beta1 = 0.999;
  double weight_decay = 0.0001;

  void validate() const {
    if (!(lr > 0)) throw Error(ErrorKind::BadConfig, "lr must be > 0");
    if (!(eps > 0)) throw Error(ErrorKind::BadConfig, "eps must be > 0");
    if (!(beta0 >= 0 && beta0 < 1) || !(beta1 >= 0 && beta1 < 1))
      throw Error(ErrorKind::BadConfig, "betas must lie in [0,1)");
    if (!(weight_decay >= 0)) throw Error(ErrorKind::BadConfig, "weight_decay must be >= 0");
  }
};

// First moment and belief (centered second moment) per parameter entry, kept
// in double so that eps = 1e-16 is not lost to float rounding.
struct OptimizerState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> s;
  std::uint64_t step = 0;
};

template <class S>
OptimizerState make_optimizer_state(std::span<const BasicTensor<S>> params) {
  OptimizerState st;
  for (const auto& p : params) {
    st.m.emplace_back(p.size(), 0.0);
    st.s.emplace_back(p.size(), 0.0);
  }
  return st;
}

// One AdaBelief update with decoupled weight decay:
//   m <- b0 m + (1-b0) g
//   s <- b1 s + (1-b1) (g-m)^2 + eps
//   theta <- theta - lr*wd*theta - lr * m_hat / (sqrt(s_hat) + eps)
template <class S>
void adabelief_step(std::span<BasicTensor<S>> params, std::span<const BasicTensor<S>> grads, OptimizerState& state,
                    const AdaBeliefConfig& cfg) {
  if (params.size() != grads.size() || params.size() != state.m.size())
    throw Error(ErrorKind::ShapeMismatch, "adabelief_step: parameter/gradient/state counts differ");
  for (std::size_t k = 0; k < params.size(); ++k)
    if (!params[k].same_shape(grads[k]) || state.m[k].size() != params[k].size())
      throw Error(ErrorKind::ShapeMismatch, "adabelief_step: shape mismatch at tensor " + std::to_string(k));

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc0 = 1.0 - std::pow(cfg.beta0, t);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& theta = params[k];
    const auto& g = grads[k];
    auto& m = state.m[k];
    auto& s = state.s[k];
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double gi = static_cast<double>(g[i]);
      m[i] = cfg.beta0 * m[i] + (1.0 - cfg.beta0) * gi;
      const double dev = gi - m[i];
      s[i] = cfg.beta1 * s[i] + (1.0 - cfg.beta1) * dev * dev + cfg.eps;
      const double m_hat = m[i] / bc0;
      const double s_hat = s[i] / bc1;
      const double th = static_cast<double>(theta[i]);
      theta[i] = static_cast<S>(th - cfg.lr * cfg.weight_decay * th - cfg.lr * m_hat / (std::sqrt(s_hat) + cfg.eps));
    }
  }
}

}  // namespace gplp
