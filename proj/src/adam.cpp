#include "radau/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace radau {

AdamState adam_init(std::size_t n) {
  AdamState s;
  s.m.assign(n, 0.0);
  s.v.assign(n, 0.0);
  return s;
}

double adam_lr(const AdamConfig& cfg, long step) {
  if (cfg.decay_every <= 0) return cfg.lr;
  const long decays = (step - 1 - cfg.decay_start) / cfg.decay_every;
  if (decays <= 0) return cfg.lr;
  return cfg.lr * std::pow(cfg.decay_factor, static_cast<double>(decays));
}

void adam_update(AdamState& state, const AdamConfig& cfg, std::span<double> params,
                 std::span<const double> grads) {
  if (params.size() != state.m.size() || grads.size() != state.m.size())
    throw std::invalid_argument("adam_update: size mismatch");

  ++state.step;
  state.beta1_t *= cfg.beta1;
  state.beta2_t *= cfg.beta2;
  const double lr = adam_lr(cfg, state.step);
  const double c1 = 1.0 / (1.0 - state.beta1_t);
  const double c2 = 1.0 / (1.0 - state.beta2_t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
    const double mhat = state.m[i] * c1;
    const double vhat = state.v[i] * c2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
  }
}

}  // namespace radau
