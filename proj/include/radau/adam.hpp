#pragma once

#include <span>
#include <vector>

namespace radau {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long decay_start = 0;      // updates at the base rate before decay kicks in
  long decay_every = 0;      // 0 disables the stepwise schedule
  double decay_factor = 0.5;
};

struct AdamState {
  std::vector<double> m;  // first moments
  std::vector<double> v;  // second moments
  long step = 0;          // completed updates
  double beta1_t = 1.0;   // beta1^step, kept incrementally
  double beta2_t = 1.0;
};

AdamState adam_init(std::size_t n);

// Learning rate used for update number `step` (1-based).
double adam_lr(const AdamConfig& cfg, long step);

// One bias-corrected Adam update, in place.
void adam_update(AdamState& state, const AdamConfig& cfg, std::span<double> params,
                 std::span<const double> grads);

}  // namespace radau
