#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "radau/pinn.hpp"

namespace radau {

// Resolved run configuration. Precedence: command-line flags > config file >
// defaults. Defaults mirror the benchmark setup (h = 0.05, depth 5, width
// 100, 100000 iterations, unit loss weights).
struct RunConfig {
  std::string mode;  // tableau | solve | train | study
  std::string problem = "hessenberg";
  std::map<std::string, double> problem_params;  // e.g. m, lambda

  int stages = 3;
  double h = 0.05;
  double t0 = 0.0;
  double t_end = 1.0;

  int width = 100;
  int depth = 5;
  std::string activation;  // empty = per-problem default (hessenberg: sigmoid, pendulum: sin)
  double eta = 5.0;

  long iterations = 100000;
  double lr = trainer_adam_defaults().lr;
  double beta1 = trainer_adam_defaults().beta1;
  double beta2 = trainer_adam_defaults().beta2;
  double eps = trainer_adam_defaults().eps;
  long decay_start = -1;  // -1 = automatic schedule proportional to the budget
  long decay_every = -1;  // 0 disables decay
  double decay_factor = 0.5;

  double w_f = 1.0;
  double w_g = 1.0;
  double w_s = 1.0;
  double early_stop = 0.0;
  long history_stride = 1000;
  bool warm_start = false;

  double newton_tol = 1e-12;
  int newton_max_iters = 50;

  std::uint64_t seed = 0;
  std::vector<int> orders{2, 3, 5, 7};           // study stage counts
  std::vector<std::uint64_t> study_seeds{0};     // study seeds
  std::string out = "out";
  std::string format = "csv";
};

// One key=value per line; '#' starts a comment; keys use dotted sections
// (net.width=100). Unknown keys and malformed values are rejected by name.
void apply_config_file(RunConfig& cfg, const std::string& path);
void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value);

// Range checks; throws std::invalid_argument naming the offending key.
void validate(const RunConfig& cfg);

Activation resolve_activation(const RunConfig& cfg);
TrainConfig to_train_config(const RunConfig& cfg);
NewtonConfig to_newton_config(const RunConfig& cfg);

// Canonical key=value serialization (stable order); config_hash is its
// FNV-1a fingerprint, recorded in reports and manifests.
std::string serialize(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

}  // namespace radau
