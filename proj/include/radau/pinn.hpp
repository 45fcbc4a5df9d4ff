#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "radau/adam.hpp"
#include "radau/dae.hpp"
#include "radau/network.hpp"
#include "radau/solver.hpp"
#include "radau/tableau.hpp"

namespace radau {

// Trainer Adam defaults, tuned on the desk-scale Hessenberg benchmark. The
// loss landscape has a flat valley coupling the algebraic stages with
// tangential stage moves; lr 2e-3 with beta1 0.95 walks that valley roughly
// 4x further in a fixed budget than the plain 1e-3 / 0.9 setting.
inline AdamConfig trainer_adam_defaults() {
  AdamConfig a;
  a.lr = 2e-3;
  a.beta1 = 0.95;
  return a;
}

struct TrainConfig {
  long iterations = 100000;
  int width = 100;
  int depth = 5;
  Activation activation = Activation::sigmoid;
  double eta = 5.0;
  AdamConfig adam = trainer_adam_defaults();
  // Default schedule, proportional to the budget: full rate for the first
  // 20% of iterations, then halved every 8%. Explicit adam.decay_* values
  // take precedence when this is off.
  bool auto_lr_schedule = true;
  double w_f = 1.0;
  double w_g = 1.0;
  double w_s = 1.0;
  std::uint64_t seed = 0;
  double early_stop_loss = 0.0;  // > 0 stops a segment once total loss drops below it
  long history_stride = 1000;
  bool warm_start = false;  // seed each segment with the previous segment's parameters

  // The classical_oracle backend replaces training by radau_step inside
  // march; it exists to validate the decomposition plumbing against
  // integrate() and for tests.
  enum class Backend { pinn, classical_oracle };
  Backend backend = Backend::pinn;

  // Optional operator-style batch: extra initial states trained alongside
  // the warm-started one. Off (empty) by default.
  std::vector<std::vector<double>> extra_initial_states;
};

// One network per differential variable (outputs its v stage values plus the
// endpoint), one network for all algebraic stage values, one for the
// algebraic endpoint. All networks take y_n as input.
struct SegmentModel {
  const DaeProblem* problem = nullptr;
  Tableau tableau;
  double t_n = 0.0;
  double h = 0.0;
  double w_f = 1.0, w_g = 1.0, w_s = 1.0;
  std::vector<NetworkParameters> diff_nets;  // n nets, out_dim = v + 1
  NetworkParameters alg_stage_net;           // out_dim = m * v, stage-major
  NetworkParameters alg_end_net;             // out_dim = m
};

struct SegmentPrediction {
  Matrix xi;    // v x n
  Matrix zeta;  // v x m
  std::vector<double> y_next;
  std::vector<double> z_next;
};

struct LossBreakdown {
  double total = 0.0;
  double lf = 0.0;  // Radau stage + endpoint residuals of the differential part
  double lg = 0.0;  // constraint residuals at stages and endpoint
  double ls = 0.0;  // z_next vs last algebraic stage
};

SegmentModel build_segment_model(const DaeProblem& p, const Tableau& tab, double t_n, double h,
                                 const TrainConfig& cfg);

SegmentPrediction segment_predict(const SegmentModel& model, std::span<const double> y_n);

// Loss of arbitrary (possibly injected) predictions; the batch dimension k
// runs over initial-value samples. Normalizations: L_f and L_g by
// N_T (v + 1), L_s by N_T.
LossBreakdown pinn_loss_terms(const DaeProblem& p, const Tableau& tab, double t_n, double h,
                              double w_f, double w_g, double w_s,
                              std::span<const std::vector<double>> y_samples,
                              std::span<const SegmentPrediction> preds);

LossBreakdown pinn_loss(const SegmentModel& model, std::span<const double> y_n);

// Reverse-mode gradient of the total loss with respect to the concatenated
// network parameters (diff_nets order, then alg_stage_net, alg_end_net).
struct LossGradient {
  LossBreakdown loss;
  std::vector<double> grad;
};
LossGradient pinn_loss_gradient(const SegmentModel& model, std::span<const double> y_n);

struct TrainRecord {
  long iteration = 0;
  double lf = 0.0, lg = 0.0, ls = 0.0, total = 0.0;
  double best_total = 0.0;  // best seen up to this record; non-increasing
};

struct TrainResult {
  SegmentModel final_model;
  SegmentModel best_model;  // lowest total loss seen during training
  double final_loss = 0.0;
  double best_loss = 0.0;
  long best_iteration = 0;
  std::vector<TrainRecord> history;
  bool aborted = false;
  std::string message;
};

// cfg.iterations Adam steps on the recorded loss; deterministic per seed.
// A non-finite loss aborts and returns the best-so-far parameters.
TrainResult train_segment(const SegmentModel& model, std::span<const double> y_n,
                          const TrainConfig& cfg);

struct SegmentLog {
  double t_n = 0.0;
  double h = 0.0;
  SegmentPrediction prediction;
  double final_loss = 0.0;
  double best_loss = 0.0;
  long best_iteration = 0;
  long iterations = 0;
  double wall_seconds = 0.0;
  std::vector<TrainRecord> history;
  // best parameters, for checkpointing: diff_1..diff_n, alg_stages, alg_end
  std::vector<std::pair<std::string, NetworkParameters>> networks;
};

struct PinnTrajectory {
  std::vector<double> grid;
  std::vector<std::vector<double>> y;  // per grid point; y[0] = y0
  std::vector<std::vector<double>> z;  // z[0] = z0, then per-segment z_next
  std::vector<SegmentLog> segments;
  bool aborted = false;
  std::string diagnostic;
  bool ok() const { return !aborted; }
};

// Sequential time-domain decomposition: one model per interval, the
// predicted y_next of segment k feeding segment k+1.
PinnTrajectory march(const DaeProblem& p, const Tableau& tab, double t0, double t_end, double h,
                     const TrainConfig& cfg);

}  // namespace radau
