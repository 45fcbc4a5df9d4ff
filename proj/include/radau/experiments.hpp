#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "radau/pinn.hpp"
#include "radau/solver.hpp"

namespace radau {

double absolute_error(double pred, double ref);
double mean_absolute_error(std::span<const double> preds, std::span<const double> refs);

// Reference states at the given non-decreasing times. Problems with a
// closed-form solution evaluate it; otherwise the index-reduced ODE is
// integrated with the classical v=3 solver in sub-steps no larger than
// h_ref (h/100 for experiment step h) and z is recovered from the
// hidden constraint.
std::vector<State> reference_trajectory(const DaeProblem& p, std::span<const double> times,
                                        double h_ref);

struct AePoint {
  std::string variable;  // y1..yn, z1..zm
  double t = 0.0;
  double ae = 0.0;
};

struct MaePoint {
  std::string variable;
  int segment = 0;
  double t_mid = 0.0;  // segment midpoint, the plotting abscissa
  double mae = 0.0;    // mean AE over the segment's v stage points + endpoint
};

struct ErrorReport {
  std::string problem;
  int stages = 0;
  double h = 0.0;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<AePoint> aes;
  std::vector<MaePoint> maes;
};

// AE at every stage point and segment endpoint of a marched trajectory,
// MAE per variable per segment, against reference_trajectory.
ErrorReport build_error_report(const DaeProblem& p, const Tableau& tab,
                               const PinnTrajectory& traj, std::uint64_t seed,
                               const std::string& config_hash);

struct StudyConfig {
  std::vector<int> stage_counts{2, 3, 5, 7};
  std::vector<std::uint64_t> seeds{0};
  double t0 = 0.0;
  double t_end = 1.0;
  double h = 0.05;
  TrainConfig train;  // identical budget for every order
};

struct StudyRun {
  int stages = 0;
  std::uint64_t seed = 0;
  double aggregate_mae = 0.0;  // mean over all (variable, segment) MAE entries
  ErrorReport report;
  PinnTrajectory trajectory;
};

struct OrderRanking {
  int stages = 0;
  int order = 0;
  double median_aggregate_mae = 0.0;  // median over seeds
};

struct StudyReport {
  std::string problem;
  std::vector<StudyRun> runs;
  std::vector<OrderRanking> ranking;  // ascending by median aggregate MAE
};

StudyReport run_order_study(const DaeProblem& p, const StudyConfig& cfg);

// Long-format rows: problem,v,order,variable,segment_t,mae,seed.
std::string study_csv(const StudyReport& report);

}  // namespace radau
