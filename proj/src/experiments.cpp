#include "radau/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "radau/errors.hpp"
#include "radau/io.hpp"
#include "radau/problems.hpp"
#include "radau/tableau.hpp"

namespace radau {

double absolute_error(double pred, double ref) {
  if (!std::isfinite(pred) || !std::isfinite(ref))
    throw std::invalid_argument("absolute_error: non-finite input");
  return std::abs(ref - pred);
}

double mean_absolute_error(std::span<const double> preds, std::span<const double> refs) {
  if (preds.size() != refs.size() || preds.empty())
    throw std::invalid_argument("mean_absolute_error: lengths must match and be nonempty");
  double s = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) s += absolute_error(preds[i], refs[i]);
  return s / static_cast<double>(preds.size());
}

std::vector<State> reference_trajectory(const DaeProblem& p, std::span<const double> times,
                                        double h_ref) {
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] < times[i - 1])
      throw std::invalid_argument("reference_trajectory: times must be non-decreasing");

  std::vector<State> out;
  out.reserve(times.size());

  if (p.has_exact()) {
    for (double t : times) out.push_back(p.exact(t));
    return out;
  }
  if (!p.has_reduced_z())
    throw std::invalid_argument("reference_trajectory: problem '" + p.name +
                                "' has neither an exact solution nor a reduced_z map");

  // integrate the index-reduced ODE through every requested time
  const DaeProblem ode = index_reduced_ode(p);
  const Tableau tab = radau_tableau(3);
  NewtonConfig cfg;
  cfg.tol = 1e-13;

  double t = p.t0;
  std::vector<double> y = p.y0;
  std::vector<double> z(p.dim_z);
  for (double target : times) {
    if (target < p.t0)
      throw std::invalid_argument("reference_trajectory: time before t0");
    if (target > t) {
      const auto steps = std::max<long>(1, std::llround(std::ceil((target - t) / h_ref)));
      const double h_loc = (target - t) / static_cast<double>(steps);
      for (long k = 0; k < steps; ++k) {
        const StepResult r = radau_step(ode, tab, t, y, {}, h_loc, cfg);
        if (!r.ok())
          throw NumericalError("reference_trajectory: reduced-ODE step failed: " + r.message);
        y = r.solution.y_next;
        t += h_loc;
      }
      t = target;  // guard accumulated rounding
    }
    p.reduced_z(target, y, z);
    out.push_back(State{target, y, z});
  }
  return out;
}

ErrorReport build_error_report(const DaeProblem& p, const Tableau& tab,
                               const PinnTrajectory& traj, std::uint64_t seed,
                               const std::string& config_hash) {
  const int v = tab.stages, n = p.dim_y, m = p.dim_z;
  ErrorReport rep;
  rep.problem = p.name;
  rep.stages = v;
  rep.seed = seed;
  rep.config_hash = config_hash;
  rep.h = traj.segments.empty() ? 0.0 : traj.segments.front().h;

  // evaluation times: per segment, v stage points then the endpoint
  std::vector<double> times;
  for (const SegmentLog& seg : traj.segments) {
    for (int i = 0; i < v; ++i) times.push_back(tab.time_for_stage(seg.t_n, seg.h, i));
    times.push_back(seg.t_n + seg.h);
  }
  const std::vector<State> refs = reference_trajectory(p, times, rep.h / 100.0);

  auto var_name = [&](int k) {
    return k < n ? "y" + std::to_string(k + 1) : "z" + std::to_string(k - n + 1);
  };

  std::size_t cursor = 0;
  for (std::size_t s = 0; s < traj.segments.size(); ++s) {
    const SegmentLog& seg = traj.segments[s];
    std::vector<double> sum(n + m, 0.0);
    for (int i = 0; i <= v; ++i) {  // i == v is the endpoint
      const State& ref = refs[cursor + i];
      for (int k = 0; k < n + m; ++k) {
        const bool alg = k >= n;
        const double pred = i < v ? (alg ? seg.prediction.zeta(i, k - n) : seg.prediction.xi(i, k))
                                  : (alg ? seg.prediction.z_next[k - n] : seg.prediction.y_next[k]);
        const double ae = absolute_error(pred, alg ? ref.z[k - n] : ref.y[k]);
        rep.aes.push_back({var_name(k), ref.t, ae});
        sum[k] += ae;
      }
    }
    for (int k = 0; k < n + m; ++k)
      rep.maes.push_back({var_name(k), static_cast<int>(s), seg.t_n + 0.5 * seg.h,
                          sum[k] / (v + 1)});
    cursor += v + 1;
  }
  return rep;
}

StudyReport run_order_study(const DaeProblem& p, const StudyConfig& cfg) {
  if (cfg.stage_counts.empty()) throw std::invalid_argument("run_order_study: no stage counts");
  if (cfg.seeds.empty()) throw std::invalid_argument("run_order_study: no seeds");

  StudyReport report;
  report.problem = p.name;

  for (int v : cfg.stage_counts) {
    const Tableau tab = radau_tableau(v);
    for (std::uint64_t seed : cfg.seeds) {
      TrainConfig train = cfg.train;
      train.seed = seed;
      StudyRun run;
      run.stages = v;
      run.seed = seed;
      run.trajectory = march(p, tab, cfg.t0, cfg.t_end, cfg.h, train);
      if (run.trajectory.aborted)
        throw TrainingAbort("run_order_study: v=" + std::to_string(v) +
                            " seed=" + std::to_string(seed) + ": " + run.trajectory.diagnostic);
      run.report = build_error_report(p, tab, run.trajectory, seed, "");
      double total = 0.0;
      for (const MaePoint& mp : run.report.maes) total += mp.mae;
      run.aggregate_mae = total / static_cast<double>(run.report.maes.size());
      report.runs.push_back(std::move(run));
    }
  }

  for (int v : cfg.stage_counts) {
    std::vector<double> agg;
    for (const StudyRun& run : report.runs)
      if (run.stages == v) agg.push_back(run.aggregate_mae);
    std::sort(agg.begin(), agg.end());
    const std::size_t mid = agg.size() / 2;
    const double median =
        agg.size() % 2 == 1 ? agg[mid] : 0.5 * (agg[mid - 1] + agg[mid]);
    report.ranking.push_back({v, 2 * v - 1, median});
  }
  std::sort(report.ranking.begin(), report.ranking.end(),
            [](const OrderRanking& a, const OrderRanking& b) {
              return a.median_aggregate_mae < b.median_aggregate_mae;
            });
  return report;
}

std::string study_csv(const StudyReport& report) {
  std::string csv = "problem,v,order,variable,segment_t,mae,seed\n";
  for (const StudyRun& run : report.runs)
    for (const MaePoint& mp : run.report.maes) {
      csv += report.problem + ',' + std::to_string(run.stages) + ',' +
             std::to_string(2 * run.stages - 1) + ',' + mp.variable + ',' +
             format_double(mp.t_mid) + ',' + format_double(mp.mae) + ',' +
             std::to_string(run.seed) + '\n';
    }
  return csv;
}

}  // namespace radau
