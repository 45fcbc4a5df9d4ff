#include "radau/pinn.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "radau/errors.hpp"
#include "radau/rng.hpp"

namespace radau {
namespace {

NetworkLayout layout_for(const TrainConfig& cfg, int in_dim, int out_dim) {
  return {in_dim, out_dim, cfg.width, cfg.depth, cfg.activation, cfg.eta};
}

void require_trainable(const DaeProblem& p) {
  if (p.dim_z < 1)
    throw std::invalid_argument("pinn: problem has no algebraic variables");
  if (!p.f_record || !p.g_record)
    throw std::invalid_argument("pinn: problem does not provide recorded f/g");
}

// Flat concatenation of all n+2 networks, in diff_nets order then
// alg_stage_net, alg_end_net. Training runs Adam over this single vector.
struct FlatParams {
  std::vector<double> data;
  std::vector<int> offsets;  // per network
};

FlatParams flatten(const SegmentModel& m) {
  FlatParams f;
  for (const NetworkParameters& net : m.diff_nets) {
    f.offsets.push_back(static_cast<int>(f.data.size()));
    f.data.insert(f.data.end(), net.data.begin(), net.data.end());
  }
  f.offsets.push_back(static_cast<int>(f.data.size()));
  f.data.insert(f.data.end(), m.alg_stage_net.data.begin(), m.alg_stage_net.data.end());
  f.offsets.push_back(static_cast<int>(f.data.size()));
  f.data.insert(f.data.end(), m.alg_end_net.data.begin(), m.alg_end_net.data.end());
  return f;
}

SegmentModel unflatten(const SegmentModel& proto, const FlatParams& f,
                       std::span<const double> data) {
  SegmentModel m = proto;
  const int n = static_cast<int>(proto.diff_nets.size());
  for (int i = 0; i < n; ++i) {
    auto& d = m.diff_nets[i].data;
    std::copy_n(data.begin() + f.offsets[i], d.size(), d.begin());
  }
  std::copy_n(data.begin() + f.offsets[n], m.alg_stage_net.data.size(),
              m.alg_stage_net.data.begin());
  std::copy_n(data.begin() + f.offsets[n + 1], m.alg_end_net.data.size(),
              m.alg_end_net.data.begin());
  return m;
}

struct RecordedLoss {
  ad::Var total, lf, lg, ls;
};

ad::Var sum_squares(std::span<const ad::Var> v, ad::Var acc, bool& started) {
  for (const ad::Var& x : v) {
    const ad::Var s = square(x);
    acc = started ? acc + s : s;
    started = true;
  }
  return acc;
}

// Records the full three-term loss for all samples on the tape. Parameters
// of network i live at flat_base + offsets[i].
RecordedLoss record_loss(ad::Tape& tape, const SegmentModel& m,
                         std::span<const std::vector<double>> samples, int flat_base,
                         std::span<const int> offsets) {
  const DaeProblem& p = *m.problem;
  const Tableau& tab = m.tableau;
  const int v = tab.stages, n = p.dim_y, mz = p.dim_z;
  const double h = m.h;
  const double t_end = m.t_n + h;
  const auto n_samples = static_cast<double>(samples.size());

  ad::Var lf{}, lg{}, ls{};
  bool lf_started = false, lg_started = false, ls_started = false;

  for (const std::vector<double>& y_n : samples) {
    std::vector<ad::Var> xv;
    xv.reserve(n);
    for (double c : y_n) xv.push_back(ad::make_var(tape, c));

    // forward passes: n per-variable nets, algebraic stages, algebraic endpoint
    std::vector<std::vector<ad::Var>> diff_out(n);
    for (int j = 0; j < n; ++j)
      diff_out[j] = forward_record(tape, m.diff_nets[j].layout, flat_base + offsets[j], xv);
    const auto alg_stage =
        forward_record(tape, m.alg_stage_net.layout, flat_base + offsets[n], xv);
    const auto alg_end =
        forward_record(tape, m.alg_end_net.layout, flat_base + offsets[n + 1], xv);

    auto xi_row = [&](int i) {
      std::vector<ad::Var> row(n);
      for (int j = 0; j < n; ++j) row[j] = diff_out[j][i];
      return row;
    };
    auto zeta_row = [&](int i) {
      std::vector<ad::Var> row(mz);
      for (int c = 0; c < mz; ++c) row[c] = alg_stage[i * mz + c];
      return row;
    };
    std::vector<ad::Var> y_next(n);
    for (int j = 0; j < n; ++j) y_next[j] = diff_out[j][v];

    std::vector<std::vector<ad::Var>> f_stage(v);
    for (int i = 0; i < v; ++i)
      f_stage[i] = p.f_record(tape, tab.time_for_stage(m.t_n, h, i), xi_row(i), zeta_row(i));

    // L_f: v stage residuals plus the b-weighted endpoint residual
    for (int i = 0; i < v; ++i) {
      for (int c = 0; c < n; ++c) {
        ad::Var acc = diff_out[c][i];
        for (int j = 0; j < v; ++j) acc = acc - f_stage[j][c] * (h * tab.a(i, j));
        const ad::Var r = y_n[c] - acc;
        lf = lf_started ? lf + square(r) : square(r);
        lf_started = true;
      }
    }
    for (int c = 0; c < n; ++c) {
      ad::Var acc = y_next[c];
      for (int j = 0; j < v; ++j) acc = acc - f_stage[j][c] * (h * tab.b[j]);
      const ad::Var r = y_n[c] - acc;
      lf = lf + square(r);
    }

    // L_g: constraints at the stages and at the predicted endpoint
    for (int i = 0; i < v; ++i) {
      const auto gv = p.g_record(tape, tab.time_for_stage(m.t_n, h, i), xi_row(i));
      lg = sum_squares(gv, lg, lg_started);
    }
    lg = sum_squares(p.g_record(tape, t_end, y_next), lg, lg_started);

    // L_s: algebraic endpoint vs last algebraic stage
    for (int c = 0; c < mz; ++c) {
      const ad::Var r = alg_end[c] - alg_stage[(v - 1) * mz + c];
      ls = ls_started ? ls + square(r) : square(r);
      ls_started = true;
    }
  }

  RecordedLoss out;
  out.lf = lf * (1.0 / (n_samples * (v + 1)));
  out.lg = lg * (1.0 / (n_samples * (v + 1)));
  out.ls = ls * (1.0 / n_samples);
  out.total = out.lf * m.w_f + out.lg * m.w_g + out.ls * m.w_s;
  return out;
}

}  // namespace

SegmentModel build_segment_model(const DaeProblem& p, const Tableau& tab, double t_n, double h,
                                 const TrainConfig& cfg) {
  require_trainable(p);
  if (h <= 0.0) throw std::invalid_argument("build_segment_model: h must be positive");

  SegmentModel m;
  m.problem = &p;
  m.tableau = tab;
  m.t_n = t_n;
  m.h = h;
  m.w_f = cfg.w_f;
  m.w_g = cfg.w_g;
  m.w_s = cfg.w_s;

  const int v = tab.stages;
  for (int j = 0; j < p.dim_y; ++j)
    m.diff_nets.push_back(
        init_network(layout_for(cfg, p.dim_y, v + 1), derive_seed(cfg.seed, j)));
  m.alg_stage_net =
      init_network(layout_for(cfg, p.dim_y, p.dim_z * v), derive_seed(cfg.seed, p.dim_y));
  m.alg_end_net =
      init_network(layout_for(cfg, p.dim_y, p.dim_z), derive_seed(cfg.seed, p.dim_y + 1));
  return m;
}

SegmentPrediction segment_predict(const SegmentModel& m, std::span<const double> y_n) {
  const int v = m.tableau.stages, n = m.problem->dim_y, mz = m.problem->dim_z;
  SegmentPrediction pred;
  pred.xi = Matrix(v, n);
  pred.zeta = Matrix(v, mz);
  pred.y_next.resize(n);

  for (int j = 0; j < n; ++j) {
    const auto out = forward(m.diff_nets[j], y_n);
    for (int i = 0; i < v; ++i) pred.xi(i, j) = out[i];
    pred.y_next[j] = out[v];
  }
  const auto stages = forward(m.alg_stage_net, y_n);
  for (int i = 0; i < v; ++i)
    for (int c = 0; c < mz; ++c) pred.zeta(i, c) = stages[i * mz + c];
  pred.z_next = forward(m.alg_end_net, y_n);
  return pred;
}

LossBreakdown pinn_loss_terms(const DaeProblem& p, const Tableau& tab, double t_n, double h,
                              double w_f, double w_g, double w_s,
                              std::span<const std::vector<double>> y_samples,
                              std::span<const SegmentPrediction> preds) {
  if (y_samples.empty() || y_samples.size() != preds.size())
    throw std::invalid_argument("pinn_loss_terms: need one prediction per sample");
  const int v = tab.stages, n = p.dim_y, mz = p.dim_z;

  double lf = 0.0, lg = 0.0, ls = 0.0;
  std::vector<double> fv(n), gv(mz);
  Matrix f_stage(v, n);

  for (std::size_t k = 0; k < y_samples.size(); ++k) {
    const std::vector<double>& y_n = y_samples[k];
    const SegmentPrediction& pr = preds[k];

    for (int i = 0; i < v; ++i) {
      p.f(tab.time_for_stage(t_n, h, i), pr.xi.row(i), pr.zeta.row(i), fv);
      for (int c = 0; c < n; ++c) f_stage(i, c) = fv[c];
    }
    for (int i = 0; i < v; ++i) {
      for (int c = 0; c < n; ++c) {
        double acc = pr.xi(i, c);
        for (int j = 0; j < v; ++j) acc -= f_stage(j, c) * (h * tab.a(i, j));
        const double r = y_n[c] - acc;
        lf += r * r;
      }
    }
    for (int c = 0; c < n; ++c) {
      double acc = pr.y_next[c];
      for (int j = 0; j < v; ++j) acc -= f_stage(j, c) * (h * tab.b[j]);
      const double r = y_n[c] - acc;
      lf += r * r;
    }

    for (int i = 0; i < v; ++i) {
      p.g(tab.time_for_stage(t_n, h, i), pr.xi.row(i), gv);
      for (int c = 0; c < mz; ++c) lg += gv[c] * gv[c];
    }
    p.g(t_n + h, pr.y_next, gv);
    for (int c = 0; c < mz; ++c) lg += gv[c] * gv[c];

    for (int c = 0; c < mz; ++c) {
      const double r = pr.z_next[c] - pr.zeta(v - 1, c);
      ls += r * r;
    }
  }

  const auto nk = static_cast<double>(y_samples.size());
  LossBreakdown out;
  out.lf = lf / (nk * (v + 1));
  out.lg = lg / (nk * (v + 1));
  out.ls = ls / nk;
  out.total = w_f * out.lf + w_g * out.lg + w_s * out.ls;
  if (!std::isfinite(out.total)) throw NumericalError("pinn_loss: non-finite loss");
  return out;
}

LossBreakdown pinn_loss(const SegmentModel& m, std::span<const double> y_n) {
  const std::vector<std::vector<double>> samples{{y_n.begin(), y_n.end()}};
  const std::vector<SegmentPrediction> preds{segment_predict(m, y_n)};
  return pinn_loss_terms(*m.problem, m.tableau, m.t_n, m.h, m.w_f, m.w_g, m.w_s, samples, preds);
}

LossGradient pinn_loss_gradient(const SegmentModel& m, std::span<const double> y_n) {
  require_trainable(*m.problem);
  const std::vector<std::vector<double>> samples{{y_n.begin(), y_n.end()}};
  const FlatParams flat = flatten(m);

  ad::Tape tape;
  const int base = tape.leaf_block(flat.data);
  const RecordedLoss loss = record_loss(tape, m, samples, base, flat.offsets);
  tape.backward(loss.total.id);

  LossGradient out;
  out.loss = {loss.total.value(), loss.lf.value(), loss.lg.value(), loss.ls.value()};
  out.grad.resize(flat.data.size());
  for (std::size_t i = 0; i < out.grad.size(); ++i)
    out.grad[i] = tape.adjoint(base + static_cast<int>(i));
  return out;
}

TrainResult train_segment(const SegmentModel& model, std::span<const double> y_n,
                          const TrainConfig& cfg) {
  require_trainable(*model.problem);
  if (static_cast<int>(y_n.size()) != model.problem->dim_y)
    throw std::invalid_argument("train_segment: y_n dimension mismatch");

  std::vector<std::vector<double>> samples{{y_n.begin(), y_n.end()}};
  for (const auto& s : cfg.extra_initial_states) {
    if (static_cast<int>(s.size()) != model.problem->dim_y)
      throw std::invalid_argument("train_segment: extra initial state dimension mismatch");
    samples.push_back(s);
  }

  AdamConfig adam = cfg.adam;
  if (cfg.auto_lr_schedule) {
    adam.decay_start = cfg.iterations / 5;
    adam.decay_every = std::max<long>(1, cfg.iterations * 2 / 25);
    adam.decay_factor = 0.5;
  }

  FlatParams flat = flatten(model);
  const auto P = flat.data.size();
  AdamState opt = adam_init(P);
  ad::Tape tape;
  std::vector<double> grads(P);

  TrainResult out;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<double> best = flat.data;
  long best_iter = 0;

  const long stride = cfg.history_stride > 0 ? cfg.history_stride : 1;
  for (long iter = 1; iter <= cfg.iterations; ++iter) {
    tape.rewind();
    const int base = tape.leaf_block(flat.data);
    const RecordedLoss loss = record_loss(tape, model, samples, base, flat.offsets);
    const double total = loss.total.value();

    if (!std::isfinite(total)) {
      out.aborted = true;
      out.message = "non-finite loss at iteration " + std::to_string(iter);
      break;
    }
    if (total < best_loss) {
      best_loss = total;
      best = flat.data;
      best_iter = iter;
    }
    const bool stop_early = cfg.early_stop_loss > 0.0 && total <= cfg.early_stop_loss;
    if (iter == 1 || iter % stride == 0 || iter == cfg.iterations || stop_early)
      out.history.push_back({iter, loss.lf.value(), loss.lg.value(), loss.ls.value(), total,
                             best_loss});
    if (stop_early) break;

    tape.backward(loss.total.id);
    for (std::size_t i = 0; i < P; ++i) grads[i] = tape.adjoint(base + static_cast<int>(i));
    adam_update(opt, adam, flat.data, grads);
  }

  out.final_model = unflatten(model, flat, flat.data);
  if (out.aborted) {
    out.final_loss = std::numeric_limits<double>::quiet_NaN();
  } else {
    try {
      std::vector<SegmentPrediction> preds;
      preds.reserve(samples.size());
      for (const auto& s : samples) preds.push_back(segment_predict(out.final_model, s));
      out.final_loss = pinn_loss_terms(*model.problem, model.tableau, model.t_n, model.h,
                                       model.w_f, model.w_g, model.w_s, samples, preds)
                           .total;
    } catch (const NumericalError&) {
      out.final_loss = std::numeric_limits<double>::quiet_NaN();
    }
    if (out.final_loss < best_loss) {
      best_loss = out.final_loss;
      best = flat.data;
      best_iter = cfg.iterations;
    }
  }
  out.best_model = unflatten(model, flat, best);
  out.best_loss = best_loss;
  out.best_iteration = best_iter;
  return out;
}

PinnTrajectory march(const DaeProblem& p, const Tableau& tab, double t0, double t_end, double h,
                     const TrainConfig& cfg) {
  const int steps = step_count(t0, t_end, h);

  PinnTrajectory traj;
  traj.grid.push_back(t0);
  traj.y.push_back(p.y0);
  traj.z.push_back(p.z0);

  std::vector<double> y = p.y0, z = p.z0;
  SegmentModel carry;
  bool have_carry = false;

  for (int k = 0; k < steps; ++k) {
    const double t_n = t0 + k * h;
    SegmentLog log;
    log.t_n = t_n;
    log.h = h;
    const auto tick = std::chrono::steady_clock::now();

    if (cfg.backend == TrainConfig::Backend::classical_oracle) {
      const StepResult r = radau_step(p, tab, t_n, y, z, h);
      if (!r.ok()) {
        traj.aborted = true;
        traj.diagnostic = "segment " + std::to_string(k) + ": " + r.message;
        return traj;
      }
      log.prediction.xi = r.solution.xi;
      log.prediction.zeta = r.solution.zeta;
      log.prediction.y_next = r.solution.y_next;
      log.prediction.z_next = r.solution.z_next;
      log.final_loss = log.best_loss = r.solution.residual;
      log.iterations = r.solution.newton_iters;
    } else {
      SegmentModel model;
      if (cfg.warm_start && have_carry) {
        model = carry;
        model.t_n = t_n;
      } else {
        model = build_segment_model(p, tab, t_n, h, cfg);
      }
      TrainResult tr = train_segment(model, y, cfg);
      log.prediction = segment_predict(tr.best_model, y);
      log.final_loss = tr.final_loss;
      log.best_loss = tr.best_loss;
      log.best_iteration = tr.best_iteration;
      log.iterations = tr.history.empty() ? 0 : tr.history.back().iteration;
      log.history = std::move(tr.history);
      for (std::size_t j = 0; j < tr.best_model.diff_nets.size(); ++j)
        log.networks.emplace_back("diff_" + std::to_string(j + 1), tr.best_model.diff_nets[j]);
      log.networks.emplace_back("alg_stages", tr.best_model.alg_stage_net);
      log.networks.emplace_back("alg_end", tr.best_model.alg_end_net);
      carry = tr.best_model;
      have_carry = true;
      if (tr.aborted) {
        log.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - tick).count();
        traj.segments.push_back(std::move(log));
        traj.aborted = true;
        traj.diagnostic = "segment " + std::to_string(k) + ": " + tr.message;
        return traj;
      }
    }

    log.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tick).count();
    y = log.prediction.y_next;
    z = log.prediction.z_next;
    const double t_next = t0 + (k + 1) * h;
    traj.grid.push_back(t_next);
    traj.y.push_back(y);
    traj.z.push_back(z);
    traj.segments.push_back(std::move(log));
  }
  return traj;
}

}  // namespace radau
