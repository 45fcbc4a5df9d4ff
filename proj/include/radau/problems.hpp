#pragma once

#include "radau/dae.hpp"

namespace radau {

// Index-2 Hessenberg benchmark on [0,1]:
//   y1' = (y3 y4 + y1 y2) z
//   y2' = -y3 y4^2 y2^2 z
//   y3' = 2 y3 y4 y1 y2
//   y4' = -y3 y4 y2^2
//   0   = y1 y4 - y2 y3
// with y0 = (1,1,1,1), z0 = 1 and exact solution
// (e^{2t}, e^{-t}, e^{2t}, e^{-t}; e^{t}).
DaeProblem hessenberg_problem();

// Index-2 pendulum benchmark on [0,1]:
//   y1' = y3,  y2' = y4,  y3' = -y1 z,  m y4' = -y2 z - lambda,
//   0 = y1 y3 + y2 y4
// with y0 = (1,0,0,1), z0 = 1. No closed-form solution; reduced_z carries
// the hidden constraint solved for z.
DaeProblem pendulum_problem(double mass = 1.0, double lambda = 1.0);

// Benchmark lookup by CLI name ("hessenberg" | "pendulum"); params supplies
// m / lambda overrides for the pendulum. Throws std::invalid_argument for
// unknown names, listing the valid ones.
DaeProblem make_problem(const std::string& name, const std::map<std::string, double>& params = {});

// The pendulum with z eliminated through reduced_z; a plain ODE (dim_z = 0)
// used as the independent reference route.
DaeProblem index_reduced_ode(const DaeProblem& p);

}  // namespace radau
