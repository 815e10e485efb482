#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "rkbal/signals.hpp"
#include "rkbal/systems.hpp"

namespace rkbal {

/// Samples of a simulated run on the regular partition t_i = i T / N,
/// i = 1..N. Row i of each matrix belongs to times(i).
struct Trajectory {
  Vec times;
  Mat states;
  Mat outputs;
  Mat inputs;  // input value u(t_i) at each sample

  Eigen::Index size() const { return times.size(); }
};

/// Fixed RK4 settings shared by every simulation of a pipeline run.
struct SimSettings {
  double horizon = 5.0;  // T
  int samples = 800;     // N
  double step = 1e-3;    // h
};

/// Largest step not exceeding `max_step` that divides T / N evenly.
double compatible_step(double horizon, int samples, double max_step);

/// Generic fixed-step RK4 on x' = rhs(x, u(t)), y = out(x).
///
/// Stage inputs are the right limit u(t+), u(t + h/2), u(t + h/2) and the left
/// limit u(t + h-), so a pulse spanning exactly one step contributes its full
/// area and square-wave edges on step boundaries are resolved exactly. Throws
/// std::invalid_argument when h does not divide T/N, NumericalError on a
/// non-finite state.
Trajectory integrate(const ControlSystem::Dynamics& rhs, const ControlSystem::Output& out,
                     int m, const Vec& x0, const Signal& u, const SimSettings& settings);

Trajectory integrate(const ControlSystem& sys, const Vec& x0, const Signal& u,
                     const SimSettings& settings);

/// One trajectory per input channel: x0 = 0, u = impulse(i, h, m).
std::vector<Trajectory> impulse_responses(const ControlSystem& sys, const SimSettings& settings);

/// One trajectory per state coordinate: u = 0, x0 = e_i.
std::vector<Trajectory> output_responses(const ControlSystem& sys, const SimSettings& settings);

/// CSV with header "t,x1..xn,y1..yp", 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace rkbal
