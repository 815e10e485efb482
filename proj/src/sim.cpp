#include "rkbal/sim.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace rkbal {

namespace {

int substeps_per_sample(const SimSettings& s) {
  if (!(s.horizon > 0.0)) throw std::invalid_argument("integrate: horizon must be positive");
  if (s.samples < 2) throw std::invalid_argument("integrate: need at least 2 samples");
  if (!(s.step > 0.0)) throw std::invalid_argument("integrate: step must be positive");
  const double ratio = (s.horizon / s.samples) / s.step;
  const double k = std::round(ratio);
  if (k < 1.0 || std::abs(ratio - k) > 1e-9 * ratio) {
    std::ostringstream os;
    os << "integrate: step " << s.step << " does not divide the sample spacing "
       << s.horizon / s.samples;
    throw std::invalid_argument(os.str());
  }
  return static_cast<int>(k);
}

}  // namespace

double compatible_step(double horizon, int samples, double max_step) {
  if (!(horizon > 0.0) || samples < 1 || !(max_step > 0.0)) {
    throw std::invalid_argument("compatible_step: non-positive argument");
  }
  const double spacing = horizon / samples;
  const double k = std::max(1.0, std::ceil(spacing / max_step - 1e-9));
  return spacing / k;
}

Trajectory integrate(const ControlSystem::Dynamics& rhs, const ControlSystem::Output& out,
                     int m, const Vec& x0, const Signal& u, const SimSettings& settings) {
  const int k = substeps_per_sample(settings);
  const int N = settings.samples;
  const double spacing = settings.horizon / N;
  const double h = spacing / k;

  Vec x = x0;
  const Vec y0 = out(x0);
  Trajectory traj;
  traj.times.resize(N);
  traj.states.resize(N, x0.size());
  traj.outputs.resize(N, y0.size());
  traj.inputs.resize(N, m);

  long step_index = 0;
  for (int i = 1; i <= N; ++i) {
    for (int s = 0; s < k; ++s, ++step_index) {
      const double t = static_cast<double>(step_index) * h;
      const Vec u0 = u.value_right(t, m);
      const Vec um = u.value(t + 0.5 * h, m);
      const Vec u1 = u.value_left(t + h, m);
      const Vec k1 = rhs(x, u0);
      const Vec k2 = rhs(x + 0.5 * h * k1, um);
      const Vec k3 = rhs(x + 0.5 * h * k2, um);
      const Vec k4 = rhs(x + h * k3, u1);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!x.allFinite()) {
        std::ostringstream os;
        os << "integrate: state diverged (non-finite) at t = " << t + h;
        throw NumericalError(os.str());
      }
    }
    const double ti = i * spacing;
    traj.times(i - 1) = ti;
    traj.states.row(i - 1) = x.transpose();
    traj.outputs.row(i - 1) = out(x).transpose();
    traj.inputs.row(i - 1) = u.value(ti, m).transpose();
  }
  return traj;
}

Trajectory integrate(const ControlSystem& sys, const Vec& x0, const Signal& u,
                     const SimSettings& settings) {
  if (x0.size() != sys.n) throw std::invalid_argument("integrate: x0 has wrong dimension");
  return integrate(sys.dynamics, sys.output, sys.m, x0, u, settings);
}

std::vector<Trajectory> impulse_responses(const ControlSystem& sys, const SimSettings& settings) {
  const double h = (settings.horizon / settings.samples) / substeps_per_sample(settings);
  std::vector<Trajectory> out;
  out.reserve(sys.m);
  for (int i = 1; i <= sys.m; ++i) {
    out.push_back(integrate(sys, Vec::Zero(sys.n), impulse(i, h, sys.m), settings));
  }
  return out;
}

std::vector<Trajectory> output_responses(const ControlSystem& sys, const SimSettings& settings) {
  std::vector<Trajectory> out;
  out.reserve(sys.n);
  for (int i = 0; i < sys.n; ++i) {
    out.push_back(integrate(sys, Vec::Unit(sys.n, i), zero_signal(), settings));
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const auto n = traj.states.cols();
  const auto p = traj.outputs.cols();
  os << "t";
  for (Eigen::Index j = 0; j < n; ++j) os << ",x" << j + 1;
  for (Eigen::Index j = 0; j < p; ++j) os << ",y" << j + 1;
  os << "\n";
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < traj.size(); ++i) {
    os << traj.times(i);
    for (Eigen::Index j = 0; j < n; ++j) os << "," << traj.states(i, j);
    for (Eigen::Index j = 0; j < p; ++j) os << "," << traj.outputs(i, j);
    os << "\n";
  }
  os.precision(old);
}

}  // namespace rkbal
