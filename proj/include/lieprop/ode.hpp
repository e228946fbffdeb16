#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "lieprop/errors.hpp"

namespace lieprop {

/// Uniform time grid t_i = i * dt, i = 0..steps.
struct TimeGrid {
  double dt = 0.0;
  std::size_t steps = 0;

  double time(std::size_t i) const { return static_cast<double>(i) * dt; }
  double end() const { return time(steps); }
  std::size_t size() const { return steps + 1; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Grid covering [0, t_end]. t_end must be an integer multiple of dt up to a
/// relative 1e-9.
inline TimeGrid make_grid(double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive and finite");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be positive and finite");
  const double ratio = t_end / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
    throw InvalidArgument("t_end = " + std::to_string(t_end) + " is not a multiple of dt = " + std::to_string(dt));
  return TimeGrid{dt, static_cast<std::size_t>(steps)};
}

/// Number of fine steps per coarse step, when fine_dt divides coarse_dt.
inline std::size_t substeps_for(double coarse_dt, double fine_dt) {
  if (!(fine_dt > 0.0) || fine_dt > coarse_dt * (1.0 + 1e-12))
    throw InvalidArgument("oracle step must be positive and not larger than the construction step");
  const double ratio = coarse_dt / fine_dt;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * ratio) throw InvalidArgument("oracle step must divide the construction step");
  return static_cast<std::size_t>(n);
}

/// One classical Runge-Kutta step of y' = f(t, y).
///
/// `rhs(t, y, from_left)` evaluates the right-hand side; the final stage asks
/// for the left limit at t + dt so that fields with jumps on grid points are
/// integrated segment by segment.
template <typename State, typename Rhs>
State rk4_step(const Rhs& rhs, double t, const State& y, double dt) {
  const State k1 = rhs(t, y, false);
  const State k2 = rhs(t + 0.5 * dt, State(y + (0.5 * dt) * k1), false);
  const State k3 = rhs(t + 0.5 * dt, State(y + (0.5 * dt) * k2), false);
  const State k4 = rhs(t + dt, State(y + dt * k3), true);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace lieprop
