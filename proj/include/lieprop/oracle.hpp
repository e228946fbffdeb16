#pragma once

#include <algorithm>
#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "lieprop/algebra.hpp"
#include "lieprop/dynamics.hpp"
#include "lieprop/errors.hpp"
#include "lieprop/matrix_reps.hpp"
#include "lieprop/ode.hpp"
#include "lieprop/propagator.hpp"

namespace lieprop {

/// Brute-force solution of i dU/dt = H(t) U, U(0) = I, by RK4 with `substeps`
/// fine steps per grid interval. No renormalization is applied.
inline std::vector<Mat2C> propagate_direct(AlgebraKind kind, const CoefficientField& field, const TimeGrid& grid,
                                           std::size_t substeps = 1) {
  using namespace std::complex_literals;
  if (substeps == 0) throw InvalidArgument("substeps must be positive");
  const Mat2C gens[3] = {generator_2x2(kind, 1), generator_2x2(kind, 2), generator_2x2(kind, 3)};
  const auto rhs = [&](double t, const Mat2C& u, bool from_left) -> Mat2C {
    const Vec3 h = evaluate_field(field, t, from_left);
    const Mat2C ham = h(0) * gens[0] + h(1) * gens[1] + h(2) * gens[2];
    return -1i * ham * u;
  };
  const double fine = grid.dt / static_cast<double>(substeps);
  std::vector<Mat2C> out;
  out.reserve(grid.size());
  Mat2C u = Mat2C::Identity();
  out.push_back(u);
  for (std::size_t i = 0; i < grid.steps; ++i) {
    const double t0 = grid.time(i);
    for (std::size_t s = 0; s < substeps; ++s) u = rk4_step(rhs, t0 + static_cast<double>(s) * fine, u, fine);
    if (!u.allFinite()) throw NonFinite("direct propagation became non-finite at t = " + std::to_string(grid.time(i + 1)));
    out.push_back(u);
  }
  return out;
}

/// Distances between a constructed propagator series and the direct oracle.
struct ComparisonReport {
  double max_frobenius_U = 0.0;
  double max_frobenius_a = 0.0;
  double max_schrodinger_residual = 0.0;
  double max_norm_drift = 0.0;
  double t_worst_U = 0.0;
  double t_worst_a = 0.0;
  double t_worst_schrodinger = 0.0;
  double t_worst_norm = 0.0;
};

/// Elementwise comparison on identical grids. The adjoint-vector metric
/// compares a(t) with the image of a(0) under the oracle's U(t); the
/// Schrodinger residual is measured on the constructed series. A direct series
/// that has drifted off the group is measured, not rejected.
inline ComparisonReport compare(const PropagatorSeries& constructed, const std::vector<Mat2C>& direct,
                                const Trajectory& traj) {
  const std::size_t n = constructed.size();
  if (direct.size() != n || traj.a.size() != n || constructed.V.size() != n || !(traj.grid == constructed.grid))
    throw InvalidArgument("compare: constructed, direct and trajectory grids differ");
  using namespace std::complex_literals;
  const TimeGrid& grid = constructed.grid;
  ComparisonReport r;
  const double n0 = traj.killing_norm(0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.time(i);
    const double du = (constructed.U[i] - direct[i]).norm();
    if (du > r.max_frobenius_U) r.max_frobenius_U = du, r.t_worst_U = t;

    const Vec3 a_direct = adjoint_action(constructed.kind, direct[i], false) * traj.a.front();
    const double da = (a_direct - traj.a[i]).norm();
    if (da > r.max_frobenius_a) r.max_frobenius_a = da, r.t_worst_a = t;

    const double dn = std::abs(traj.killing_norm(i) - n0);
    if (dn > r.max_norm_drift) r.max_norm_drift = dn, r.t_worst_norm = t;

    if (i > 0 && i + 1 < n) {
      const Mat2C dudt = (constructed.U[i + 1] - constructed.U[i - 1]) / (2.0 * grid.dt);
      const Mat2C res = 1i * dudt * constructed.U[i].inverse() - algebra_element(constructed.kind, traj.h[i]);
      const double ds = res.norm();
      if (ds > r.max_schrodinger_residual) r.max_schrodinger_residual = ds, r.t_worst_schrodinger = t;
    }
  }
  return r;
}

inline nlohmann::json to_json(const ComparisonReport& r) {
  return {{"max_frobenius_U", r.max_frobenius_U},
          {"max_frobenius_a", r.max_frobenius_a},
          {"max_schrodinger_residual", r.max_schrodinger_residual},
          {"max_norm_drift", r.max_norm_drift},
          {"worst_times",
           {{"U", r.t_worst_U}, {"a", r.t_worst_a}, {"schrodinger", r.t_worst_schrodinger}, {"norm", r.t_worst_norm}}}};
}

}  // namespace lieprop
