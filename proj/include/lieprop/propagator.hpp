#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "lieprop/algebra.hpp"
#include "lieprop/dynamics.hpp"
#include "lieprop/errors.hpp"
#include "lieprop/factorization.hpp"
#include "lieprop/matrix_reps.hpp"

namespace lieprop {

/// V(t_i) and U(t_i) on the factorization grid.
struct PropagatorSeries {
  AlgebraKind kind = AlgebraKind::SU2;
  TimeGrid grid;
  std::vector<Mat2C> V;
  std::vector<Mat2C> U;

  std::size_t size() const { return U.size(); }
};

/// Two-angle V(t_i) in the 2x2 representation.
///   su2:  e^{i phi S3} e^{i theta S1} e^{-i theta0 S1} e^{-i phi0 S3}
///   su11: e^{-i phi S3} e^{-i chi S1} e^{i chi0 S1} e^{i phi0 S3}
inline Mat2C build_V(const FactorizationRecord& rec, std::size_t i) {
  const AlgebraKind kind = rec.kind;
  const double sign = kind == AlgebraKind::SU2 ? 1.0 : -1.0;
  return exp_generator(kind, 3, sign * rec.phi[i]) * exp_generator(kind, 1, sign * rec.second[i]) *
         exp_generator(kind, 1, -sign * rec.second[0]) * exp_generator(kind, 3, -sign * rec.phi[0]);
}

/// U = V exp(i tau sum_j a_j(0) S_j).
inline Mat2C build_U(AlgebraKind kind, const Mat2C& v, double tau, const Vec3& a0) {
  return v * exp_algebra_element(kind, a0, tau);
}

inline PropagatorSeries build_propagator(const FactorizationRecord& rec) {
  PropagatorSeries series;
  series.kind = rec.kind;
  series.grid = rec.grid;
  series.V.reserve(rec.size());
  series.U.reserve(rec.size());
  for (std::size_t i = 0; i < rec.size(); ++i) {
    series.V.push_back(build_V(rec, i));
    series.U.push_back(build_U(rec.kind, series.V.back(), rec.tau[i], rec.a0));
  }
  return series;
}

/// max_i |i (dU/dt) U^{-1} - H(t_i)|_F with central differences on the stored
/// series (interior points only).
inline double schrodinger_residual(const std::vector<Mat2C>& u, const TimeGrid& grid, AlgebraKind kind,
                                   const CoefficientField& field) {
  using namespace std::complex_literals;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    const Mat2C du = (u[i + 1] - u[i - 1]) / (2.0 * grid.dt);
    const Mat2C lhs = 1i * du * u[i].inverse();
    const Mat2C h = algebra_element(kind, evaluate_field(field, grid.time(i)));
    worst = std::max(worst, (lhs - h).norm());
  }
  return worst;
}

/// max_i |U^dagger G U - G|_F with G = I (su2) or eta (su11).
inline double group_defect(const std::vector<Mat2C>& u, AlgebraKind kind) {
  const Mat2C g = kind == AlgebraKind::SU2 ? Mat2C(Mat2C::Identity()) : eta_metric();
  double worst = 0.0;
  for (const auto& m : u) worst = std::max(worst, (m.adjoint() * g * m - g).norm());
  return worst;
}

/// Constants (A, B, C) of the closed-form general solution of x' = h x x.
/// In the su(2) form B >= 0 and C in [0, 2 pi).
struct GeneralSolutionConstants {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};

namespace detail {

inline Vec3 azimuthal_basis(const Vec3& a) { return {a(1), -a(0), 0.0}; }

/// (a3 a1, a3 a2, s z^2), s = -1 for su(2) and +1 for su(1,1).
inline Vec3 polar_basis(const Vec3& a, double s) {
  const double z2 = a(0) * a(0) + a(1) * a(1);
  return {a(2) * a(0), a(2) * a(1), s * z2};
}

inline Vec3 null_basis(const Vec3& a) { return {-a(0), -a(1), a(2)}; }

inline void require_branch(const Vec3& a, Branch branch, double epsilon) {
  if (branch == Branch::TimelikeDominant)
    throw BranchMismatch("general solution has no closed form on the timelike-dominant branch");
  const double z = transverse_radius(a);
  const double gap = (a(2) - z) * (a(2) + z);
  const double scale = a.squaredNorm();
  if (branch == Branch::Generic && !(gap < -epsilon * scale))
    throw BranchMismatch("generic su11 solution requires a1^2 + a2^2 > a3^2");
  if (branch == Branch::NullCone && std::abs(gap) > 1e-6 * scale)
    throw BranchMismatch("null-cone su11 solution requires a1^2 + a2^2 = a3^2");
}

}  // namespace detail

/// x(t) = A a - (lambda B / z) cos(lambda tau + C) (a2, -a1, 0)
///          + (B / z) sin(lambda tau + C) (a3 a1, a3 a2, -z^2)
/// with a, z, lambda evaluated at t.
inline Vec3 general_solution_su2(const Vec3& a, double tau, const GeneralSolutionConstants& k,
                                 double epsilon = 1e-9) {
  detail::require_transverse(a, epsilon);
  const double z = transverse_radius(a);
  const double lambda = su2_radius(a);
  const double phase = lambda * tau + k.C;
  return k.A * a - (lambda * k.B / z) * std::cos(phase) * detail::azimuthal_basis(a) +
         (k.B / z) * std::sin(phase) * detail::polar_basis(a, -1.0);
}

/// Generic (z^2 > a3^2):
///   x = A a + (mu B / z) cosh(mu tau + C) (a2, -a1, 0)
///           + (B / z) sinh(mu tau + C) (a3 a1, a3 a2, z^2)
/// Null cone (z = a3):
///   x = (A + B tau + C tau^2) a + (a3 / z^2)(B + 2 C tau) (a2, -a1, 0)
///       + (C / z^2) (-a1, -a2, a3)
inline Vec3 general_solution_su11(const Vec3& a, double tau, const GeneralSolutionConstants& k, Branch branch,
                                  double epsilon = 1e-9) {
  detail::require_transverse(a, epsilon);
  detail::require_branch(a, branch, epsilon);
  const double z = transverse_radius(a);
  if (branch == Branch::Generic) {
    const double mu = su11_radius(a);
    const double phase = mu * tau + k.C;
    return k.A * a + (mu * k.B / z) * std::cosh(phase) * detail::azimuthal_basis(a) +
           (k.B / z) * std::sinh(phase) * detail::polar_basis(a, 1.0);
  }
  const double z2 = z * z;
  return (k.A + k.B * tau + k.C * tau * tau) * a + (a(2) / z2) * (k.B + 2.0 * k.C * tau) * detail::azimuthal_basis(a) +
         (k.C / z2) * detail::null_basis(a);
}

/// Inverts the general solution at t = 0 (tau = 0) for x(0) = x0.
///
/// su(1,1) generic constants exist only when the azimuthal coefficient
/// dominates, |B cosh C| > |B sinh C|; other x0 raise InvalidArgument.
inline GeneralSolutionConstants fit_constants(AlgebraKind kind, const Vec3& a0, const Vec3& x0,
                                              Branch branch = Branch::Generic, double epsilon = 1e-9) {
  detail::require_transverse(a0, epsilon);
  const double z = transverse_radius(a0);
  const Vec3 u = detail::azimuthal_basis(a0);

  if (kind == AlgebraKind::SU2) {
    // a, u and w are mutually orthogonal: project.
    const Vec3 w = detail::polar_basis(a0, -1.0);
    const double lambda = su2_radius(a0);
    const double p = x0.dot(u) / u.squaredNorm();
    const double q = x0.dot(w) / w.squaredNorm();
    const double b_cos = -p * z / lambda;
    const double b_sin = q * z;
    GeneralSolutionConstants out{x0.dot(a0) / a0.squaredNorm(), std::hypot(b_cos, b_sin), 0.0};
    if (out.B > 0.0) {
      out.C = std::atan2(b_sin, b_cos);
      if (out.C < 0.0) out.C += 2.0 * std::numbers::pi;
      if (out.C >= 2.0 * std::numbers::pi) out.C = 0.0;
    }
    return out;
  }

  detail::require_branch(a0, branch, epsilon);
  Eigen::Matrix3d basis;
  basis.col(0) = a0;
  basis.col(1) = u;
  basis.col(2) = branch == Branch::Generic ? detail::polar_basis(a0, 1.0) : detail::null_basis(a0);
  const Vec3 coeff = basis.fullPivLu().solve(x0);
  if (branch == Branch::NullCone) {
    const double z2 = z * z;
    return {coeff(0), coeff(1) * z2 / a0(2), coeff(2) * z2};
  }
  const double mu = su11_radius(a0);
  const double b_cosh = coeff(1) * z / mu;
  const double b_sinh = coeff(2) * z;
  if (b_cosh == 0.0 && b_sinh == 0.0) return {coeff(0), 0.0, 0.0};
  if (!(std::abs(b_sinh) < std::abs(b_cosh)))
    throw InvalidArgument("x0 lies outside the span reachable with real (B, C) in the cosh/sinh form");
  return {coeff(0), std::copysign(std::sqrt((b_cosh - b_sinh) * (b_cosh + b_sinh)), b_cosh),
          std::atanh(b_sinh / b_cosh)};
}

}  // namespace lieprop
