#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lieprop/algebra.hpp"
#include "lieprop/dynamics.hpp"
#include "lieprop/errors.hpp"
#include "lieprop/matrix_reps.hpp"

namespace lieprop {

/// Orbit type of the special solution. su(2) orbits are always Generic.
enum class Branch { Generic, NullCone, TimelikeDominant };

inline std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::Generic: return "generic";
    case Branch::NullCone: return "null_cone";
    default: return "timelike_dominant";
  }
}

/// Azimuth phi and the second angle (theta for su(2), rapidity chi for su(1,1)).
struct TwoAngles {
  double phi = 0.0;
  double second = 0.0;
  Branch branch = Branch::Generic;
};

namespace detail {

inline void require_transverse(const Vec3& a, double epsilon) {
  const double z = transverse_radius(a);
  if (!(z >= epsilon))
    throw DegenerateAxis("DegenerateAxis: transverse radius z = " + std::to_string(z) + " below epsilon = " +
                         std::to_string(epsilon) + " (adjoint vector aligned with axis 3)");
}

inline double wrap_to_pi(double x) { return std::remainder(x, 2.0 * std::numbers::pi); }

inline void require_orthogonal(const Rot3& w) {
  if ((w.transpose() * w - Rot3::Identity()).norm() > 1e-8)
    throw InvalidArgument("decomposition requires an orthogonal matrix");
}

}  // namespace detail

/// sin(phi) = a1/z, cos(phi) = a2/z, sin(theta) = -a3/lambda,
/// cos(theta) = z/lambda. R1(-theta) R3(-phi) takes a to lambda (0,1,0).
inline TwoAngles euler_two_angle_su2(const Vec3& a, double epsilon = 1e-9) {
  detail::require_transverse(a, epsilon);
  return {std::atan2(a(0), a(1)), std::atan2(-a(2), transverse_radius(a)), Branch::Generic};
}

/// Branch of an su(1,1) vector from the sign of its Killing norm
/// 2 (a3^2 - z^2); |a3^2 - z^2| <= epsilon |a|^2 is the null cone.
inline Branch classify_su11(const Vec3& a, double epsilon = 1e-9) {
  const double z = transverse_radius(a);
  const double gap = (a(2) - z) * (a(2) + z);
  if (std::abs(gap) <= epsilon * a.squaredNorm()) return Branch::NullCone;
  return gap < 0.0 ? Branch::Generic : Branch::TimelikeDominant;
}

/// su(1,1) angles on a given branch.
///   Generic:          sinh(chi) = a3/mu, cosh(chi) = z/mu,  mu = sqrt(z^2 - a3^2)
///   TimelikeDominant: sinh(chi) = z/mu,  cosh(chi) = a3/mu, mu = sqrt(a3^2 - z^2)
///   NullCone:         exp(chi) = a3 / reference_a3, with reference_a3 = a3(0)
inline TwoAngles su11_angles(const Vec3& a, Branch branch, double reference_a3, double epsilon = 1e-9) {
  detail::require_transverse(a, epsilon);
  const double z = transverse_radius(a);
  const double phi = std::atan2(a(0), a(1));
  if (branch != Branch::Generic && !(a(2) > 0.0))
    throw SignViolation("SignViolation: branch " + std::string(to_string(branch)) + " requires a3 > 0, got a3 = " +
                        std::to_string(a(2)));
  switch (branch) {
    case Branch::Generic: {
      const double mu = su11_radius(a);
      return {phi, std::asinh(a(2) / mu), branch};
    }
    case Branch::TimelikeDominant: {
      const double mu = su11_radius(a);
      return {phi, std::asinh(z / mu), branch};
    }
    default:
      if (!(reference_a3 > 0.0)) throw SignViolation("SignViolation: null-cone reference a3(0) must be positive");
      return {phi, std::log(a(2) / reference_a3), branch};
  }
}

/// Angles of a single su(1,1) vector; on the null cone the vector is its own
/// reference, so chi = 0.
inline TwoAngles euler_two_angle_su11(const Vec3& a, double epsilon = 1e-9) {
  return su11_angles(a, classify_su11(a, epsilon), a(2), epsilon);
}

/// alpha = (a1 h1 + a2 h2) / z^2, identical for both algebras.
inline double alpha(const Vec3& h, const Vec3& a, double epsilon = 1e-9) {
  detail::require_transverse(a, epsilon);
  const double z2 = a(0) * a(0) + a(1) * a(1);
  return (a(0) * h(0) + a(1) * h(1)) / z2;
}

/// tau(t_i) = -int_0^{t_i} alpha ds on a uniform grid: composite Simpson up to
/// the last even node, trapezoid on a trailing odd interval.
inline std::vector<double> effective_time(std::span<const double> alpha_samples, double dt) {
  std::vector<double> tau(alpha_samples.size(), 0.0);
  // Neumaier-compensated running sum of the Simpson panels.
  double even_integral = 0.0;
  double carry = 0.0;
  for (std::size_t i = 1; i < alpha_samples.size(); ++i) {
    if (i % 2 == 0) {
      const double panel = dt / 3.0 * (alpha_samples[i - 2] + 4.0 * alpha_samples[i - 1] + alpha_samples[i]);
      const double sum = even_integral + panel;
      carry += std::abs(even_integral) >= std::abs(panel) ? (even_integral - sum) + panel : (panel - sum) + even_integral;
      even_integral = sum;
      tau[i] = -(even_integral + carry);
    } else {
      tau[i] = -((even_integral + carry) + 0.5 * dt * (alpha_samples[i - 1] + alpha_samples[i]));
    }
  }
  return tau;
}

/// Per-grid-point two-angle factorization of a trajectory.
struct FactorizationRecord {
  AlgebraKind kind = AlgebraKind::SU2;
  Branch branch = Branch::Generic;
  TimeGrid grid;
  Vec3 a0 = Vec3::Zero();
  /// a3(0); the null-cone rapidity is measured relative to it.
  double reference_a3 = 0.0;
  std::vector<double> phi;
  /// theta (su2) or chi (su11).
  std::vector<double> second;
  std::vector<double> alpha;
  std::vector<double> tau;

  std::size_t size() const { return phi.size(); }
};

/// Builds the record along a trajectory. phi is unwrapped so that
/// |phi_{i+1} - phi_i| <= pi. The su(1,1) branch is fixed by a(0).
inline FactorizationRecord factorize(const Trajectory& traj) {
  const double eps = traj.epsilon;
  if (traj.first_degenerate) {
    const std::size_t i = *traj.first_degenerate;
    throw DegenerateAxis("DegenerateAxis: z(t) = " + std::to_string(transverse_radius(traj.a[i])) +
                         " < epsilon at t = " + std::to_string(traj.grid.time(i)));
  }
  FactorizationRecord rec;
  rec.kind = traj.kind;
  rec.grid = traj.grid;
  rec.a0 = traj.a.front();
  rec.reference_a3 = rec.a0(2);
  rec.branch = traj.kind == AlgebraKind::SU2 ? Branch::Generic : classify_su11(rec.a0, eps);

  const std::size_t n = traj.a.size();
  rec.phi.resize(n);
  rec.second.resize(n);
  rec.alpha.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& a = traj.a[i];
    const TwoAngles ang = traj.kind == AlgebraKind::SU2 ? euler_two_angle_su2(a, eps)
                                                        : su11_angles(a, rec.branch, rec.reference_a3, eps);
    rec.phi[i] = i == 0 ? ang.phi : rec.phi[i - 1] + detail::wrap_to_pi(ang.phi - rec.phi[i - 1]);
    rec.second[i] = ang.second;
    rec.alpha[i] = alpha(traj.h[i], a, eps);
  }
  rec.tau = effective_time(rec.alpha, traj.grid.dt);
  return rec;
}

/// Coefficients of K(t) = i V' V^* at each grid point, with a' = h x a taken
/// analytically.
///   su2:        k = ( a2 a3'/z^2, -a1 a3'/z^2, (a1 a2' - a2 a1')/z^2 )
///   su11:       k = ( a2 a3'/z^2, -a1 a3'/z^2, (a2 a1' - a1 a2')/z^2 )
///   su11 null:  same with z^2 replaced by a3^2
inline std::vector<Vec3> k_coefficients(const FactorizationRecord& rec, const Trajectory& traj) {
  std::vector<Vec3> k(traj.a.size());
  for (std::size_t i = 0; i < traj.a.size(); ++i) {
    const Vec3& a = traj.a[i];
    detail::require_transverse(a, traj.epsilon);
    const Vec3 adot = bracket(traj.kind, traj.h[i], a);
    if (rec.kind == AlgebraKind::SU2) {
      const double z2 = a(0) * a(0) + a(1) * a(1);
      k[i] = Vec3(a(1) * adot(2), -a(0) * adot(2), a(0) * adot(1) - a(1) * adot(0)) / z2;
    } else {
      const double d = rec.branch == Branch::NullCone ? a(2) * a(2) : a(0) * a(0) + a(1) * a(1);
      k[i] = Vec3(a(1) * adot(2), -a(0) * adot(2), a(1) * adot(0) - a(0) * adot(1)) / d;
    }
  }
  return k;
}

/// max_i |k_i - (h_i - alpha_i a_i)|_inf.
inline double proposition_residual(const FactorizationRecord& rec, const Trajectory& traj,
                                   const std::vector<Vec3>& k) {
  double worst = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Vec3 r = k[i] - (traj.h[i] - rec.alpha[i] * traj.a[i]);
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

/// Adjoint matrix W(t_i) of the two-angle factorization, W(t_i) a(0) = a(t_i).
///   su2:  R3(phi) R1(theta) R1(-theta0) R3(-phi0)
///   su11: R3(phi) P1(chi) P1(-chi0) R3(-phi0)
inline Rot3 reconstruction_matrix(const FactorizationRecord& rec, std::size_t i) {
  return adjoint_rotation(rec.kind, 3, rec.phi[i]) * adjoint_rotation(rec.kind, 1, rec.second[i]) *
         adjoint_rotation(rec.kind, 1, -rec.second[0]) * adjoint_rotation(rec.kind, 3, -rec.phi[0]);
}

/// Image of a(t) under the inverse of the azimuth/second-angle rotations.
///   su2: lambda (0,1,0); su11 generic: mu (0,1,0); timelike: mu (0,0,1);
///   null cone: a3(0) (0,1,1).
inline Vec3 reference_vector(const FactorizationRecord& rec) {
  const Vec3& a = rec.a0;
  if (rec.kind == AlgebraKind::SU2) return {0.0, su2_radius(a), 0.0};
  switch (rec.branch) {
    case Branch::Generic: return {0.0, su11_radius(a), 0.0};
    case Branch::TimelikeDominant: return {0.0, 0.0, su11_radius(a)};
    default: return {0.0, rec.reference_a3, rec.reference_a3};
  }
}

struct WeiNormanAngles {
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
};

/// W = R1(q1) R2(q2) R3(q3), q2 in [-pi/2, pi/2].
inline WeiNormanAngles wei_norman_angles(const Rot3& w) {
  detail::require_orthogonal(w);
  const double cos_q2 = std::hypot(w(0, 0), w(0, 1));
  if (cos_q2 < 1e-8) throw GimbalLock("GimbalLock: |cos q2| < 1e-8, q1 and q3 are not separately determined");
  return {std::atan2(w(1, 2), w(2, 2)), std::atan2(-w(0, 2), cos_q2), std::atan2(w(0, 1), w(0, 0))};
}

struct EulerAngles {
  double psi = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

enum class GimbalPolicy {
  Throw,
  /// At sin(theta) = 0 set psi = 0 and fold the combined angle into phi.
  Canonical
};

/// W = R3(psi) R1(theta) R3(phi), theta in [0, pi].
inline EulerAngles three_angle_euler(const Rot3& w, GimbalPolicy policy = GimbalPolicy::Throw) {
  detail::require_orthogonal(w);
  const double sin_theta = std::hypot(w(2, 0), w(2, 1));
  const double theta = std::atan2(sin_theta, w(2, 2));
  if (sin_theta < 1e-8) {
    if (policy == GimbalPolicy::Throw)
      throw GimbalLock("GimbalLock: |sin theta| < 1e-8, psi and phi are not separately determined");
    return {0.0, theta, std::atan2(w(0, 1), w(0, 0))};
  }
  return {std::atan2(w(0, 2), w(1, 2)), theta, std::atan2(w(2, 0), -w(2, 1))};
}

struct AxisAngle {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
};

/// Inverse of axis_angle_rotation: angle in [0, pi]; axis (0,0,1) at angle 0;
/// at angle pi the sign is chosen so the largest axis component is positive.
inline AxisAngle magnus_axis_angle(const Rot3& w) {
  detail::require_orthogonal(w);
  const Vec3 v(0.5 * (w(2, 1) - w(1, 2)), 0.5 * (w(0, 2) - w(2, 0)), 0.5 * (w(1, 0) - w(0, 1)));
  const double cos_phi = std::clamp(0.5 * (w.trace() - 1.0), -1.0, 1.0);
  const double sin_phi = v.norm();
  const double angle = std::atan2(sin_phi, cos_phi);
  if (sin_phi < 1e-15 && cos_phi > 0.0) return {Vec3::UnitZ(), 0.0};
  if (cos_phi >= 0.0) return {v / sin_phi, angle};

  // Large angles: n n^T = (sym(W) - cos I) / (1 - cos) is well conditioned.
  const Rot3 outer = (0.5 * (w + w.transpose()) - cos_phi * Rot3::Identity()) / (1.0 - cos_phi);
  Eigen::Index col = 0;
  outer.diagonal().maxCoeff(&col);
  Vec3 n = outer.col(col) / std::sqrt(outer(col, col));
  n.normalize();
  if (sin_phi > 1e-12) {
    if (n.dot(v) < 0.0) n = -n;
  } else {
    Eigen::Index big = 0;
    n.cwiseAbs().maxCoeff(&big);
    if (n(big) < 0.0) n = -n;
  }
  return {n, angle};
}

}  // namespace lieprop
