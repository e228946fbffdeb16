#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "lieprop/algebra.hpp"
#include "lieprop/errors.hpp"

namespace lieprop {

using Complex = std::complex<double>;
using Mat2C = Eigen::Matrix2cd;
using Rot3 = Eigen::Matrix3d;

namespace pauli {

inline Mat2C sigma(int j) {
  using namespace std::complex_literals;
  Mat2C m;
  switch (j) {
    case 1: m << 0.0, 1.0, 1.0, 0.0; break;
    case 2: m << 0.0, -1i, 1i, 0.0; break;
    case 3: m << 1.0, 0.0, 0.0, -1.0; break;
    default: throw InvalidArgument("Pauli index must be 1, 2 or 3, got " + std::to_string(j));
  }
  return m;
}

}  // namespace pauli

namespace detail {

inline void check_index(int j, const char* what) {
  if (j < 1 || j > 3)
    throw InvalidArgument(std::string(what) + " index must be 1, 2 or 3, got " + std::to_string(j));
}

}  // namespace detail

/// Generator S_j (j = 1..3) of the faithful 2x2 representation.
///   su(2):   S_j = sigma_j / 2
///   su(1,1): S_1 = -(i/2) sigma_1, S_2 = (i/2) sigma_2, S_3 = sigma_3 / 2
/// The su(1,1) generators preserve eta = diag(1, -1).
inline Mat2C generator_2x2(AlgebraKind kind, int j) {
  using namespace std::complex_literals;
  detail::check_index(j, "generator");
  const Mat2C s = pauli::sigma(j);
  if (kind == AlgebraKind::SU2 || j == 3) return 0.5 * s;
  if (j == 1) return -0.5i * s;
  return 0.5i * s;
}

/// sum_j x_j S_j.
inline Mat2C algebra_element(AlgebraKind kind, const Vec3& x) {
  Mat2C out = Mat2C::Zero();
  for (int j = 1; j <= 3; ++j) out += x(j - 1) * generator_2x2(kind, j);
  return out;
}

/// Pseudo-unitarity metric preserved by the su(1,1) group elements.
inline Mat2C eta_metric() {
  Mat2C m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

/// exp(i c S_j) in closed form. Callers pass a negative c for exp(-i |c| S_j).
inline Mat2C exp_generator(AlgebraKind kind, int j, double c) {
  using namespace std::complex_literals;
  detail::check_index(j, "generator");
  const double h = 0.5 * c;
  const Mat2C s = pauli::sigma(j);
  const Mat2C id = Mat2C::Identity();
  if (kind == AlgebraKind::SU2 || j == 3) return std::cos(h) * id + 1i * std::sin(h) * s;
  // i c S_1 = (c/2) sigma_1 and i c S_2 = -(c/2) sigma_2.
  if (j == 1) return std::cosh(h) * id + std::sinh(h) * s;
  return std::cosh(h) * id - std::sinh(h) * s;
}

/// exp(M) for a traceless 2x2 matrix via M^2 = -det(M) I:
///   exp(M) = cosh(r) I + sinh(r)/r M,  r^2 = -det(M).
/// Small |r| switches to the Taylor expansion of both coefficients.
inline Mat2C exp_traceless(const Mat2C& m) {
  const Complex r2 = -m.determinant();
  const Complex r = std::sqrt(r2);
  Complex c0;
  Complex c1;
  if (std::abs(r) < 1e-6) {
    c0 = 1.0 + r2 / 2.0 + r2 * r2 / 24.0;
    c1 = 1.0 + r2 / 6.0 + r2 * r2 / 120.0;
  } else {
    c0 = std::cosh(r);
    c1 = std::sinh(r) / r;
  }
  return c0 * Mat2C::Identity() + c1 * m;
}

/// exp(i s sum_j x_j S_j).
inline Mat2C exp_algebra_element(AlgebraKind kind, const Vec3& x, double s) {
  using namespace std::complex_literals;
  return exp_traceless(1i * s * algebra_element(kind, x));
}

/// Adjoint matrices of the one-parameter subgroups:
///   R1(q) = [[1,0,0],[0,c,s],[0,-s,c]]
///   R2(q) = [[c,0,-s],[0,1,0],[s,0,c]]
///   R3(q) = [[c,s,0],[-s,c,0],[0,0,1]]
/// and for su(1,1) the boost P1(chi) = [[1,0,0],[0,ch,sh],[0,sh,ch]] replaces
/// R1. Axis 2 has no counterpart in the su(1,1) signature used here.
inline Rot3 adjoint_rotation(AlgebraKind kind, int axis, double angle) {
  detail::check_index(axis, "axis");
  Rot3 r = Rot3::Identity();
  if (kind == AlgebraKind::SU11) {
    if (axis == 2) throw InvalidArgument("su11 has no adjoint rotation about axis 2");
    if (axis == 1) {
      const double ch = std::cosh(angle);
      const double sh = std::sinh(angle);
      r(1, 1) = ch;
      r(1, 2) = sh;
      r(2, 1) = sh;
      r(2, 2) = ch;
      return r;
    }
  }
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  switch (axis) {
    case 1:
      r(1, 1) = c; r(1, 2) = s;
      r(2, 1) = -s; r(2, 2) = c;
      break;
    case 2:
      r(0, 0) = c; r(0, 2) = -s;
      r(2, 0) = s; r(2, 2) = c;
      break;
    default:
      r(0, 0) = c; r(0, 1) = s;
      r(1, 0) = -s; r(1, 1) = c;
      break;
  }
  return r;
}

/// Rodrigues rotation R(n, phi) u = cos(phi) u + sin(phi) n x u
///                                 + (1 - cos(phi)) (n.u) n.
/// Equals adjoint_action of exp(-i (phi/2) n.sigma).
inline Rot3 axis_angle_rotation(const Vec3& n, double phi) {
  if (std::abs(n.norm() - 1.0) > 1e-10) throw InvalidArgument("rotation axis must be a unit vector");
  Rot3 skew;
  skew << 0.0, -n(2), n(1), n(2), 0.0, -n(0), -n(1), n(0), 0.0;
  return std::cos(phi) * Rot3::Identity() + std::sin(phi) * skew +
         (1.0 - std::cos(phi)) * n * n.transpose();
}

/// The matrix W with M S_j M^{-1} = sum_m W_mj S_m.
///
/// Coefficients come from the trace pairing tr(S_m S_n), which is diagonal for
/// both representations. Complex coefficients or a residual above 1e-8 mean
/// M does not belong to the group; with `validate` off the real parts are
/// returned regardless.
inline Rot3 adjoint_action(AlgebraKind kind, const Mat2C& m, bool validate = true) {
  const Complex det = m.determinant();
  if (!(std::abs(det) > 1e-300) || !m.allFinite()) throw InvalidArgument("adjoint_action: singular matrix");
  const Mat2C inv = m.inverse();
  Mat2C gens[3];
  Complex gram[3];
  for (int j = 0; j < 3; ++j) {
    gens[j] = generator_2x2(kind, j + 1);
    gram[j] = (gens[j] * gens[j]).trace();
  }
  Rot3 w;
  for (int j = 0; j < 3; ++j) {
    const Mat2C image = m * gens[j] * inv;
    Mat2C rebuilt = Mat2C::Zero();
    double imag = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Complex coeff = (gens[k] * image).trace() / gram[k];
      w(k, j) = coeff.real();
      imag = std::max(imag, std::abs(coeff.imag()));
      rebuilt += coeff.real() * gens[k];
    }
    const double scale = 1.0 + image.norm();
    if (validate && ((image - rebuilt).norm() > 1e-8 * scale || imag > 1e-8 * scale))
      throw NotInGroup("adjoint_action: conjugated generator leaves the real span of the algebra");
  }
  return w;
}

}  // namespace lieprop
