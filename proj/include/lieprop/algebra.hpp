#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "lieprop/errors.hpp"

namespace lieprop {

using Vec3 = Eigen::Vector3d;

/// The two three-dimensional real forms handled by the library.
enum class AlgebraKind { SU2, SU11 };

inline std::string_view to_string(AlgebraKind kind) {
  return kind == AlgebraKind::SU2 ? "su2" : "su11";
}

inline AlgebraKind parse_algebra(std::string_view name) {
  if (name == "su2") return AlgebraKind::SU2;
  if (name == "su11") return AlgebraKind::SU11;
  throw InvalidArgument("unknown algebra '" + std::string(name) + "' (expected su2 or su11)");
}

/// Structure constants omega[j][m][l] of [S_j, S_m] = i sum_l omega_jml S_l,
/// zero-based indices.
using StructureConstants = std::array<std::array<std::array<int, 3>, 3>, 3>;

namespace detail {

constexpr StructureConstants make_table(int w123, int w231, int w312) {
  StructureConstants w{};
  auto set = [&w](int j, int m, int l, int v) {
    w[j][m][l] = v;
    w[m][j][l] = -v;
  };
  set(0, 1, 2, w123);
  set(1, 2, 0, w231);
  set(2, 0, 1, w312);
  return w;
}

}  // namespace detail

/// su(2): omega_123 = omega_231 = omega_312 = 1 and the odd permutations -1.
/// su(1,1): omega_123 = omega_321 = omega_132 = 1, omega_213 = omega_231 =
/// omega_312 = -1.
inline constexpr StructureConstants structure_constants(AlgebraKind kind) {
  if (kind == AlgebraKind::SU2) return detail::make_table(1, 1, 1);
  return detail::make_table(1, -1, -1);
}

/// Lie bracket (a x b)_l = sum_jm a_j b_m omega_jml.
inline Vec3 bracket(AlgebraKind kind, const Vec3& a, const Vec3& b) {
  if (kind == AlgebraKind::SU2) return a.cross(b);
  return {a(2) * b(1) - a(1) * b(2), a(0) * b(2) - a(2) * b(0), a(0) * b(1) - a(1) * b(0)};
}

/// Bracket evaluated by contracting the structure-constant table.
inline Vec3 bracket_from_table(AlgebraKind kind, const Vec3& a, const Vec3& b) {
  const auto w = structure_constants(kind);
  Vec3 out = Vec3::Zero();
  for (int j = 0; j < 3; ++j)
    for (int m = 0; m < 3; ++m)
      for (int l = 0; l < 3; ++l) out(l) += a(j) * b(m) * w[j][m][l];
  return out;
}

/// Diagonal signature of the Killing form: <a|b> = 2 sum_j s_j a_j b_j.
inline Vec3 killing_signature(AlgebraKind kind) {
  if (kind == AlgebraKind::SU2) return {1.0, 1.0, 1.0};
  return {-1.0, -1.0, 1.0};
}

/// Killing form, closed form. su(2) is positive definite, su(1,1) has
/// signature (-,-,+).
inline double killing(AlgebraKind kind, const Vec3& a, const Vec3& b) {
  return 2.0 * killing_signature(kind).cwiseProduct(a).dot(b);
}

/// Killing form from the double contraction
///   <a|b> = - sum_mn (sum_j omega_jmn a_j)(sum_l omega_lnm b_l).
inline double killing_from_table(AlgebraKind kind, const Vec3& a, const Vec3& b) {
  const auto w = structure_constants(kind);
  double total = 0.0;
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      double left = 0.0;
      double right = 0.0;
      for (int j = 0; j < 3; ++j) left += w[j][m][n] * a(j);
      for (int l = 0; l < 3; ++l) right += w[l][n][m] * b(l);
      total += left * right;
    }
  }
  return -total;
}

/// z = sqrt(a1^2 + a2^2).
inline double transverse_radius(const Vec3& a) { return std::hypot(a(0), a(1)); }

/// lambda = |a| (su(2) orbit radius).
inline double su2_radius(const Vec3& a) { return a.norm(); }

/// mu = sqrt|z^2 - a3^2| (su(1,1) hyperboloid parameter).
inline double su11_radius(const Vec3& a) {
  const double z = transverse_radius(a);
  return std::sqrt(std::abs((z - a(2)) * (z + a(2))));
}

inline bool all_finite(const Vec3& v) { return v.allFinite(); }

}  // namespace lieprop
