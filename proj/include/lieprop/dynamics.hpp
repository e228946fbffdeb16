#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "lieprop/algebra.hpp"
#include "lieprop/errors.hpp"
#include "lieprop/ode.hpp"

namespace lieprop {

/// h(t) = h0.
struct ConstantField {
  Vec3 h = Vec3::Zero();
};

/// h(t) = (omega1 cos(omega t), omega1 sin(omega t), omega0).
struct RotatingTransverseField {
  double omega1 = 0.0;
  double omega = 0.0;
  double omega0 = 0.0;
};

/// h(t) = (omega1, 0, offset + rate t).
struct LinearSweepField {
  double omega1 = 0.0;
  double rate = 0.0;
  double offset = 0.0;
};

/// Samples (t_k, h_k) with strictly increasing t_k, linearly interpolated.
class TabulatedField {
 public:
  TabulatedField(std::vector<double> times, std::vector<Vec3> values)
      : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size()) throw InvalidArgument("tabulated field: time and value counts differ");
    if (times_.size() < 2) throw InvalidArgument("tabulated field needs at least two samples");
    for (std::size_t k = 0; k < times_.size(); ++k) {
      if (!std::isfinite(times_[k]) || !values_[k].allFinite())
        throw InvalidArgument("tabulated field: non-finite sample at row " + std::to_string(k));
      if (k > 0 && !(times_[k] > times_[k - 1]))
        throw InvalidArgument("tabulated field: sample times must be strictly increasing");
    }
  }

  const std::vector<double>& times() const { return times_; }
  const std::vector<Vec3>& values() const { return values_; }

  Vec3 operator()(double t) const {
    if (!(t >= times_.front() && t <= times_.back()))
      throw OutOfRange("tabulated field evaluated at t = " + std::to_string(t) + " outside [" +
                       std::to_string(times_.front()) + ", " + std::to_string(times_.back()) + "]");
    auto upper = std::upper_bound(times_.begin(), times_.end(), t);
    if (upper == times_.end()) return values_.back();
    const std::size_t hi = static_cast<std::size_t>(upper - times_.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return (1.0 - w) * values_[lo] + w * values_[hi];
  }

 private:
  std::vector<double> times_;
  std::vector<Vec3> values_;
};

/// Constant on [k L, (k+1) L); the last value holds beyond the table.
struct PiecewiseConstantField {
  double segment = 1.0;
  std::vector<Vec3> values;
};

using CoefficientField =
    std::variant<ConstantField, RotatingTransverseField, LinearSweepField, TabulatedField, PiecewiseConstantField>;

namespace detail {

inline Vec3 piecewise_value(const PiecewiseConstantField& f, double t, bool from_left) {
  if (f.values.empty()) throw InvalidArgument("piecewise-constant field has no segments");
  if (!(f.segment > 0.0)) throw InvalidArgument("piecewise-constant segment length must be positive");
  // Breakpoints are snapped with a relative tolerance so grids built from
  // multiples of dt land on the intended side.
  const double x = t / f.segment;
  const double snapped = std::round(x);
  const bool on_break = std::abs(x - snapped) < 1e-9 * std::max(1.0, std::abs(x));
  double index = on_break ? snapped : std::floor(x);
  if (on_break && from_left) index -= 1.0;
  index = std::clamp(index, 0.0, static_cast<double>(f.values.size() - 1));
  return f.values[static_cast<std::size_t>(index)];
}

}  // namespace detail

/// h(t). For fields with jumps this is the right-continuous value.
inline Vec3 evaluate_field(const CoefficientField& field, double t, bool from_left = false) {
  return std::visit(
      [t, from_left](const auto& f) -> Vec3 {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, ConstantField>) {
          return f.h;
        } else if constexpr (std::is_same_v<F, RotatingTransverseField>) {
          return {f.omega1 * std::cos(f.omega * t), f.omega1 * std::sin(f.omega * t), f.omega0};
        } else if constexpr (std::is_same_v<F, LinearSweepField>) {
          return {f.omega1, 0.0, f.offset + f.rate * t};
        } else if constexpr (std::is_same_v<F, TabulatedField>) {
          return f(t);
        } else {
          return detail::piecewise_value(f, t, from_left);
        }
      },
      field);
}

/// Reads a tabulated field from CSV with header `t,h1,h2,h3`.
inline TabulatedField parse_tabulated_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("tabulated CSV is empty");
  line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\r'; }), line.end());
  if (line != "t,h1,h2,h3") throw InvalidArgument("tabulated CSV header must be 't,h1,h2,h3', got '" + line + "'");
  std::vector<double> times;
  std::vector<Vec3> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    double cols[4];
    std::size_t pos = 0;
    for (int c = 0; c < 4; ++c) {
      while (pos < line.size() && line[pos] == ' ') ++pos;
      const char* begin = line.data() + pos;
      const char* end = line.data() + line.size();
      auto [ptr, ec] = std::from_chars(begin, end, cols[c]);
      if (ec != std::errc{}) throw InvalidArgument("tabulated CSV: bad number on line " + std::to_string(row));
      pos = static_cast<std::size_t>(ptr - line.data());
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\r')) ++pos;
      if (c < 3) {
        if (pos >= line.size() || line[pos] != ',')
          throw InvalidArgument("tabulated CSV: expected 4 columns on line " + std::to_string(row));
        ++pos;
      } else if (pos != line.size()) {
        throw InvalidArgument("tabulated CSV: trailing data on line " + std::to_string(row));
      }
    }
    times.push_back(cols[0]);
    values.emplace_back(cols[1], cols[2], cols[3]);
  }
  return TabulatedField(std::move(times), std::move(values));
}

inline TabulatedField load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open tabulated field '" + path + "'");
  return parse_tabulated_csv(in);
}

/// Special solution a(t) of a' = h x a sampled on a uniform grid, together
/// with the field samples used by the factorization.
struct Trajectory {
  AlgebraKind kind = AlgebraKind::SU2;
  TimeGrid grid;
  std::vector<Vec3> a;
  std::vector<Vec3> h;
  double epsilon = 1e-9;
  double min_transverse = 0.0;
  /// First grid index with z < epsilon, if any.
  std::optional<std::size_t> first_degenerate;

  double killing_norm(std::size_t i) const { return killing(kind, a[i], a[i]); }

  /// max_i |<a_i|a_i> - <a_0|a_0>|.
  double max_norm_drift() const {
    const double n0 = killing_norm(0);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(killing_norm(i) - n0));
    return worst;
  }
};

/// Integrates a' = h(t) x a from a(0) = a0 with fixed-step RK4.
inline Trajectory integrate_special_solution(AlgebraKind kind, const CoefficientField& field, const Vec3& a0,
                                             const TimeGrid& grid, double epsilon = 1e-9) {
  if (!a0.allFinite()) throw InvalidArgument("initial adjoint vector must be finite");
  Trajectory traj;
  traj.kind = kind;
  traj.grid = grid;
  traj.epsilon = epsilon;
  traj.a.reserve(grid.size());
  traj.h.reserve(grid.size());
  traj.a.push_back(a0);
  traj.h.push_back(evaluate_field(field, 0.0));

  const auto rhs = [&](double t, const Vec3& y, bool from_left) -> Vec3 {
    return bracket(kind, evaluate_field(field, t, from_left), y);
  };
  Vec3 y = a0;
  for (std::size_t i = 0; i < grid.steps; ++i) {
    y = rk4_step(rhs, grid.time(i), y, grid.dt);
    if (!y.allFinite())
      throw NonFinite("special solution became non-finite at t = " + std::to_string(grid.time(i + 1)));
    traj.a.push_back(y);
    traj.h.push_back(evaluate_field(field, grid.time(i + 1)));
  }

  traj.min_transverse = transverse_radius(traj.a[0]);
  for (std::size_t i = 0; i < traj.a.size(); ++i) {
    const double z = transverse_radius(traj.a[i]);
    traj.min_transverse = std::min(traj.min_transverse, z);
    if (!traj.first_degenerate && z < epsilon) traj.first_degenerate = i;
  }
  return traj;
}

}  // namespace lieprop
