#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <variant>
#include <vector>

#include "fiskit/error.hpp"

namespace fiskit {

// ---------------------------------------------------------------------------
// Membership-function families
// ---------------------------------------------------------------------------

/// Gauss-style bell, exp(-(((x-c)/a)^2)^b).
struct Bell1 {
  double a = 1.0;  ///< width, nonzero
  double b = 1.0;  ///< exponent, > 0
  double c = 0.0;  ///< center
};

/// Generalized bell, 1 / (1 + (((x-c)/a)^2)^b).
struct Bell2 {
  double a = 1.0;
  double b = 1.0;
  double c = 0.0;
};

/// 1 / (1 + e^(-a(x-c))). Opens to the right for a > 0, to the left for a < 0.
struct Sigmoid {
  double a = 1.0;  ///< slope
  double c = 0.0;  ///< crossover, where the grade is 0.5
};

/// Isosceles trapezoid: plateau [c-b, c+b], support [c-(a+b), c+(a+b)],
/// linear ramps of width a. Degenerates to a triangle when b = 0.
struct Trapeze {
  double a = 1.0;  ///< ramp width, > 0
  double b = 0.0;  ///< plateau half-width, >= 0
  double c = 0.0;  ///< center
};

/// Grade 1 at x0, 0 elsewhere.
struct Singleton {
  double x0 = 0.0;
};

using MembershipFunction = std::variant<Bell1, Bell2, Sigmoid, Trapeze, Singleton>;

// ---------------------------------------------------------------------------
// Pointwise evaluation
// ---------------------------------------------------------------------------

inline double eval_bell1(double x, double a, double b, double c) {
  if (!(a != 0.0)) throw ParameterError("bell1: width a must be nonzero");
  if (!(b > 0.0)) throw ParameterError("bell1: exponent b must be positive");
  // (x-c) is formed before squaring so the grade is exactly symmetric
  // about c and invariant under the sign of a.
  const double q = (x - c) / a;
  return std::exp(-std::pow(q * q, b));
}

inline double eval_bell2(double x, double a, double b, double c) {
  if (!(a != 0.0)) throw ParameterError("bell2: width a must be nonzero");
  if (!(b > 0.0)) throw ParameterError("bell2: exponent b must be positive");
  const double q = (x - c) / a;
  return 1.0 / (1.0 + std::pow(q * q, b));
}

/// Never throws: an overflowing exponent saturates the grade to 0 or 1,
/// which is the mathematical limit.
inline double eval_sigmoid(double x, double a = 1.0, double c = 0.0) noexcept {
  return 1.0 / (1.0 + std::exp(-a * (x - c)));
}

inline double eval_trapeze(double x, double a = 1.0, double b = 0.0, double c = 0.0) {
  if (!(a > 0.0)) throw ParameterError("trapeze: ramp width a must be positive");
  if (!(b >= 0.0)) throw ParameterError("trapeze: plateau half-width b must be nonnegative");
  // Same algebra as clamp((a + b - |x-c|) / a, 0, 1); this arrangement is
  // bitwise-identical to clamp(1 - |x-c|/a, 0, 1) in the b = 0 triangle case.
  const double y = 1.0 - (std::abs(x - c) - b) / a;
  return std::clamp(y, 0.0, 1.0);
}

namespace detail {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace detail

inline double evaluate(const MembershipFunction& mf, double x) {
  return std::visit(
      detail::Overloaded{
          [&](const Bell1& f) { return eval_bell1(x, f.a, f.b, f.c); },
          [&](const Bell2& f) { return eval_bell2(x, f.a, f.b, f.c); },
          [&](const Sigmoid& f) { return eval_sigmoid(x, f.a, f.c); },
          [&](const Trapeze& f) { return eval_trapeze(x, f.a, f.b, f.c); },
          [&](const Singleton& f) { return x == f.x0 ? 1.0 : 0.0; },
      },
      mf);
}

// ---------------------------------------------------------------------------
// Universe of discourse and discretized sets
// ---------------------------------------------------------------------------

/// A bounded interval [lo, hi] with a uniform grid of n >= 2 points that
/// includes both endpoints exactly. Immutable after construction.
class Universe {
 public:
  Universe(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
      throw ParameterError("universe: bounds must be finite with lo < hi");
    if (n < 2) throw ParameterError("universe: grid needs at least two points");
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t size() const noexcept { return n_; }
  double step() const noexcept { return (hi_ - lo_) / static_cast<double>(n_ - 1); }

  double point(std::size_t k) const noexcept {
    return k + 1 == n_ ? hi_ : lo_ + static_cast<double>(k) * step();
  }

  /// Index of the grid point closest to x; exact ties break toward the
  /// lower index. Out-of-range x maps to the nearest endpoint.
  std::size_t nearest_index(double x) const noexcept {
    const double t = (x - lo_) / step();
    if (t <= 0.0) return 0;
    if (t >= static_cast<double>(n_ - 1)) return n_ - 1;
    const double f = std::floor(t);
    const auto k = static_cast<std::size_t>(f);
    return (t - f > 0.5) ? k + 1 : k;
  }

  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

  friend bool operator==(const Universe&, const Universe&) = default;

 private:
  double lo_;
  double hi_;
  std::size_t n_;
};

/// A fuzzy set represented by its grades over a Universe grid. This is the
/// currency of relational inference and defuzzification.
struct DiscretizedFuzzySet {
  Universe universe;
  std::vector<double> grades;
};

/// Samples mf at every grid point. A Singleton puts its unit grade on the
/// single nearest grid point so it keeps full height on any grid.
inline DiscretizedFuzzySet sample(const MembershipFunction& mf, const Universe& universe) {
  DiscretizedFuzzySet out{universe, std::vector<double>(universe.size(), 0.0)};
  if (const auto* s = std::get_if<Singleton>(&mf)) {
    out.grades[universe.nearest_index(s->x0)] = 1.0;
    return out;
  }
  for (std::size_t k = 0; k < universe.size(); ++k) out.grades[k] = evaluate(mf, universe.point(k));
  return out;
}

}  // namespace fiskit
