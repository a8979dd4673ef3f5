#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>

#include "fiskit/error.hpp"
#include "fiskit/membership.hpp"

namespace fiskit {

enum class DefuzzMethod {
  Centroid,
  Bisector,
  MeanOfMaxima,
  SmallestOfMaxima,
  LargestOfMaxima,
  WeightedAverage,  ///< only for singleton-consequent systems; applies to (value, weight) pairs
};

inline constexpr std::string_view to_string(DefuzzMethod m) noexcept {
  switch (m) {
    case DefuzzMethod::Centroid: return "centroid";
    case DefuzzMethod::Bisector: return "bisector";
    case DefuzzMethod::MeanOfMaxima: return "mom";
    case DefuzzMethod::SmallestOfMaxima: return "som";
    case DefuzzMethod::LargestOfMaxima: return "lom";
    case DefuzzMethod::WeightedAverage: return "wavg";
  }
  return "?";
}

inline std::optional<DefuzzMethod> parse_defuzz_method(std::string_view name) noexcept {
  for (DefuzzMethod m : {DefuzzMethod::Centroid, DefuzzMethod::Bisector, DefuzzMethod::MeanOfMaxima,
                         DefuzzMethod::SmallestOfMaxima, DefuzzMethod::LargestOfMaxima,
                         DefuzzMethod::WeightedAverage}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

/// Grades within this absolute distance of the maximum count as maxima;
/// exact float equality would fragment plateaus produced by clamped arithmetic.
inline constexpr double kMaximaTieTolerance = 1e-12;

/// Reduces an aggregated set to a crisp value. The result always lies within
/// the set's universe. Throws EmptySetError when every grade is zero and
/// ParameterError for WeightedAverage, which does not operate on grids.
inline double defuzz(const DiscretizedFuzzySet& set, DefuzzMethod method) {
  if (method == DefuzzMethod::WeightedAverage)
    throw ParameterError("defuzz: wavg operates on (value, weight) pairs, not on a grid");
  const Universe& u = set.universe;
  const auto& g = set.grades;
  if (g.size() != u.size()) throw ParameterError("defuzz: grade count does not match the grid");

  const double peak = *std::max_element(g.begin(), g.end());
  if (!(peak > 0.0)) throw EmptySetError("defuzz: set has no positive grade");

  switch (method) {
    case DefuzzMethod::Centroid: {
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        num += u.point(k) * g[k];
        den += g[k];
      }
      return std::clamp(num / den, u.lo(), u.hi());
    }
    case DefuzzMethod::Bisector: {
      // Trapezoid cumulative of the piecewise-linear membership curve; the
      // crossing of half the total mass is located by linear interpolation
      // between the bracketing grid points. C(x_0) = 0, so a bracket always
      // exists on the left.
      std::vector<double> cum(g.size(), 0.0);
      for (std::size_t k = 1; k < g.size(); ++k)
        cum[k] = cum[k - 1] + 0.5 * (g[k - 1] + g[k]) * (u.point(k) - u.point(k - 1));
      const double half = 0.5 * cum.back();
      for (std::size_t k = 1; k < cum.size(); ++k) {
        if (cum[k] >= half) {
          const double rise = cum[k] - cum[k - 1];
          if (!(rise > 0.0)) return u.point(k);
          const double frac = (half - cum[k - 1]) / rise;
          return std::clamp(u.point(k - 1) + frac * (u.point(k) - u.point(k - 1)), u.lo(), u.hi());
        }
      }
      return u.hi();
    }
    case DefuzzMethod::MeanOfMaxima:
    case DefuzzMethod::SmallestOfMaxima:
    case DefuzzMethod::LargestOfMaxima: {
      double sum = 0.0;
      std::size_t count = 0;
      std::size_t first = 0, last = 0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (g[k] >= peak - kMaximaTieTolerance) {
          if (count == 0) first = k;
          last = k;
          sum += u.point(k);
          ++count;
        }
      }
      if (method == DefuzzMethod::SmallestOfMaxima) return u.point(first);
      if (method == DefuzzMethod::LargestOfMaxima) return u.point(last);
      return sum / static_cast<double>(count);
    }
    default:
      throw ParameterError("defuzz: unsupported method");
  }
}

/// One (modal value, firing weight) pair of a singleton-consequent system.
struct WeightedSample {
  double value = 0.0;
  double weight = 0.0;
};

/// Normalized weighted average, sum(w*v) / sum(w).
inline double defuzz_weighted(std::span<const WeightedSample> samples) {
  double num = 0.0, den = 0.0;
  for (const WeightedSample& s : samples) {
    num += s.weight * s.value;
    den += s.weight;
  }
  if (!(den > 0.0)) throw ZeroActivationError("wavg: total weight is zero");
  return num / den;
}

}  // namespace fiskit
