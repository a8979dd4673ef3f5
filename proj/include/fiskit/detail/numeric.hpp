#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fiskit/error.hpp"

namespace fiskit::detail {

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Locale-independent "%.12g" equivalent.
inline std::string format_sig12(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, ptr);
}

/// Parses a complete string as a double; rejects trailing garbage.
inline std::optional<double> parse_double(std::string_view s) {
  double v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  if (v == 0.0) v = 0.0;  // normalize -0
  return v;
}

/// Expands lo:step:hi into inclusive sample points. The final point is
/// clamped onto hi when it lands within 1e-9 of it.
inline std::vector<double> expand_range(double lo, double step, double hi,
                                        std::size_t max_points = 10'000'000) {
  if (!std::isfinite(lo) || !std::isfinite(step) || !std::isfinite(hi))
    throw ParameterError("range: bounds and step must be finite");
  if (!(step > 0.0)) throw ParameterError("range: step must be positive");
  if (hi < lo) throw ParameterError("range: hi must not be below lo");
  constexpr double tol = 1e-9;
  std::vector<double> xs;
  for (std::size_t k = 0;; ++k) {
    if (k >= max_points) throw ParameterError("range: too many points");
    double x = lo + static_cast<double>(k) * step;
    if (x > hi + tol) break;
    if (std::abs(x - hi) <= tol) {
      xs.push_back(hi);
      break;
    }
    xs.push_back(x);
  }
  return xs;
}

}  // namespace fiskit::detail
