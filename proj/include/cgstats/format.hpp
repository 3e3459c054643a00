#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace cgstats {

// Rounds x to `decimals` places after the point, halves away from zero.
// Negative `decimals` rounds to tens, hundreds, ...
inline double round_half_away(double x, int decimals) {
  if (x == 0.0) return 0.0;
  double scale = std::pow(10.0, decimals);
  double y = x * scale;
  if (std::fabs(y) > 4.5e15)  // beyond integer resolution of double; x is already "rounded"
    return x;
  double r = std::floor(std::fabs(y) + 0.5);
  return std::copysign(r, x) / scale;
}

inline std::string format_fixed(double x, int decimals) {
  if (decimals < 0) {
    double r = round_half_away(x, decimals);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.0f", r);
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, round_half_away(x, decimals));
  return buf;
}

// `sig` significant digits, plain decimal notation.
inline std::string format_sig(double x, int sig) {
  if (sig < 1) throw std::invalid_argument("format_sig: sig < 1");
  if (x == 0.0) return "0";
  int e = (int)std::floor(std::log10(std::fabs(x)));
  return format_fixed(x, sig - 1 - e);
}

// Probability rendering in the style of the comparison tables: leading zero
// dropped, small values as ".75e-4" (mantissa in [.10, 1)).
inline std::string format_prob(double x, int sig = 3) {
  if (x == 0.0) return "0";
  if (x < 0.0) return "-" + format_prob(-x, sig);
  std::string s;
  if (x < 1e-3) {
    int ex = (int)std::floor(std::log10(x)) + 1;
    double m = x / std::pow(10.0, ex);
    if (m >= 1.0) { m /= 10.0; ++ex; }  // log10 edge
    s = format_fixed(m, sig > 1 ? sig - 1 : 1);
    if (s.compare(0, 2, "0.") == 0) s.erase(0, 1);
    s += "e" + std::to_string(ex);
    return s;
  }
  s = format_sig(x, sig);
  if (s.compare(0, 2, "0.") == 0) s.erase(0, 1);
  return s;
}

// Full-precision rendering for machine-readable output.
inline std::string format_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace cgstats
