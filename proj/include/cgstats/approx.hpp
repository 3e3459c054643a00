#pragma once

#include <cfloat>
#include <cmath>
#include <stdexcept>

#include <gmpxx.h>

namespace cgstats {

// A double paired with a rigorous absolute error bound: the quantity being
// approximated lies in [value - err_bound, value + err_bound].  Arithmetic
// propagates bounds conservatively and adds a slack term for the rounding of
// the operation itself, so chains of operations stay honest without interval
// libraries.
struct ApproxReal {
  double value = 0.0;
  double err_bound = 0.0;

  ApproxReal() = default;
  ApproxReal(double v, double e) : value(v), err_bound(e) {
    if (!(e >= 0.0) || !std::isfinite(v) || !std::isfinite(e))
      throw std::invalid_argument("ApproxReal: bad value or error bound");
  }

  double lo() const { return value - err_bound; }
  double hi() const { return value + err_bound; }
  bool contains(double x) const { return lo() <= x && x <= hi(); }
};

namespace detail {

// Upper bound on the rounding error of one double operation that produced v.
// 8 eps |v| is far above the true half-ulp; the DBL_MIN term covers subnormals.
inline double fp_slack(double v) {
  return (std::fabs(v) + DBL_MIN) * (8.0 * DBL_EPSILON);
}

}  // namespace detail

inline ApproxReal approx_exact(double v) { return {v, 0.0}; }

// mpq -> double conversion is correct to within one ulp.
inline ApproxReal approx_from(const mpq_class& r) {
  double v = r.get_d();
  return {v, detail::fp_slack(v)};
}

inline ApproxReal operator+(const ApproxReal& a, const ApproxReal& b) {
  double v = a.value + b.value;
  return {v, a.err_bound + b.err_bound + detail::fp_slack(v)};
}

inline ApproxReal operator-(const ApproxReal& a, const ApproxReal& b) {
  double v = a.value - b.value;
  return {v, a.err_bound + b.err_bound + detail::fp_slack(v)};
}

inline ApproxReal operator*(const ApproxReal& a, const ApproxReal& b) {
  double v = a.value * b.value;
  double e = std::fabs(a.value) * b.err_bound + std::fabs(b.value) * a.err_bound +
             a.err_bound * b.err_bound + detail::fp_slack(v);
  return {v, e};
}

// Requires the divisor interval to exclude zero.
inline ApproxReal operator/(const ApproxReal& a, const ApproxReal& b) {
  double blo = std::fabs(b.value) - b.err_bound;
  if (blo <= 0.0)
    throw std::domain_error("ApproxReal: division by interval containing zero");
  double v = a.value / b.value;
  double e = (a.err_bound + std::fabs(v) * b.err_bound) / blo + detail::fp_slack(v);
  return {v, e};
}

inline ApproxReal operator*(const ApproxReal& a, const mpq_class& r) {
  return a * approx_from(r);
}

inline ApproxReal operator*(const mpq_class& r, const ApproxReal& a) {
  return a * approx_from(r);
}

}  // namespace cgstats
