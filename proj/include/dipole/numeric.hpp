#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dipole {

inline constexpr double kTol = 1e-9;
inline constexpr double kTightTol = 1e-12;

// y - z with z the nearest integer; ties go to the integer closest to 0.
// y - z is exact: z = 0, or |z| >= 1 and |y - z| <= 1/2 (Sterbenz).
inline double project_pi(double y) {
  double z = std::round(y);
  double r = y - z;
  if (r == 0.5 || r == -0.5) return y > 0 ? 0.5 : -0.5;
  return r;
}

inline bool near_integer(double x, double tol = kTol) { return std::abs(x - std::round(x)) <= tol; }

// Correctly rounded sum (Shewchuk partials, same scheme as Python's math.fsum).
inline double exact_sum(std::span<const double> xs) {
  std::vector<double> partials;
  for (double x : xs) {
    std::size_t i = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      double hi = x + y;
      double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  if (partials.empty()) return 0.0;
  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    double x = hi;
    double y = partials[--n];
    hi = x + y;
    double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0 && partials[n - 1] < 0) || (lo > 0 && partials[n - 1] > 0))) {
    double y = lo * 2;
    double x = hi + y;
    double yr = x - hi;
    if (y == yr) hi = x;
  }
  return hi;
}

inline double exact_sum(const std::vector<double>& xs) { return exact_sum(std::span<const double>(xs)); }

struct Point {
  double x = 0, y = 0;
};

using Rational = boost::multiprecision::cpp_rational;

inline Rational to_rational(double v) { return Rational(v); }

// Sign of the orientation determinant of (a, b, c); exact.
inline int orient2d(const Point& a, const Point& b, const Point& c) {
  double l = (b.x - a.x) * (c.y - a.y);
  double r = (b.y - a.y) * (c.x - a.x);
  double det = l - r;
  double bound = 1e-14 * (std::abs(l) + std::abs(r));
  if (det > bound) return 1;
  if (det < -bound) return -1;
  Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  Rational e = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return e > 0 ? 1 : (e < 0 ? -1 : 0);
}

}  // namespace dipole
