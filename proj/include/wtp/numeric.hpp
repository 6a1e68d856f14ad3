#ifndef WTP_NUMERIC_HPP
#define WTP_NUMERIC_HPP

#include <cmath>
#include <limits>
#include <span>

namespace wtp {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without leaving the log domain
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = a > b ? a : b;
  return m + std::log1p(std::exp(-(a > b ? a - b : b - a)));
}

// max-shifted log sum exp; empty input yields -inf
inline double log_sum_exp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs)
    if (x > m) m = x;
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace wtp

#endif
