#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "hspan/core/grid.hpp"

namespace hspan {

/// Population moments of a sample set (divide by n).
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double stddev() const { return std::sqrt(variance); }
};

template <class T>
Moments moments(std::span<const T> x) {
  detail::require(!x.empty(), "moments: empty input");
  double sum = 0.0;
  bool constant = true;
  for (const T v : x) {
    sum += static_cast<double>(v);
    constant = constant && v == x[0];
  }
  Moments m;
  m.mean = sum / static_cast<double>(x.size());
  // Exact zero for constant input; rounding in the mean would otherwise
  // leave a tiny positive variance.
  if (constant) {
    m.mean = static_cast<double>(x[0]);
    return m;
  }
  double ss = 0.0;
  for (const T v : x) {
    const double d = static_cast<double>(v) - m.mean;
    ss += d * d;
  }
  m.variance = ss / static_cast<double>(x.size());
  return m;
}

/// Population covariance of two equally sized sample sets.
template <class T, class U>
double covariance(std::span<const T> x, std::span<const U> y, double mean_x, double mean_y) {
  detail::require(x.size() == y.size() && !x.empty(), "covariance: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += (static_cast<double>(x[i]) - mean_x) * (static_cast<double>(y[i]) - mean_y);
  return acc / static_cast<double>(x.size());
}

}  // namespace hspan
