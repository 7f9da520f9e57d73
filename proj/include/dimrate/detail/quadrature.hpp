#pragma once

#include <cstddef>

namespace dimrate::detail {

// Composite Simpson rule on [lo, hi] with an even number of intervals.
template <class F>
double simpson(F&& f, double lo, double hi, std::size_t intervals) {
  if (intervals < 2) intervals = 2;
  if (intervals % 2 != 0) ++intervals;
  const double h = (hi - lo) / static_cast<double>(intervals);
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < intervals; ++i) {
    const double x = lo + h * static_cast<double>(i);
    if (i % 2 != 0) {
      odd += f(x);
    } else {
      even += f(x);
    }
  }
  return h / 3.0 * (f(lo) + 4.0 * odd + 2.0 * even + f(hi));
}

// Ten-point Gauss-Legendre rule on [lo, hi].
template <class F>
double gauss_legendre10(F&& f, double lo, double hi) {
  static constexpr double kNodes[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                       0.8650633666889845, 0.9739065285171717};
  static constexpr double kWeights[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                         0.1494513491505806, 0.0666713443086881};
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double dx = half * kNodes[i];
    sum += kWeights[i] * (f(mid - dx) + f(mid + dx));
  }
  return half * sum;
}

}  // namespace dimrate::detail
