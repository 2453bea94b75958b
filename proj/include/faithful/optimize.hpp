#pragma once

#include <array>
#include <functional>

namespace faithful {

struct NelderMeadResult {
  std::array<double, 3> x{};
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Maximises f over R^3 starting from a simplex of edge `step` around x0.
/// Stops when the spread of simplex values drops below `tolerance` or after
/// `max_iterations`.
NelderMeadResult nelder_mead_max(const std::function<double(const std::array<double, 3>&)>& f,
                                 std::array<double, 3> x0, double step, int max_iterations,
                                 double tolerance);

struct ScalarExtremum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximisation of a unimodal f on [lo, hi].
ScalarExtremum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                  double tolerance);

/// Bisection root of f on [lo, hi]. Throws std::invalid_argument when f(lo)
/// and f(hi) have the same sign.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tolerance);

}  // namespace faithful
