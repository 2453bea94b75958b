#include "faithful/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace faithful {

NelderMeadResult nelder_mead_max(const std::function<double(const std::array<double, 3>&)>& f,
                                 std::array<double, 3> x0, double step, int max_iterations,
                                 double tolerance) {
  using Point = std::array<double, 3>;
  std::array<Point, 4> pts;
  std::array<double, 4> val;
  pts[0] = x0;
  for (std::size_t i = 0; i < 3; ++i) {
    pts[i + 1] = x0;
    pts[i + 1][i] += step;
  }
  for (std::size_t i = 0; i < 4; ++i) val[i] = f(pts[i]);

  auto blend = [](const Point& a, const Point& b, double t) {
    Point out;
    for (std::size_t i = 0; i < 3; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  NelderMeadResult res;
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  for (int it = 0; it < max_iterations; ++it) {
    // Best first (largest value).
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] > val[b]; });
    const std::size_t best = order[0], worst = order[3], second_worst = order[2];
    res.iterations = it;
    if (val[best] - val[worst] <= tolerance) {
      res.converged = true;
      break;
    }
    Point centroid{};
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t i = 0; i < 3; ++i) centroid[i] += pts[order[k]][i] / 3.0;

    const Point refl = blend(centroid, pts[worst], -1.0);
    const double f_refl = f(refl);
    if (f_refl > val[best]) {
      const Point exp = blend(centroid, pts[worst], -2.0);
      const double f_exp = f(exp);
      if (f_exp > f_refl) {
        pts[worst] = exp;
        val[worst] = f_exp;
      } else {
        pts[worst] = refl;
        val[worst] = f_refl;
      }
      continue;
    }
    if (f_refl > val[second_worst]) {
      pts[worst] = refl;
      val[worst] = f_refl;
      continue;
    }
    const bool outside = f_refl > val[worst];
    const Point con = outside ? blend(centroid, refl, 0.5) : blend(centroid, pts[worst], 0.5);
    const double f_con = f(con);
    if (f_con > std::max(val[worst], outside ? f_refl : val[worst])) {
      pts[worst] = con;
      val[worst] = f_con;
      continue;
    }
    // Shrink towards the best vertex.
    for (std::size_t k = 1; k < 4; ++k) {
      const std::size_t idx = order[k];
      pts[idx] = blend(pts[best], pts[idx], 0.5);
      val[idx] = f(pts[idx]);
    }
  }
  const std::size_t best =
      static_cast<std::size_t>(std::max_element(val.begin(), val.end()) - val.begin());
  res.x = pts[best];
  res.value = val[best];
  return res;
}

ScalarExtremum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                  double tolerance) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tolerance) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  ScalarExtremum out{0.5 * (a + b), 0.0};
  out.value = f(out.x);
  // Endpoints win when the maximum sits on the boundary.
  for (double x : {lo, hi}) {
    const double v = f(x);
    if (v > out.value) out = {x, v};
  }
  return out;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tolerance) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::invalid_argument("bisect_root: no sign change on bracket");
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace faithful
