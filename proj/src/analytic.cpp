#include "faithful/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "faithful/metrics.hpp"
#include "faithful/optimize.hpp"

namespace faithful {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta < kHalfPi)) throw std::invalid_argument("theta must lie in [0, pi/2)");
}

void check_nu(double nu, const char* what) {
  if (!(nu >= 0.0 && nu <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

double two_filter_denominator(const TwoFilterScenario& s) {
  const double d = (s.nu_a * s.nu_a + 1.0) * (s.nu_b * s.nu_b + 1.0) -
                   4.0 * s.nu_a * s.nu_b * std::cos(2.0 * s.theta);
  if (!(d > 1e-12)) throw std::domain_error("two-filter state is extinguished (denominator <= 1e-12)");
  return d;
}

}  // namespace

Vec3 FilterAxis::direction() const {
  switch (orientation) {
    case Orientation::X: return {1.0, 0.0, 0.0};
    case Orientation::Z: return {0.0, 0.0, 1.0};
    case Orientation::Arbitrary: return n_hat;
  }
  return n_hat;
}

void SingleFilterScenario::validate() const {
  check_theta(theta);
  check_nu(nu, "nu");
}

void TwoFilterScenario::validate() const {
  check_theta(theta);
  check_nu(nu_a, "nu_a");
  check_nu(nu_b, "nu_b");
}

double filter_shrink(double nu) { return (1.0 - nu * nu) / (1.0 + nu * nu); }

double conc_single(const SingleFilterScenario& s) {
  s.validate();
  return std::abs(std::cos(2.0 * s.theta)) * filter_shrink(s.nu);
}

double fef_single_x(const SingleFilterScenario& s) {
  s.validate();
  const double c0 = std::abs(std::cos(2.0 * s.theta));
  if (c0 < 1e-12) {
    SingleFilterScenario x = s;
    x.axis = FilterAxis::x();
    return fef_spectral(filtered_state(x));
  }
  const double c = c0 * filter_shrink(s.nu);
  return 0.25 * (1.0 + c0 + (c0 + 1.0) * c / c0);
}

double fef_single_z(const SingleFilterScenario& s) {
  s.validate();
  const double c = std::cos(2.0 * s.theta);
  const double k = filter_shrink(s.nu);
  return fef_closed_form({-c * k, c * k, 1.0});
}

double unfaithful_boundary(double c0) { return c0 * (1.0 - c0) / (1.0 + c0); }

bool unfaithful_region(double c0, double c) {
  if (!(c >= 0.0 && c <= c0 + 1e-12 && c0 <= 1.0))
    throw std::invalid_argument("unfaithful_region requires 0 <= c <= c0 <= 1");
  return c <= unfaithful_boundary(c0) + 1e-12;
}

double critical_nu_single(double theta) {
  check_theta(theta);
  const double c0 = std::abs(std::cos(2.0 * theta));
  if (c0 >= 1.0 - 1e-15) throw std::domain_error("critical_nu_single: a Bell state never becomes unfaithful");
  if (c0 <= 1e-15) throw std::domain_error("critical_nu_single: theta = pi/4 is already separable");
  // (1 - nu^2)/(1 + nu^2) = (1 - C0)/(1 + C0)  <=>  nu^2 = C0
  return std::sqrt(c0);
}

double critical_nu_single_numeric(double theta, double tolerance) {
  critical_nu_single(theta);  // same domain
  const auto excess = [&](double nu) {
    return fef_spectral(filtered_state(SingleFilterScenario{theta, nu, FilterAxis::x()})) - 0.5;
  };
  return bisect_root(excess, 0.0, 1.0 - 1e-9, tolerance);
}

double critical_nu_single_cos_theta_form(double theta) {
  check_theta(theta);
  return std::sqrt(std::cos(theta));
}

double conc_two(const TwoFilterScenario& s) {
  s.validate();
  const double num = std::abs((s.nu_a * s.nu_a - 1.0) * (s.nu_b * s.nu_b - 1.0) * std::cos(2.0 * s.theta));
  return num / two_filter_denominator(s);
}

double fef_two(const TwoFilterScenario& s) {
  s.validate();
  const double sn = std::sin(s.theta), cs = std::cos(s.theta);
  const double p = s.nu_a * s.nu_b;
  const double num = std::max(sn * sn * (p + 1.0) * (p + 1.0), cs * cs * (p - 1.0) * (p - 1.0));
  return num / two_filter_denominator(s);
}

FefTwoMax fef_two_max(double theta, double nu_a) {
  check_theta(theta);
  check_nu(nu_a, "nu_a");
  const auto f = [&](double nu_b) { return fef_two({theta, nu_a, nu_b}); };

  constexpr int grid = 2000;
  int best = 0;
  double best_val = f(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double v = f(static_cast<double>(i) / grid);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = std::max(0, best - 1) / static_cast<double>(grid);
  const double hi = std::min(grid, best + 1) / static_cast<double>(grid);
  const ScalarExtremum ext = golden_section_max(f, lo, hi, 1e-8);

  FefTwoMax out;
  out.nu_b_max = ext.x;
  out.f_max = ext.value;
  const double c2 = std::cos(2.0 * theta), c4 = std::cos(4.0 * theta);
  const double a2 = nu_a * nu_a;
  const double den = 1.0 + a2 * a2 - 2.0 * nu_a * c4;
  const double sn2 = std::sin(theta) * std::sin(theta), cs2 = std::cos(theta) * std::cos(theta);
  out.printed_f_max = std::max((std::pow(1.0 + a2, 2) + 4.0 * a2 * c2) / den * sn2,
                               (std::pow(1.0 + a2, 2) - 4.0 * a2 * c2) / den * cs2);
  out.discrepancy = std::abs(out.printed_f_max - out.f_max);
  out.discrepancy_flag = out.discrepancy > 1e-6;
  return out;
}

std::optional<double> fef_two_half_crossing(double theta, double nu_a, double lo, double hi) {
  const auto g = [&](double nu_b) { return fef_two({theta, nu_a, nu_b}) - 0.5; };
  if ((g(lo) > 0.0) == (g(hi) > 0.0)) return std::nullopt;
  return bisect_root(g, lo, hi, 1e-10);
}

DensityMatrix filtered_state(const SingleFilterScenario& s) {
  s.validate();
  const LocalFilter f{s.nu, s.axis.direction(), 1.0};
  return apply_filter_a(rank2_bd({s.theta}), f);
}

DensityMatrix filtered_state(const TwoFilterScenario& s) {
  s.validate();
  const Vec3 n = s.axis.direction();
  return apply_filter_b(apply_filter_a(rank2_bd({s.theta}), LocalFilter{s.nu_a, n, 1.0}),
                        LocalFilter{s.nu_b, n, 1.0});
}

std::vector<double> Range::values() const {
  std::vector<double> v;
  if (steps <= 0) return v;
  v.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    v.push_back(lo);
    return v;
  }
  for (int i = 0; i < steps; ++i) v.push_back(lo + (hi - lo) * i / (steps - 1));
  return v;
}

std::vector<ScanRow> scan(const ScanSpec& spec, Exec exec) {
  const auto thetas = spec.theta.values();
  const auto nas = spec.nu_a.values();
  const auto nbs = spec.two_filter ? spec.nu_b.values() : std::vector<double>{0.0};
  const std::size_t n = thetas.size() * nas.size() * nbs.size();

  return map_indexed<ScanRow>(
      n,
      [&](std::size_t idx) {
        const std::size_t ib = idx % nbs.size();
        const std::size_t ia = (idx / nbs.size()) % nas.size();
        const std::size_t it = idx / (nbs.size() * nas.size());
        ScanRow row;
        row.theta = thetas[it];
        row.nu_a = nas[ia];
        row.nu_b = spec.two_filter ? nbs[ib] : 0.0;

        DensityMatrix rho;
        if (spec.two_filter) {
          const TwoFilterScenario s{row.theta, row.nu_a, row.nu_b, spec.axis};
          rho = filtered_state(s);
          if (spec.axis.orientation == Orientation::X) {
            row.c_closed = conc_two(s);
            row.f_closed = fef_two(s);
          }
        } else {
          const SingleFilterScenario s{row.theta, row.nu_a, spec.axis};
          rho = filtered_state(s);
          row.c_closed = conc_single(s);
          if (spec.axis.orientation == Orientation::X) row.f_closed = fef_single_x(s);
          if (spec.axis.orientation == Orientation::Z) row.f_closed = fef_single_z(s);
        }
        row.c_pipeline = concurrence(rho);
        row.f_pipeline = fef_spectral(rho);
        row.faithful = is_faithful(rho);
        return row;
      },
      exec);
}

double max_closed_pipeline_gap(const std::vector<ScanRow>& rows) {
  double gap = 0.0;
  for (const auto& r : rows) {
    if (r.c_closed) gap = std::max(gap, std::abs(*r.c_closed - r.c_pipeline));
    if (r.f_closed) gap = std::max(gap, std::abs(*r.f_closed - r.f_pipeline));
  }
  return gap;
}

std::vector<BoundaryPoint> boundary_curve(int points) {
  std::vector<BoundaryPoint> out;
  for (int i = 1; i <= points; ++i) {
    BoundaryPoint p;
    p.c0 = static_cast<double>(i) / (points + 1);
    p.c_boundary = unfaithful_boundary(p.c0);
    p.theta = 0.5 * std::acos(p.c0);
    p.nu_star = std::sqrt(p.c0);
    p.nu_cos_theta = std::sqrt(std::cos(p.theta));
    out.push_back(p);
  }
  return out;
}

}  // namespace faithful
