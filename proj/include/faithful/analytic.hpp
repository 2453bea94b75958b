#pragma once

// Closed forms for rank-2 Bell-diagonal states under local x/z filters, plus
// the matching numerical pipeline (construct, filter, measure) used to check
// them.

#include <optional>
#include <vector>

#include "faithful/channels.hpp"
#include "faithful/kernels.hpp"
#include "faithful/states.hpp"

namespace faithful {

enum class Orientation { X, Z, Arbitrary };

struct FilterAxis {
  Orientation orientation = Orientation::X;
  Vec3 n_hat{1.0, 0.0, 0.0};  // used for Orientation::Arbitrary

  static FilterAxis x() { return {Orientation::X, {1.0, 0.0, 0.0}}; }
  static FilterAxis z() { return {Orientation::Z, {0.0, 0.0, 1.0}}; }
  static FilterAxis along(const Vec3& n) { return {Orientation::Arbitrary, n}; }
  Vec3 direction() const;
};

struct SingleFilterScenario {
  double theta = 0.0;
  double nu = 0.0;
  FilterAxis axis = FilterAxis::x();

  void validate() const;
};

/// Both filters share one axis (x in the closed forms).
struct TwoFilterScenario {
  double theta = 0.0;
  double nu_a = 0.0;
  double nu_b = 0.0;
  FilterAxis axis = FilterAxis::x();

  void validate() const;
};

/// (1 - nu^2) / (1 + nu^2)
double filter_shrink(double nu);

/// |cos 2θ| (1 - nu^2)/(1 + nu^2), any orientation.
double conc_single(const SingleFilterScenario& s);

/// 1/4 (1 + C0 + (C0 + 1) C/C0) for an x-axis filter. Falls back to the
/// spectral FEF of the constructed state when C0 = 0.
double fef_single_x(const SingleFilterScenario& s);

/// FEF for a z-axis filter from the rotated correlations (-c k, c k, 1).
double fef_single_z(const SingleFilterScenario& s);

/// C <= C0 (1 - C0) / (1 + C0). Requires 0 <= c <= c0 <= 1.
bool unfaithful_region(double c0, double c);

/// C0 (1 - C0) / (1 + C0)
double unfaithful_boundary(double c0);

/// Smallest x-filter magnitude making the filtered state unfaithful,
/// sqrt(|cos 2θ|). Throws std::domain_error for θ = 0 (never unfaithful)
/// and θ = π/4 (already separable).
double critical_nu_single(double theta);

/// Same threshold found by bisection on the spectral FEF of the pipeline state.
double critical_nu_single_numeric(double theta, double tolerance = 1e-12);

/// Threshold implied by the alternative (1 - cos θ)/(1 + cos θ) form:
/// sqrt(cos θ).
double critical_nu_single_cos_theta_form(double theta);

/// |(nu_a^2 - 1)(nu_b^2 - 1) cos 2θ| / [(nu_a^2 + 1)(nu_b^2 + 1) - 4 nu_a nu_b cos 2θ]
double conc_two(const TwoFilterScenario& s);

/// max[sin^2 θ (nu_a nu_b + 1)^2, cos^2 θ (nu_a nu_b - 1)^2] / (same denominator)
double fef_two(const TwoFilterScenario& s);

struct FefTwoMax {
  double nu_b_max = 0.0;
  double f_max = 0.0;
  double printed_f_max = 0.0;  // literal closed-form expression for F^max
  double discrepancy = 0.0;    // |printed_f_max - f_max|
  bool discrepancy_flag = false;  // discrepancy > 1e-6
};

/// Numerical maximisation of fef_two over nu_b in [0, 1]: dense grid, then
/// golden-section refinement to 1e-8.
FefTwoMax fef_two_max(double theta, double nu_a);

/// Root of fef_two(θ, nu_a, ·) = 1/2 on [lo, hi] by bisection (tolerance
/// 1e-10). Returns nullopt without a sign change.
std::optional<double> fef_two_half_crossing(double theta, double nu_a, double lo, double hi);

/// rank2_bd(θ) filtered on A (and B for the two-filter case).
DensityMatrix filtered_state(const SingleFilterScenario& s);
DensityMatrix filtered_state(const TwoFilterScenario& s);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;  // 0 gives an empty range; 1 gives {lo}

  std::vector<double> values() const;
  static Range single(double v) { return {v, v, 1}; }
};

struct ScanSpec {
  Range theta;
  Range nu_a;
  Range nu_b = Range::single(0.0);
  FilterAxis axis = FilterAxis::x();
  bool two_filter = false;
};

struct ScanRow {
  double theta = 0.0;
  double nu_a = 0.0;
  double nu_b = 0.0;
  std::optional<double> c_closed;
  double c_pipeline = 0.0;
  std::optional<double> f_closed;
  double f_pipeline = 0.0;
  bool faithful = false;
};

/// One row per grid point in (theta, nu_a, nu_b) lexicographic order.
std::vector<ScanRow> scan(const ScanSpec& spec, Exec exec = Exec::Parallel);

/// Largest |closed - pipeline| over both metrics of the rows that have
/// closed forms.
double max_closed_pipeline_gap(const std::vector<ScanRow>& rows);

struct BoundaryPoint {
  double c0 = 0.0;
  double c_boundary = 0.0;     // C0 (1 - C0)/(1 + C0)
  double theta = 0.0;          // acos(C0)/2
  double nu_star = 0.0;        // sqrt(C0)
  double nu_cos_theta = 0.0;   // sqrt(cos θ), alternative printed form
};

/// `points` samples of C0 on (0, 1).
std::vector<BoundaryPoint> boundary_curve(int points);

}  // namespace faithful
