// Acceptance checks: one PASS/FAIL line per criterion. Tolerances and
// runtime limits are fixed here; the exit status is non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "faithful/analytic.hpp"
#include "faithful/channels.hpp"
#include "faithful/kernels.hpp"
#include "faithful/metrics.hpp"
#include "faithful/rng.hpp"
#include "faithful/states.hpp"
#include "faithful/tomography.hpp"

using namespace faithful;

namespace {

// Experimental initial state: concurrence 0.181 in the rank-2 family, with
// the sign of cos 2θ that makes the x filter drive the state unfaithful.
const double kC0 = 0.181;
const double kTheta = 0.5 * std::acos(-kC0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // <= 0: no limit
  std::function<Outcome()> run;
};

std::string num(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

// 1 ---------------------------------------------------------------------------
Outcome extremal_point() {
  const double c0 = std::numbers::sqrt2 - 1.0;
  const SingleFilterScenario s{0.5 * std::acos(c0), std::sqrt(c0)};
  const DensityMatrix rho = filtered_state(s);
  const double target_c = 3.0 - 2.0 * std::numbers::sqrt2;
  const double c = concurrence(rho), f = fef_spectral(rho);
  const double cc = conc_single(s), fc = fef_single_x(s);
  const double tol = 1e-9, exact = 1e-14;
  const bool pass = std::abs(c - target_c) <= tol && std::abs(f - 0.5) <= tol && std::abs(cc - target_c) <= exact &&
                    std::abs(fc - 0.5) <= exact;
  return {pass, "pipeline C-C*=" + num(c - target_c, 3) + " F-1/2=" + num(f - 0.5, 3) + "; closed C-C*=" +
                    num(cc - target_c, 3) + " F-1/2=" + num(fc - 0.5, 3)};
}

// 2 ---------------------------------------------------------------------------
Outcome single_threshold() {
  const double nu = critical_nu_single(kTheta);
  const bool pass = std::abs(nu - 0.4254) <= 5e-5 && std::abs(nu - 0.426) <= 0.002;
  return {pass, "critical nu_A = " + num(nu, 8) + " (reference 0.426 +- 0.002)"};
}

// 3 ---------------------------------------------------------------------------
Outcome anti_correlation() {
  const double nu_a = 0.465;
  const auto f = [&](double nb) { return fef_two({kTheta, nu_a, nb}); };
  const auto c = [&](double nb) { return conc_two({kTheta, nu_a, nb}); };

  // Finite differences on a 100-point grid over [0, 0.375].
  bool increasing = true;
  double first_drop = -1.0;
  for (int i = 0; i + 1 < 100; ++i) {
    const double a = 0.375 * i / 99.0, b = 0.375 * (i + 1) / 99.0;
    if (!(f(b) > f(a))) {
      increasing = false;
      if (first_drop < 0) first_drop = a;
    }
  }
  bool c_decreasing = true;
  for (int i = 0; i + 1 < 100; ++i) {
    const double a = 0.036 + (0.455 - 0.036) * i / 99.0, b = 0.036 + (0.455 - 0.036) * (i + 1) / 99.0;
    if (!(c(b) < c(a))) c_decreasing = false;
  }
  const auto crossing = fef_two_half_crossing(kTheta, nu_a, 0.0, 0.375);
  const bool crossing_ok = crossing && std::abs(*crossing - 0.106) <= 0.01;
  const FefTwoMax mx = fef_two_max(kTheta, nu_a);

  std::string d = "crossing nu_B = " + (crossing ? num(*crossing, 5) : std::string("none")) +
                  " (want 0.106 +- 0.01); FEF increasing on [0,0.375]: " + (increasing ? "yes" : "no");
  if (!increasing) d += " (first decrease at nu_B = " + num(first_drop, 4) + ", max F = " + num(mx.f_max, 6) +
                        " at nu_B = " + num(mx.nu_b_max, 5) + ")";
  d += "; C strictly decreasing on [0.036,0.455]: " + std::string(c_decreasing ? "yes" : "no");
  return {increasing && crossing_ok && c_decreasing, d};
}

// 4 ---------------------------------------------------------------------------
Outcome z_never_unfaithful() {
  constexpr int n = 200;
  const auto values = map_indexed<double>(
      static_cast<std::size_t>(n) * n,
      [&](std::size_t k) {
        const double theta = (static_cast<double>(k / n) + 0.5) * (std::numbers::pi / 2) / n;
        const double nu = static_cast<double>(k % n) / n;
        return fef_spectral(filtered_state(SingleFilterScenario{theta, nu, FilterAxis::z()}));
      },
      Exec::Parallel);
  double min_grid = *std::min_element(values.begin(), values.end());
  double min_sweep = 1.0;
  for (int j = 0; j < n; ++j) {
    const double nb = static_cast<double>(j) / n;
    min_sweep = std::min(min_sweep, fef_spectral(filtered_state(TwoFilterScenario{kTheta, 0.469, nb, FilterAxis::z()})));
  }
  return {min_grid > 0.5 && min_sweep > 0.5,
          "min F - 1/2: grid " + num(min_grid - 0.5, 4) + ", two-z sweep " + num(min_sweep - 0.5, 4)};
}

// 5 ---------------------------------------------------------------------------
Outcome observation_oracle() {
  constexpr std::size_t n = 1000;
  struct Gap {
    double brute = 0.0, closed = 0.0;
  };
  const auto gaps = map_indexed<Gap>(
      n,
      [](std::size_t i) {
        const DensityMatrix rho = random_state(derive_seed(5005, i), 1 + static_cast<int>(i % 4));
        const double fs = fef_spectral(rho);
        FefSearchOptions opts;
        opts.seed = derive_seed(5006, i);
        opts.parallel = false;
        return Gap{std::abs(fs - fef_bruteforce(rho, opts).fef),
                   std::abs(fs - fef_closed_form(rotated_correlations(rho)))};
      },
      Exec::Parallel);
  double brute = 0.0, closed = 0.0;
  for (const auto& g : gaps) {
    brute = std::max(brute, g.brute);
    closed = std::max(closed, g.closed);
  }
  return {brute <= 1e-4 && closed <= 1e-9,
          "max |spectral - bruteforce| = " + num(brute, 3) + ", max |spectral - closed form| = " + num(closed, 3)};
}

// 6 ---------------------------------------------------------------------------
Vec3 random_direction(Rng& rng) {
  std::normal_distribution<double> g;
  Vec3 v{g(rng), g(rng), g(rng)};
  const double len = norm(v);
  return {v[0] / len, v[1] / len, v[2] / len};
}

Outcome filter_law() {
  Rng rng(606);
  std::gamma_distribution<double> weight(1.0, 1.0);
  std::uniform_real_distribution<double> nu_dist(0.0, 0.99);
  double law = 0.0, direction = 0.0;
  for (int i = 0; i < 500; ++i) {
    std::array<double, 4> p{};
    double total = 0.0;
    for (double& x : p) total += (x = weight(rng));
    CMat4 m;
    const Bell bells[4] = {Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus};
    for (int k = 0; k < 4; ++k) m += (p[k] / total) * bell_state(bells[k]).matrix();
    const DensityMatrix rho0(m);
    const double nu = nu_dist(rng);
    const LocalFilter f{nu, random_direction(rng), 1.0};
    const CMat2 fm = filter_matrix(f);
    const double det = std::abs(fm(0, 0) * fm(1, 1) - fm(0, 1) * fm(1, 0));
    const double c = concurrence(apply_filter_a(rho0, f));
    law = std::max(law, std::abs(c - concurrence(rho0) * det / filter_success_probability_a(rho0, f)));
    for (int k = 0; k < 3; ++k) {
      const LocalFilter g{nu, random_direction(rng), 1.0};
      direction = std::max(direction, std::abs(c - concurrence(apply_filter_a(rho0, g))));
    }
  }
  return {law <= 1e-10 && direction <= 1e-10,
          "max law residual " + num(law, 3) + ", max direction spread " + num(direction, 3)};
}

// 7 ---------------------------------------------------------------------------
DensityMatrix random_separable(Rng& rng) {
  std::uniform_int_distribution<int> terms(1, 4);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::normal_distribution<double> g;
  const auto qubit = [&]() {
    CMat2 a;
    for (auto& z : a.data) z = {g(rng), g(rng)};
    CMat2 r = a * a.adjoint();
    r *= 1.0 / r.trace().real();
    return r;
  };
  const int k = terms(rng);
  CMat4 m;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double p = w(rng);
    m += p * kron(qubit(), qubit());
    total += p;
  }
  return DensityMatrix((1.0 / total) * m);
}

Outcome witness_soundness_power() {
  struct Built {
    bool candidate = false;
    bool detected = false;
    FidelityWitness w;
  };
  const auto built = map_indexed<Built>(
      600,
      [](std::size_t i) {
        Built b;
        const DensityMatrix rho = random_state(derive_seed(7007, i), 1 + static_cast<int>(i % 4));
        if (fef_spectral(rho) <= 0.51) return b;
        FefSearchOptions opts;
        opts.seed = derive_seed(7008, i);
        opts.parallel = false;
        b.candidate = true;
        b.w = build_witness(fef_bruteforce(rho, opts).best.state());
        b.detected = witness_value(b.w, rho) < 0.0;
        return b;
      },
      Exec::Parallel);
  std::vector<FidelityWitness> witnesses;
  int candidates = 0, detected = 0;
  for (const auto& b : built) {
    if (!b.candidate) continue;
    ++candidates;
    detected += b.detected ? 1 : 0;
    witnesses.push_back(b.w);
  }
  Rng rng(7009);
  double min_value = 1.0;
  for (int i = 0; i < 10000; ++i) {
    const DensityMatrix rho = random_separable(rng);
    for (const auto& w : witnesses) min_value = std::min(min_value, witness_value(w, rho));
  }
  return {candidates > 0 && detected == candidates && min_value >= -1e-9,
          std::to_string(detected) + "/" + std::to_string(candidates) + " states with F > 0.51 detected; " +
              std::to_string(witnesses.size()) + " witnesses, min over 10000 separable states = " + num(min_value, 4)};
}

// 8 ---------------------------------------------------------------------------
Outcome tomography_round_trip() {
  TomoConfig cfg;
  cfg.gates = 50'000'000;
  cfg.pair_rate = 0.01;
  cfg.efficiency = 0.2;
  cfg.dark_prob = 4e-5;
  cfg.seed = 8008;
  const CountModel model = CountModel::from(cfg);
  constexpr int points = 18;  // nu_A = 0.054, 0.079, ..., 0.479
  struct Point {
    double nu = 0.0;
    ErrorBars bars;
  };
  const auto sweep = map_indexed<Point>(
      points,
      [&](std::size_t i) {
        Point p;
        p.nu = 0.054 + 0.025 * static_cast<double>(i);
        const DensityMatrix truth = filtered_state(SingleFilterScenario{kTheta, p.nu});
        const auto records = simulate_counts(truth, model, cfg.gates, derive_seed(cfg.seed, i), Sampling::Poisson);
        p.bars = metrics_with_errorbars(records, model, 50, derive_seed(cfg.seed + 1, i), Exec::Serial);
        return p;
      },
      Exec::Parallel);

  double max_c_std = 0.0, max_f_std = 0.0;
  int nonconverged = 0;
  for (const auto& p : sweep) {
    max_c_std = std::max(max_c_std, p.bars.concurrence_std);
    max_f_std = std::max(max_f_std, p.bars.fef_std);
    nonconverged += p.bars.nonconverged;
  }
  // Least-squares line through the four points around the last sign change.
  int bracket = -1;
  for (int i = 0; i + 1 < points; ++i)
    if ((sweep[i].bars.point.fef - 0.5) * (sweep[i + 1].bars.point.fef - 0.5) <= 0.0) bracket = i;
  if (bracket < 0) return {false, "reconstructed FEF never crosses 1/2"};
  const int lo = std::clamp(bracket - 1, 0, points - 4);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = lo; i < lo + 4; ++i) {
    const double x = sweep[i].nu, y = sweep[i].bars.point.fef;
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / 4;
  const double crossing = (0.5 - intercept) / slope;
  const double truth = critical_nu_single(kTheta);
  return {std::abs(crossing - truth) <= 0.01 && max_c_std < 0.01 && max_f_std < 0.01,
          "crossing " + num(crossing, 5) + " vs true " + num(truth, 5) + "; max std C " + num(max_c_std, 3) +
              ", F " + num(max_f_std, 3) + "; non-converged resamples " + std::to_string(nonconverged)};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "extremal unfaithful point", 1.0, extremal_point},
      {2, "single-filter unfaithfulness threshold", 1.0, single_threshold},
      {3, "anti-correlation regime", 1.0, anti_correlation},
      {4, "z orientation never unfaithful", 10.0, z_never_unfaithful},
      {5, "observation oracle", 120.0, observation_oracle},
      {6, "concurrence filter law", 0.0, filter_law},
      {7, "witness soundness and power", 120.0, witness_soundness_power},
      {8, "tomography round trip", 600.0, tomography_round_trip},
  };
  std::vector<bool> passed(10, false);
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit_s <= 0 || secs < c.time_limit_s;
    const bool ok = o.pass && in_time;
    passed[c.id] = ok;
    failures += ok ? 0 : 1;
    std::printf("%s %d %s: %s [%.2f s%s]\n", ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  // 9: the measured density matrices are not published; the regimes they
  // illustrate are those checked by 2, 3, 4 and 8.
  const bool regimes = passed[2] && passed[3] && passed[4] && passed[8];
  std::printf("%s 9 experimental regimes covered by criteria 2, 3, 4, 8: %s\n", regimes ? "PASS" : "FAIL",
              regimes ? "all pass" : "not all of them pass");
  failures += regimes ? 0 : 1;
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
