#pragma once

// Simulated 36-setting polarisation tomography: coincidence-count model,
// linear inversion and maximum-likelihood reconstruction with parametric
// bootstrap error bars.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "faithful/kernels.hpp"
#include "faithful/metrics.hpp"
#include "faithful/states.hpp"

namespace faithful {

/// Projector labels. H = |0>, V = |1>, D/A = (|0> +- |1>)/sqrt2,
/// R/L = (|0> +- i|1>)/sqrt2.
enum class Pol { H, V, D, A, R, L };

char pol_label(Pol p);
Pol pol_from_label(char c);  // throws std::invalid_argument
CVec2 pol_vector(Pol p);

struct MeasurementSetting {
  Pol a = Pol::H;
  Pol b = Pol::H;

  CVec4 vector() const;  // |a> x |b>
  std::string label() const;  // e.g. "HV"
  bool operator==(const MeasurementSetting&) const = default;
};

/// The 36 settings in a fixed order: a outer, b inner, each over H V D A R L.
const std::array<MeasurementSetting, 36>& all_settings();

/// Position of `s` in all_settings().
std::size_t setting_index(const MeasurementSetting& s);

struct CountRecord {
  MeasurementSetting setting;
  std::uint64_t gates = 1;
  std::uint64_t coincidences = 0;
};

struct TomoConfig {
  double pair_rate = 0.01;    // mean pairs per gate, (0, 0.2)
  double efficiency = 0.2;    // per arm, (0, 1]
  double dark_prob = 4e-5;    // per gate, >= 0
  std::uint64_t gates = 50'000'000;
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument

  /// pair_rate * efficiency^2
  double signal_per_gate() const;
  /// 2 dark (pair_rate efficiency + dark)
  double accidental_per_gate() const;
};

/// Per-gate coincidence probability model: mean = gates (signal p + background).
struct CountModel {
  double signal = 0.0;
  double background = 0.0;

  static CountModel from(const TomoConfig& cfg) { return {cfg.signal_per_gate(), cfg.accidental_per_gate()}; }
};

/// Expected coincidences per setting, in all_settings() order. Linear in rho.
std::array<double, 36> expected_means(const DensityMatrix& rho, const CountModel& model, std::uint64_t gates);

enum class Sampling { Poisson, ExactMeans };

/// One record per setting in all_settings() order. Poisson counts are drawn
/// from a generator seeded with `seed`; ExactMeans rounds the means.
std::vector<CountRecord> simulate_counts(const DensityMatrix& rho, const TomoConfig& cfg,
                                         Sampling sampling = Sampling::Poisson);

/// Same, with an explicit model and seed (used by the bootstrap).
std::vector<CountRecord> simulate_counts(const DensityMatrix& rho, const CountModel& model, std::uint64_t gates,
                                         std::uint64_t seed, Sampling sampling);

/// Checks that `records` hold each of the 36 settings exactly once, with
/// gates > 0 and coincidences <= gates, and returns them in all_settings()
/// order. Errors name the missing or duplicated setting.
std::vector<CountRecord> canonical_records(const std::vector<CountRecord>& records);

/// Pauli coefficients from normalised count ratios per basis pair. When a
/// model is given its accidental rate is subtracted first (clipped at 0).
/// The result may be unphysical.
PauliRep linear_inversion(const std::vector<CountRecord>& records,
                          const std::optional<CountModel>& model = std::nullopt);

/// Projection of a Hermitian, unit-trace matrix onto the states: negative
/// eigenvalues clipped, then renormalised.
DensityMatrix project_to_state(const CMat4& m);

enum class MleStatus {
  Converged,
  IterationCap,
  Stalled,  // no descent step found before the gradient tolerance was met
};

const char* to_string(MleStatus s);

struct MleOptions {
  double gradient_tol = 1e-7;  // on the log-likelihood gradient divided by total counts
  int max_iterations = 100'000;
  /// Apply the pi/2 rotation [[0,-1],[1,0]] on both qubits to the estimate,
  /// for data recorded in a rotated HV basis.
  bool rotate_hv = false;
};

struct MleResult {
  DensityMatrix rho;
  MleStatus status = MleStatus::Converged;
  int iterations = 0;
  double log_likelihood = 0.0;
  double gradient_norm = 0.0;  // normalised, as in MleOptions::gradient_tol
  CountModel model;            // model used; signal is fitted when none was given
  bool likelihood_monotone = true;
};

/// Poisson maximum-likelihood estimate over rho = G^dagger G / Tr(G^dagger G),
/// G lower triangular. Without a model the signal intensity is profiled out
/// (background 0).
MleResult mle_reconstruct(const std::vector<CountRecord>& records,
                          const std::optional<CountModel>& model = std::nullopt,
                          const MleOptions& opts = {});

/// Poisson log-likelihood sum k ln mu - mu (up to the k! constant).
double log_likelihood(const DensityMatrix& rho, const std::vector<CountRecord>& records, const CountModel& model);

struct ErrorBars {
  MetricsReport point;        // metrics of the reconstruction itself
  double concurrence_mean = 0.0;
  double concurrence_std = 0.0;
  double fef_mean = 0.0;
  double fef_std = 0.0;
  int resamples = 0;
  int nonconverged = 0;       // resamples whose MLE did not converge
};

/// Parametric bootstrap: re-simulate counts from the reconstruction with
/// per-resample seeds derive_seed(seed, i), reconstruct, and report mean and
/// standard deviation of concurrence and FEF. resamples >= 50.
ErrorBars metrics_with_errorbars(const std::vector<CountRecord>& records, const std::optional<CountModel>& model,
                                 int resamples, std::uint64_t seed, Exec exec = Exec::Parallel,
                                 const MleOptions& opts = {});

}  // namespace faithful
