#pragma once

// Data-parallel kernels. Every kernel takes an Exec policy: Exec::Serial is
// the reference loop kept for testing, Exec::Parallel distributes the same
// per-item work with OpenMP. Per-item work never shares mutable state and
// results are written by index, so both policies give identical output.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "faithful/states.hpp"

namespace faithful {

enum class Exec { Serial, Parallel };

/// Number of OpenMP threads the parallel policy will use (1 without OpenMP).
int parallel_threads();

/// out[i] = f(i) for i in [0, n). `f` must be safe to call concurrently.
template <class Result, class F>
std::vector<Result> map_indexed(std::size_t n, F&& f, Exec exec) {
  std::vector<Result> out(n);
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  return out;
}

struct SampleArgMax {
  std::size_t index = 0;
  double value = 0.0;
};

/// Best of `budget` Haar-random maximally entangled overlaps <psi_i|rho|psi_i>,
/// sample i drawn from derive_seed(seed, i). Ties resolve to the lowest index.
SampleArgMax fef_sample_argmax(const DensityMatrix& rho, int budget, std::uint64_t seed, Exec exec);

/// fef_spectral for each state.
std::vector<double> batch_fef_spectral(const std::vector<DensityMatrix>& states, Exec exec);

/// concurrence for each state.
std::vector<double> batch_concurrence(const std::vector<DensityMatrix>& states, Exec exec);

/// random_state(derive_seed(seed, i), 1 + i % 4) for i in [0, n).
std::vector<DensityMatrix> batch_random_states(std::size_t n, std::uint64_t seed, Exec exec);

}  // namespace faithful
