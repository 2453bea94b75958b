#include "faithful/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "faithful/metrics.hpp"
#include "faithful/rng.hpp"

namespace faithful {

int parallel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

SampleArgMax better(const SampleArgMax& a, const SampleArgMax& b) {
  if (a.value != b.value) return a.value > b.value ? a : b;
  return a.index < b.index ? a : b;
}

}  // namespace

SampleArgMax fef_sample_argmax(const DensityMatrix& rho, int budget, std::uint64_t seed, Exec exec) {
  SampleArgMax best{0, -1.0};
  const auto eval = [&](std::size_t i) {
    const CVec4 psi = MaxEntParam::haar(derive_seed(seed, i)).state();
    return SampleArgMax{i, rho.expectation(psi)};
  };
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(budget); ++i) best = better(best, eval(i));
    return best;
  }
#pragma omp parallel
  {
    SampleArgMax local{0, -1.0};
#pragma omp for schedule(static) nowait
    for (int i = 0; i < budget; ++i) local = better(local, eval(static_cast<std::size_t>(i)));
#pragma omp critical
    best = better(best, local);
  }
  return best;
}

std::vector<double> batch_fef_spectral(const std::vector<DensityMatrix>& states, Exec exec) {
  return map_indexed<double>(states.size(), [&](std::size_t i) { return fef_spectral(states[i]); }, exec);
}

std::vector<double> batch_concurrence(const std::vector<DensityMatrix>& states, Exec exec) {
  return map_indexed<double>(states.size(), [&](std::size_t i) { return concurrence(states[i]); }, exec);
}

std::vector<DensityMatrix> batch_random_states(std::size_t n, std::uint64_t seed, Exec exec) {
  return map_indexed<DensityMatrix>(
      n, [&](std::size_t i) { return random_state(derive_seed(seed, i), 1 + static_cast<int>(i % 4)); },
      exec);
}

}  // namespace faithful
