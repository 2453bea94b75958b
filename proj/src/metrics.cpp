#include "faithful/metrics.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

#include "faithful/kernels.hpp"
#include "faithful/optimize.hpp"
#include "faithful/rng.hpp"
#include "faithful/tolerances.hpp"

namespace faithful {

double concurrence(const DensityMatrix& rho) {
  // The square roots of the eigenvalues of rho * rho~ are the singular values
  // of sqrt(rho) (Y x Y) conj(sqrt(rho)). Taking them directly avoids the
  // sqrt(eps) noise that near-zero eigenvalues of rho * rho~ would produce.
  const EigenSpectrum spec = herm_eigen(rho.matrix());
  const double cutoff = 16.0 * std::numeric_limits<double>::epsilon();
  CMat4 root;
  for (std::size_t k = 0; k < 4; ++k) {
    const double p = spec.eigenvalues[k];
    if (p <= cutoff) continue;
    root += std::sqrt(p) * outer(spec.eigenvectors[k], spec.eigenvectors[k]);
  }
  const CMat4 yy = kron(sigma(2), sigma(2));
  const auto lambda = singular_values(root * yy * root.conj());
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

CMat4 x2(const DensityMatrix& rho) {
  const CMat4 local = kron(rho.reduced_a(), sigma(0)) + kron(sigma(0), rho.reduced_b());
  return rho.matrix() - 0.5 * local + 0.5 * CMat4::identity();
}

std::array<double, 4> x2_spectrum(const DensityMatrix& rho) { return herm_eigenvalues(x2(rho)); }

double fef_spectral(const DensityMatrix& rho) { return x2_spectrum(rho)[0]; }

double fef_closed_form(const Vec3& t) {
  const double a0 = std::abs(t[0]), a1 = std::abs(t[1]), a2 = std::abs(t[2]);
  const double sum = a0 + a1 + a2;
  const double det = t[0] * t[1] * t[2];
  if (det <= 0.0) return 0.25 * (1.0 + sum);
  return 0.25 * (1.0 + sum - 2.0 * std::min({a0, a1, a2}));
}

Vec3 rotated_correlations(const DensityMatrix& rho) { return svd3(to_pauli(rho).t).d; }

std::array<double, 4> bell_diag_eigenvalues(const Vec3& t) {
  return {0.25 * (1 + t[0] - t[1] + t[2]), 0.25 * (1 + t[0] + t[1] - t[2]),
          0.25 * (1 - t[0] + t[1] + t[2]), 0.25 * (1 - t[0] - t[1] - t[2])};
}

CMat2 MaxEntParam::unitary() const {
  const auto [a, b, g] = angles;
  CMat2 u;
  u(0, 0) = std::polar(std::cos(b), a);
  u(0, 1) = std::polar(std::sin(b), g);
  u(1, 0) = -std::polar(std::sin(b), -g);
  u(1, 1) = std::polar(std::cos(b), -a);
  return u;
}

CVec4 MaxEntParam::state() const {
  // (U x 1)|Phi+> has amplitude U(i,k)/sqrt(2) on |ik>.
  const CMat2 u = unitary();
  const double h = std::numbers::sqrt2 / 2.0;
  return {h * u(0, 0), h * u(0, 1), h * u(1, 0), h * u(1, 1)};
}

MaxEntParam MaxEntParam::haar(std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double q0 = gauss(rng), q1 = gauss(rng), q2 = gauss(rng), q3 = gauss(rng);
  // Normalised Gaussian quaternion (q0 + i q1, q2 + i q3) is Haar on SU(2).
  MaxEntParam p;
  p.angles = {std::atan2(q1, q0), std::atan2(std::hypot(q2, q3), std::hypot(q0, q1)), std::atan2(q3, q2)};
  return p;
}

FefSearch fef_bruteforce(const DensityMatrix& rho, const FefSearchOptions& opts) {
  if (opts.budget < 1000) throw std::invalid_argument("fef_bruteforce: budget must be at least 1000");
  const SampleArgMax best =
      fef_sample_argmax(rho, opts.budget, opts.seed, opts.parallel ? Exec::Parallel : Exec::Serial);
  const MaxEntParam start = MaxEntParam::haar(derive_seed(opts.seed, best.index));

  const auto objective = [&](const std::array<double, 3>& x) {
    return rho.expectation(MaxEntParam{x}.state());
  };
  const NelderMeadResult nm =
      nelder_mead_max(objective, start.angles, 0.1, opts.refine_iterations, opts.simplex_tolerance);

  FefSearch out;
  out.refine_iterations = nm.iterations;
  if (nm.value >= best.value) {
    out.fef = nm.value;
    out.best = MaxEntParam{nm.x};
  } else {
    out.fef = best.value;
    out.best = start;
  }
  return out;
}

bool is_faithful(const DensityMatrix& rho) {
  return fef_spectral(rho) > 0.5 + tolerances().faithful_tie;
}

CMat4 partial_transpose_b(const DensityMatrix& rho) {
  CMat4 out;
  const CMat4& m = rho.matrix();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = m(2 * i + l, 2 * j + k);
  return out;
}

bool ppt_entangled(const DensityMatrix& rho) {
  return herm_eigenvalues(partial_transpose_b(rho))[3] < -tolerances().ppt;
}

std::array<double, 2> schmidt_coefficients_sq(const CVec4& psi) {
  // Coefficient matrix M(i,k) = psi[2i+k]; squared singular values solve
  // x^2 - |M|_F^2 x + |det M|^2 = 0.
  const double fro = std::norm(psi[0]) + std::norm(psi[1]) + std::norm(psi[2]) + std::norm(psi[3]);
  const double det2 = std::norm(psi[0] * psi[3] - psi[1] * psi[2]);
  const double disc = std::sqrt(std::max(0.0, fro * fro - 4.0 * det2));
  const double big = 0.5 * (fro + disc);
  return {big, fro > 0.0 ? det2 / big : 0.0};
}

FidelityWitness build_witness(const CVec4& psi) {
  if (std::abs(norm(psi) - 1.0) > tolerances().unit_norm)
    throw std::invalid_argument("build_witness: reference state must be normalised");
  const auto lambda = schmidt_coefficients_sq(psi);
  if (lambda[1] <= 1e-12)
    throw std::invalid_argument("build_witness: reference state is a product state and detects nothing");
  return FidelityWitness{psi, lambda[0]};
}

double witness_value(const FidelityWitness& w, const DensityMatrix& rho) {
  return w.alpha - rho.expectation(w.psi);
}

MetricsReport analyze(const DensityMatrix& rho, const AnalyzeOptions& opts) {
  MetricsReport r;
  r.concurrence = concurrence(rho);
  r.x2_spectrum = x2_spectrum(rho);
  r.fef = r.x2_spectrum[0];
  r.faithful = r.fef > 0.5 + tolerances().faithful_tie;
  r.faithful_boundary = std::abs(r.fef - 0.5) <= tolerances().faithful_tie;
  r.ppt_entangled = ppt_entangled(rho);
  if (opts.with_witness) {
    const FefSearch search = fef_bruteforce(rho, opts.search);
    r.witness_value = witness_value(build_witness(search.best.state()), rho);
  }
  return r;
}

}  // namespace faithful
