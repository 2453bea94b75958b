#pragma once

#include "faithful/linalg.hpp"
#include "faithful/states.hpp"

namespace faithful {

/// Hermitian local filter mu (1 + nu n.sigma). mu is carried for
/// completeness; every normalised output is independent of it.
struct LocalFilter {
  double nu = 0.0;
  Vec3 n_hat{1.0, 0.0, 0.0};
  double mu = 1.0;

  static LocalFilter along_x(double nu) { return {nu, {1.0, 0.0, 0.0}, 1.0}; }
  static LocalFilter along_z(double nu) { return {nu, {0.0, 0.0, 1.0}, 1.0}; }

  /// Throws std::invalid_argument if nu is outside [0, 1], n_hat is not a
  /// unit vector or mu is not positive.
  void validate() const;
};

/// Phase damping about `axis`: coherences between the two eigenstates of
/// axis.sigma on qubit A are multiplied by (1 - strength).
struct DecoherenceParams {
  double strength = 0.0;
  Vec3 axis{0.0, 0.0, 1.0};

  void validate() const;
};

CMat2 filter_matrix(const LocalFilter& f);

/// Unnormalised conjugation of one side, then renormalisation. Throws
/// NumericalError when the surviving trace is below the configured floor.
DensityMatrix apply_filter_a(const DensityMatrix& rho, const LocalFilter& f);
DensityMatrix apply_filter_b(const DensityMatrix& rho, const LocalFilter& f);

/// Surviving probability Tr[(f^dagger f x 1) rho] for a filter on qubit A.
double filter_success_probability_a(const DensityMatrix& rho, const LocalFilter& f);

DensityMatrix dephase(const DensityMatrix& rho, const DecoherenceParams& d);

/// (ua x ub) rho (ua x ub)^dagger. Throws std::invalid_argument on a
/// non-unitary factor.
DensityMatrix local_rotate(const DensityMatrix& rho, const CMat2& ua, const CMat2& ub);

/// Hadamard gate, handy for basis changes.
CMat2 hadamard();

/// Choi matrix of dephase(., d) acting on qubit A (4x4, unnormalised).
CMat4 dephase_choi(const DecoherenceParams& d);

}  // namespace faithful
