#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "faithful/linalg.hpp"

namespace faithful {

/// Raised when a matrix or parameter set does not describe a physical state.
class UnphysicalState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two-qubit density matrix in the computational basis |00>,|01>,|10>,|11>.
/// Always Hermitian, unit-trace and PSD within the configured tolerances.
class DensityMatrix {
 public:
  /// Validates and stores `m`; throws UnphysicalState naming the violated
  /// invariant (hermiticity, trace, positivity, finiteness).
  explicit DensityMatrix(const CMat4& m);

  /// Maximally mixed state.
  DensityMatrix();

  const CMat4& matrix() const { return m_; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  /// Tr(rho^2)
  double purity() const;

  /// Reduced state of qubit A / qubit B.
  CMat2 reduced_a() const;
  CMat2 reduced_b() const;

  /// <psi|rho|psi>
  double expectation(const CVec4& psi) const;

 private:
  CMat4 m_;
};

/// rho = 1/4 (1x1 + r.sigma x 1 + 1 x s.sigma + sum t_nm sigma_n x sigma_m).
struct PauliRep {
  Vec3 r{};
  Vec3 s{};
  RMat3 t;
};

/// Bell-diagonal correlation coefficients (r = s = 0, T = diag(t1, t2, t3)).
struct BellDiagonalParams {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;

  /// True iff all four Bell-basis weights are >= -1e-12.
  bool is_physical() const;
  /// sum |t_j| <= 1
  bool is_separable() const;
};

/// sin^2(theta)|Phi+><Phi+| + cos^2(theta)|Phi-><Phi-|, theta in [0, pi/2).
struct Rank2BDParams {
  double theta = 0.0;

  /// Parameters with cos(2 theta) = c, c in (-1, 1].
  static Rank2BDParams from_cos2theta(double c);
  double cos2theta() const;
  BellDiagonalParams correlations() const;  // (-cos 2θ, cos 2θ, 1)
};

enum class Bell { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

CVec4 bell_vector(Bell which);
DensityMatrix pure_state(const CVec4& psi);  // psi is normalised internally

DensityMatrix from_pauli(const PauliRep& p);
PauliRep to_pauli(const DensityMatrix& rho);
/// Pauli coefficients of any Hermitian matrix (no validation).
PauliRep pauli_coefficients(const CMat4& m);
/// The matrix 1/4(...) built from `p` without the physicality check.
CMat4 pauli_matrix(const PauliRep& p);

DensityMatrix bell_state(Bell which);
DensityMatrix rank2_bd(const Rank2BDParams& p);
DensityMatrix bell_diagonal(const BellDiagonalParams& p);

/// Normalised G G^dagger with G a 4 x rank matrix of independent standard
/// complex Gaussian entries. Deterministic for a given seed.
DensityMatrix random_state(std::uint64_t seed, int rank);

/// Haar-random 2x2 unitary, deterministic for a given seed.
CMat2 random_unitary2(std::uint64_t seed);

/// Trace distance 1/2 ||a - b||_1.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace faithful
