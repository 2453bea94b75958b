#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "faithful/linalg.hpp"
#include "faithful/states.hpp"

namespace faithful {

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), l_i the descending square
/// roots of the eigenvalues of rho * rho~.
double concurrence(const DensityMatrix& rho);

/// rho - 1/2 (rho_A x 1 + 1 x rho_B) + 1/2 (1 x 1). Same correlation matrix
/// as rho with both local Bloch vectors removed.
CMat4 x2(const DensityMatrix& rho);

/// Descending spectrum of x2(rho).
std::array<double, 4> x2_spectrum(const DensityMatrix& rho);

/// Fully entangled fraction as the largest eigenvalue of x2(rho).
double fef_spectral(const DensityMatrix& rho);

/// FEF from the signed diagonal of a locally-rotated correlation matrix:
///   det <= 0 : 1/4 (1 + sum |t_i|)
///   det  > 0 : 1/4 (1 + max over k of (sum |t_i| - 2|t_k|))
double fef_closed_form(const Vec3& t_diag);

/// Signed diagonal of T after proper local rotations (svd3 of to_pauli(rho).t).
Vec3 rotated_correlations(const DensityMatrix& rho);

/// Bell-diagonal weights for T = diag(t), in the printed order:
/// (1+t1-t2+t3, 1+t1+t2-t3, 1-t1+t2+t3, 1-t1-t2-t3) / 4.
std::array<double, 4> bell_diag_eigenvalues(const Vec3& t_diag);

/// Maximally entangled state (U x 1)|Phi+> with
/// U = [[e^{ia} cos b, e^{ig} sin b], [-e^{-ig} sin b, e^{-ia} cos b]].
struct MaxEntParam {
  std::array<double, 3> angles{};  // (a, b, g)

  CMat2 unitary() const;
  CVec4 state() const;
  /// Haar-distributed draw (uniform over SU(2)).
  static MaxEntParam haar(std::uint64_t seed);
};

struct FefSearch {
  double fef = 0.0;
  MaxEntParam best;
  int refine_iterations = 0;
};

struct FefSearchOptions {
  int budget = 4096;          // Haar samples, >= 1000
  std::uint64_t seed = 20211;
  int refine_iterations = 200;
  double simplex_tolerance = 1e-10;
  bool parallel = true;
};

/// Maximises <psi|rho|psi> over maximally entangled states: seeded Haar
/// sampling followed by Nelder-Mead refinement from the best sample. Always a
/// lower bound on the true FEF.
FefSearch fef_bruteforce(const DensityMatrix& rho, const FefSearchOptions& opts = {});

/// FEF > 1/2 strictly; a tie within the configured tolerance counts as
/// unfaithful.
bool is_faithful(const DensityMatrix& rho);

/// Partial transpose on qubit B.
CMat4 partial_transpose_b(const DensityMatrix& rho);

/// Minimum partial-transpose eigenvalue below -tolerance.
bool ppt_entangled(const DensityMatrix& rho);

/// W = alpha 1 - |psi><psi|, alpha the largest squared Schmidt coefficient.
struct FidelityWitness {
  CVec4 psi{};
  double alpha = 0.0;
};

/// Throws std::invalid_argument for non-normalised or product psi.
FidelityWitness build_witness(const CVec4& psi);

/// Squared Schmidt coefficients of a normalised two-qubit pure state, descending.
std::array<double, 2> schmidt_coefficients_sq(const CVec4& psi);

/// Tr(rho W) = alpha - <psi|rho|psi>; negative certifies entanglement.
double witness_value(const FidelityWitness& w, const DensityMatrix& rho);

struct MetricsReport {
  double concurrence = 0.0;
  double fef = 0.25;
  bool faithful = false;
  bool faithful_boundary = false;  // |fef - 1/2| within tolerance
  bool ppt_entangled = false;
  std::array<double, 4> x2_spectrum{};
  std::optional<double> witness_value;  // witness from the FEF maximiser
};

struct AnalyzeOptions {
  bool with_witness = true;
  FefSearchOptions search;
};

MetricsReport analyze(const DensityMatrix& rho, const AnalyzeOptions& opts = {});

}  // namespace faithful
