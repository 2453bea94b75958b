#pragma once

namespace faithful {

/// Every numerical threshold used by the library. Defaults are scaled from
/// double machine epsilon; override once at startup with set_tolerances().
struct Tolerances {
  double hermitian = 1e-9;        // max |a - a^dagger| accepted as Hermitian
  double trace = 1e-9;            // |Tr rho - 1|
  double min_eigenvalue = -1e-9;  // smallest accepted eigenvalue of a state
  double jacobi = 1e-15;          // off-diagonal stop for Jacobi sweeps (relative)
  double qr_deflation = 1e-15;    // subdiagonal deflation in Hessenberg QR (relative)
  double unit_norm = 1e-12;       // unit vectors / directions
  double unitary = 1e-10;         // ||U^dagger U - I||
  double concurrence_imag = 1e-8; // allowed |Im| of rho*rho~ eigenvalues
  double ppt = 1e-9;              // partial-transpose eigenvalue below -ppt is entangled
  double faithful_tie = 1e-9;     // |F - 1/2| within this is flagged as a boundary case
  double trace_floor = 1e-12;     // smallest surviving trace after filtering
};

const Tolerances& tolerances();

/// Not synchronised: call before any concurrent use of the library.
void set_tolerances(const Tolerances& t);

}  // namespace faithful
