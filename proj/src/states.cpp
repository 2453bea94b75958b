#include "faithful/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "faithful/rng.hpp"
#include "faithful/tolerances.hpp"

namespace faithful {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

}  // namespace

DensityMatrix::DensityMatrix(const CMat4& m) : m_(m) {
  const auto& tol = tolerances();
  if (!m.all_finite()) throw UnphysicalState("density matrix has non-finite entries");
  const double herm = hermiticity_error(m);
  if (herm > tol.hermitian)
    throw UnphysicalState("density matrix is not Hermitian (max |rho - rho^H| = " + fmt(herm) + ")");
  const cplx tr = m.trace();
  if (std::abs(tr - 1.0) > tol.trace)
    throw UnphysicalState("density matrix trace is " + fmt(tr.real()) + ", expected 1");
  const double min_ev = herm_eigenvalues(m)[3];
  if (min_ev < tol.min_eigenvalue)
    throw UnphysicalState("density matrix is not positive semidefinite (min eigenvalue " +
                          fmt(min_ev) + ")");
  m_ = 0.5 * (m + m.adjoint());
}

DensityMatrix::DensityMatrix() : m_(0.25 * CMat4::identity()) {}

double DensityMatrix::purity() const {
  double p = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) p += std::norm(m_(i, j));
  return p;
}

CMat2 DensityMatrix::reduced_a() const {
  CMat2 out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) out(i, j) += m_(2 * i + k, 2 * j + k);
  return out;
}

CMat2 DensityMatrix::reduced_b() const {
  CMat2 out;
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 2; ++l)
      for (std::size_t i = 0; i < 2; ++i) out(k, l) += m_(2 * i + k, 2 * i + l);
  return out;
}

double DensityMatrix::expectation(const CVec4& psi) const { return inner(psi, m_ * psi).real(); }

bool BellDiagonalParams::is_physical() const {
  const double l1 = 0.25 * (1 + t1 - t2 + t3);
  const double l2 = 0.25 * (1 + t1 + t2 - t3);
  const double l3 = 0.25 * (1 - t1 + t2 + t3);
  const double l4 = 0.25 * (1 - t1 - t2 - t3);
  return std::min({l1, l2, l3, l4}) >= -1e-12;
}

bool BellDiagonalParams::is_separable() const {
  return std::abs(t1) + std::abs(t2) + std::abs(t3) <= 1.0;
}

Rank2BDParams Rank2BDParams::from_cos2theta(double c) {
  if (!(c > -1.0 && c <= 1.0)) throw std::invalid_argument("cos(2 theta) must lie in (-1, 1]");
  return Rank2BDParams{0.5 * std::acos(c)};
}

double Rank2BDParams::cos2theta() const { return std::cos(2.0 * theta); }

BellDiagonalParams Rank2BDParams::correlations() const {
  const double c = cos2theta();
  return {-c, c, 1.0};
}

CVec4 bell_vector(Bell which) {
  const double h = std::numbers::sqrt2 / 2.0;
  switch (which) {
    case Bell::PhiPlus: return {h, 0.0, 0.0, h};
    case Bell::PhiMinus: return {h, 0.0, 0.0, -h};
    case Bell::PsiPlus: return {0.0, h, h, 0.0};
    case Bell::PsiMinus: return {0.0, h, -h, 0.0};
  }
  throw std::invalid_argument("unknown Bell state");
}

DensityMatrix pure_state(const CVec4& psi) {
  const double n = norm(psi);
  if (!(n > 0.0)) throw UnphysicalState("zero state vector");
  CVec4 v = psi;
  for (auto& z : v) z /= n;
  return DensityMatrix(outer(v, v));
}

CMat4 pauli_matrix(const PauliRep& p) {
  CMat4 m = kron(sigma(0), sigma(0));
  for (std::size_t n = 0; n < 3; ++n) {
    m += p.r[n] * kron(sigma(n + 1), sigma(0));
    m += p.s[n] * kron(sigma(0), sigma(n + 1));
    for (std::size_t k = 0; k < 3; ++k) {
      if (p.t(n, k) != 0.0) m += p.t(n, k) * kron(sigma(n + 1), sigma(k + 1));
    }
  }
  return 0.25 * m;
}

DensityMatrix from_pauli(const PauliRep& p) { return DensityMatrix(pauli_matrix(p)); }

PauliRep pauli_coefficients(const CMat4& m) {
  auto coeff = [&](std::size_t a, std::size_t b) {
    // Tr(m sigma_a x sigma_b) without forming the product.
    const CMat4 op = kron(sigma(a), sigma(b));
    cplx s = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) s += m(i, j) * op(j, i);
    return s.real();
  };
  PauliRep p;
  for (std::size_t n = 0; n < 3; ++n) {
    p.r[n] = coeff(n + 1, 0);
    p.s[n] = coeff(0, n + 1);
    for (std::size_t k = 0; k < 3; ++k) p.t(n, k) = coeff(n + 1, k + 1);
  }
  return p;
}

PauliRep to_pauli(const DensityMatrix& rho) { return pauli_coefficients(rho.matrix()); }

DensityMatrix bell_state(Bell which) {
  const CVec4 v = bell_vector(which);
  return DensityMatrix(outer(v, v));
}

DensityMatrix rank2_bd(const Rank2BDParams& p) {
  if (!(p.theta >= 0.0 && p.theta < std::numbers::pi / 2.0))
    throw std::invalid_argument("rank2_bd: theta must lie in [0, pi/2)");
  const double s2 = std::sin(p.theta) * std::sin(p.theta);
  const double c2 = std::cos(p.theta) * std::cos(p.theta);
  const CVec4 phi_p = bell_vector(Bell::PhiPlus);
  const CVec4 phi_m = bell_vector(Bell::PhiMinus);
  return DensityMatrix(s2 * outer(phi_p, phi_p) + c2 * outer(phi_m, phi_m));
}

DensityMatrix bell_diagonal(const BellDiagonalParams& p) {
  if (!p.is_physical())
    throw UnphysicalState("Bell-diagonal coefficients give a negative Bell-basis weight");
  PauliRep rep;
  rep.t = RMat3::diag({p.t1, p.t2, p.t3});
  return from_pauli(rep);
}

DensityMatrix random_state(std::uint64_t seed, int rank) {
  if (rank < 1 || rank > 4) throw std::invalid_argument("random_state: rank must be 1..4");
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix<4, 4> g;  // only the first `rank` columns are populated
  for (std::size_t i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = cplx(re, im);
    }
  CMat4 m = g * g.adjoint();
  const double tr = m.trace().real();
  return DensityMatrix((1.0 / tr) * m);
}

CMat2 random_unitary2(std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double q[4];
  double n = 0.0;
  for (double& x : q) {
    x = gauss(rng);
    n += x * x;
  }
  n = std::sqrt(n);
  const cplx a(q[0] / n, q[1] / n), b(q[2] / n, q[3] / n);
  CMat2 u;
  u(0, 0) = a;
  u(0, 1) = b;
  u(1, 0) = -std::conj(b);
  u(1, 1) = std::conj(a);
  return u;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  const auto ev = herm_eigenvalues(a.matrix() - b.matrix());
  double s = 0.0;
  for (double x : ev) s += std::abs(x);
  return 0.5 * s;
}

}  // namespace faithful
