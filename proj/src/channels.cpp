#include "faithful/channels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "faithful/tolerances.hpp"

namespace faithful {

namespace {

void require_unit(const Vec3& v, const char* what) {
  if (std::abs(norm(v) - 1.0) > tolerances().unit_norm)
    throw std::invalid_argument(std::string(what) + " must be a unit vector");
}

CMat2 n_dot_sigma(const Vec3& n) {
  return n[0] * sigma(1) + n[1] * sigma(2) + n[2] * sigma(3);
}

DensityMatrix normalised(const CMat4& unnormalised) {
  const double tr = unnormalised.trace().real();
  if (!(tr > tolerances().trace_floor))
    throw NumericalError("filter extinguishes the state (surviving trace " + std::to_string(tr) + ")");
  CMat4 m = (1.0 / tr) * unnormalised;
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

bool is_unitary(const CMat2& u) {
  return (u.adjoint() * u - CMat2::identity()).max_abs() <= tolerances().unitary;
}

}  // namespace

void LocalFilter::validate() const {
  if (!(nu >= 0.0 && nu <= 1.0)) throw std::invalid_argument("filter magnitude nu must lie in [0, 1]");
  if (!(mu > 0.0)) throw std::invalid_argument("filter scale mu must be positive");
  require_unit(n_hat, "filter direction");
}

void DecoherenceParams::validate() const {
  if (!(strength >= 0.0 && strength <= 1.0))
    throw std::invalid_argument("decoherence strength must lie in [0, 1]");
  require_unit(axis, "decoherence axis");
}

CMat2 filter_matrix(const LocalFilter& f) {
  f.validate();
  return f.mu * (sigma(0) + f.nu * n_dot_sigma(f.n_hat));
}

DensityMatrix apply_filter_a(const DensityMatrix& rho, const LocalFilter& f) {
  if (f.nu == 0.0) return rho;
  const CMat4 k = kron(filter_matrix(f), sigma(0));
  return normalised(k * rho.matrix() * k.adjoint());
}

DensityMatrix apply_filter_b(const DensityMatrix& rho, const LocalFilter& f) {
  if (f.nu == 0.0) return rho;
  const CMat4 k = kron(sigma(0), filter_matrix(f));
  return normalised(k * rho.matrix() * k.adjoint());
}

double filter_success_probability_a(const DensityMatrix& rho, const LocalFilter& f) {
  const CMat2 fm = filter_matrix(f);
  const CMat4 k = kron(fm.adjoint() * fm, sigma(0));
  return (k * rho.matrix()).trace().real();
}

DensityMatrix dephase(const DensityMatrix& rho, const DecoherenceParams& d) {
  d.validate();
  // Projectors onto the +/- eigenstates of axis.sigma; the map is
  // rho -> sum_ij c_ij (P_i x 1) rho (P_j x 1) with c_ii = 1, c_ij = 1 - s.
  const CMat2 ns = n_dot_sigma(d.axis);
  const CMat2 p_plus = 0.5 * (sigma(0) + ns);
  const CMat2 p_minus = 0.5 * (sigma(0) - ns);
  const CMat4 kp = kron(p_plus, sigma(0));
  const CMat4 km = kron(p_minus, sigma(0));
  const CMat4& m = rho.matrix();
  const double keep = 1.0 - d.strength;
  const CMat4 out = kp * m * kp + km * m * km + keep * (kp * m * km + km * m * kp);
  return DensityMatrix(out);
}

DensityMatrix local_rotate(const DensityMatrix& rho, const CMat2& ua, const CMat2& ub) {
  if (!is_unitary(ua) || !is_unitary(ub)) throw std::invalid_argument("local_rotate: factor is not unitary");
  const CMat4 u = kron(ua, ub);
  const CMat4 m = u * rho.matrix() * u.adjoint();
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

CMat2 hadamard() {
  const double h = std::numbers::sqrt2 / 2.0;
  CMat2 m;
  m(0, 0) = h;
  m(0, 1) = h;
  m(1, 0) = h;
  m(1, 1) = -h;
  return m;
}

CMat4 dephase_choi(const DecoherenceParams& d) {
  d.validate();
  // J = sum_ij |i><j| x Phi(|i><j|), computational input basis.
  CMat4 j;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      CMat2 e;
      e(a, b) = 1.0;
      const CMat2 ns = n_dot_sigma(d.axis);
      const CMat2 pp = 0.5 * (sigma(0) + ns), pm = 0.5 * (sigma(0) - ns);
      const double keep = 1.0 - d.strength;
      const CMat2 out = pp * e * pp + pm * e * pm + keep * (pp * e * pm + pm * e * pp);
      j += kron(e, out);
    }
  return j;
}

}  // namespace faithful
