#include "faithful/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "faithful/tolerances.hpp"

namespace faithful {

double RMat3::det() const {
  const auto& m = *this;
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double RMat3::max_abs() const {
  double m = 0.0;
  for (double x : data) m = std::max(m, std::abs(x));
  return m;
}

RMat3 operator*(const RMat3& a, const RMat3& b) {
  RMat3 out;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) out(i, j) += a(i, k) * b(k, j);
  return out;
}

RMat3 operator-(const RMat3& a, const RMat3& b) {
  RMat3 out;
  for (std::size_t k = 0; k < 9; ++k) out.data[k] = a.data[k] - b.data[k];
  return out;
}

Vec3 operator*(const RMat3& a, const Vec3& v) {
  Vec3 out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out[i] += a(i, j) * v[j];
  return out;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const CVec4& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx inner(const CVec4& a, const CVec4& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

CVec4 operator*(const CMat4& m, const CVec4& v) {
  CVec4 out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i] += m(i, j) * v[j];
  return out;
}

CMat4 outer(const CVec4& a, const CVec4& b) {
  CMat4 out;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

const CMat2& sigma(std::size_t i) {
  static const std::array<CMat2, 4> paulis = [] {
    std::array<CMat2, 4> p;
    p[0] = CMat2::identity();
    p[1](0, 1) = 1.0;
    p[1](1, 0) = 1.0;
    p[2](0, 1) = cplx(0.0, -1.0);
    p[2](1, 0) = cplx(0.0, 1.0);
    p[3](0, 0) = 1.0;
    p[3](1, 1) = -1.0;
    return p;
  }();
  if (i > 3) throw std::out_of_range("sigma index must be 0..3");
  return paulis[i];
}

CMat4 kron(const CMat2& a, const CMat2& b) {
  CMat4 out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

double hermiticity_error(const CMat4& a) { return (a - a.adjoint()).max_abs(); }

namespace {

double off_diagonal_norm(const CMat4& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

double frobenius(const CMat4& a) {
  double s = 0.0;
  for (const auto& z : a.data) s += std::norm(z);
  return std::sqrt(s);
}

// Jacobi sweeps on a Hermitian copy; accumulates eigenvectors in columns of v
// when requested.
void jacobi_diagonalize(CMat4& a, CMat4* v) {
  const double scale = std::max(frobenius(a), 1e-300);
  const double stop = tolerances().jacobi * scale;
  constexpr int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= stop) return;
    for (std::size_t p = 0; p < 3; ++p) {
      for (std::size_t q = p + 1; q < 4; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        // Phase e^{-i phi} on column q makes a(p,q) real and positive.
        const cplx phase = std::conj(apq) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double angle = 0.5 * std::atan2(2.0 * mag, aqq - app);
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        // G = diag(1, phase) * rotation(c, s) in the (p, q) plane.
        const cplx gpp = c, gpq = s, gqp = -s * phase, gqq = c * phase;
        // a <- a * G  (columns p, q)
        for (std::size_t i = 0; i < 4; ++i) {
          const cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip * gpp + aiq * gqp;
          a(i, q) = aip * gpq + aiq * gqq;
        }
        // a <- G^dagger * a  (rows p, q)
        for (std::size_t j = 0; j < 4; ++j) {
          const cplx apj = a(p, j), aqj = a(q, j);
          a(p, j) = std::conj(gpp) * apj + std::conj(gqp) * aqj;
          a(q, j) = std::conj(gpq) * apj + std::conj(gqq) * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (v != nullptr) {
          for (std::size_t i = 0; i < 4; ++i) {
            const cplx vip = (*v)(i, p), viq = (*v)(i, q);
            (*v)(i, p) = vip * gpp + viq * gqp;
            (*v)(i, q) = vip * gpq + viq * gqq;
          }
        }
      }
    }
  }
  if (off_diagonal_norm(a) > 1e3 * stop)
    throw NumericalError("herm_eigen: Jacobi did not converge in " + std::to_string(max_sweeps) +
                         " sweeps");
}

void require_hermitian(const CMat4& a, const char* who) {
  if (!a.all_finite()) throw std::invalid_argument(std::string(who) + ": non-finite entry");
  const double err = hermiticity_error(a);
  if (err > tolerances().hermitian)
    throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian (max |a - a^H| = " +
                                std::to_string(err) + ")");
}

// Symmetrise so round-off in the input cannot leak into the rotations.
CMat4 hermitian_part(const CMat4& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace

EigenSpectrum herm_eigen(const CMat4& a) {
  require_hermitian(a, "herm_eigen");
  CMat4 work = hermitian_part(a);
  CMat4 v = CMat4::identity();
  jacobi_diagonalize(work, &v);

  std::array<std::size_t, 4> order;
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return work(i, i).real() > work(j, j).real();
  });

  EigenSpectrum out;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t col = order[k];
    out.eigenvalues[k] = work(col, col).real();
    for (std::size_t i = 0; i < 4; ++i) out.eigenvectors[k][i] = v(i, col);
  }
  return out;
}

std::array<double, 4> herm_eigenvalues(const CMat4& a) {
  require_hermitian(a, "herm_eigenvalues");
  CMat4 work = hermitian_part(a);
  jacobi_diagonalize(work, nullptr);
  std::array<double, 4> ev;
  for (std::size_t i = 0; i < 4; ++i) ev[i] = work(i, i).real();
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

namespace {

void to_hessenberg(CMat4& h) {
  for (std::size_t k = 0; k + 2 < 4; ++k) {
    // Householder on column k, rows k+1..3.
    std::array<cplx, 4> x{};
    double xnorm2 = 0.0;
    for (std::size_t i = k + 1; i < 4; ++i) {
      x[i] = h(i, k);
      xnorm2 += std::norm(x[i]);
    }
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm <= 1e-300) continue;
    const cplx x0 = x[k + 1];
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
    x[k + 1] += phase * xnorm;
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < 4; ++i) vnorm2 += std::norm(x[i]);
    if (vnorm2 <= 1e-300) continue;
    // H <- (I - 2vv^H/|v|^2) H (I - 2vv^H/|v|^2)
    for (std::size_t j = 0; j < 4; ++j) {
      cplx s = 0.0;
      for (std::size_t i = k + 1; i < 4; ++i) s += std::conj(x[i]) * h(i, j);
      s *= 2.0 / vnorm2;
      for (std::size_t i = k + 1; i < 4; ++i) h(i, j) -= x[i] * s;
    }
    for (std::size_t i = 0; i < 4; ++i) {
      cplx s = 0.0;
      for (std::size_t j = k + 1; j < 4; ++j) s += h(i, j) * x[j];
      s *= 2.0 / vnorm2;
      for (std::size_t j = k + 1; j < 4; ++j) h(i, j) -= s * std::conj(x[j]);
    }
    for (std::size_t i = k + 2; i < 4; ++i) h(i, k) = 0.0;
  }
}

// Eigenvalue of the trailing 2x2 block [[a,b],[c,d]] closest to d.
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx tr = a + d;
  const cplx det = a * d - b * c;
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  const cplx l1 = 0.5 * (tr + disc);
  const cplx l2 = 0.5 * (tr - disc);
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

std::array<cplx, 4> general_eigenvalues(const CMat4& a) {
  if (!a.all_finite()) throw std::invalid_argument("general_eigenvalues: non-finite entry");
  CMat4 h = a;
  to_hessenberg(h);

  std::array<cplx, 4> out{};
  const double scale = std::max(h.max_abs(), 1e-300);
  const double eps = tolerances().qr_deflation;
  constexpr int max_iterations = 400;
  int iterations = 0;
  int since_deflation = 0;
  std::ptrdiff_t hi = 3;
  while (hi >= 0) {
    if (hi == 0) {
      out[0] = h(0, 0);
      break;
    }
    // Find the start of the unreduced trailing block.
    std::ptrdiff_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      const double diag = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
      if (sub <= eps * std::max(diag, scale * 1e-3)) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      out[hi] = h(hi, hi);
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++iterations > max_iterations)
      throw NumericalError("general_eigenvalues: QR iteration did not converge after " +
                           std::to_string(iterations) + " iterations");
    ++since_deflation;

    cplx mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    if (since_deflation % 11 == 0) mu = h(hi, hi) + cplx(0.75 * std::abs(h(hi, hi - 1)), 0.4375 * std::abs(h(hi, hi - 1)));

    // One shifted QR step on the active block [lo, hi] with Givens rotations.
    std::array<std::array<cplx, 2>, 4> rot{};  // (c, s) per column
    for (std::ptrdiff_t i = lo; i <= hi; ++i) h(i, i) -= mu;
    for (std::ptrdiff_t k = lo; k < hi; ++k) {
      const cplx x = h(k, k), y = h(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      cplx c = 1.0, s = 0.0;
      if (r > 0.0) {
        c = x / r;
        s = y / r;
      }
      rot[k] = {c, s};
      for (std::ptrdiff_t j = k; j <= hi; ++j) {
        const cplx u = h(k, j), w = h(k + 1, j);
        h(k, j) = std::conj(c) * u + std::conj(s) * w;
        h(k + 1, j) = -s * u + c * w;
      }
    }
    for (std::ptrdiff_t k = lo; k < hi; ++k) {
      const cplx c = rot[k][0], s = rot[k][1];
      for (std::ptrdiff_t i = lo; i <= std::min<std::ptrdiff_t>(k + 1, hi); ++i) {
        const cplx u = h(i, k), w = h(i, k + 1);
        h(i, k) = u * c + w * s;
        h(i, k + 1) = -u * std::conj(s) + w * std::conj(c);
      }
    }
    for (std::ptrdiff_t i = lo; i <= hi; ++i) h(i, i) += mu;
  }

  std::sort(out.begin(), out.end(), [](const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return out;
}

namespace {

Vec3 column(const RMat3& m, std::size_t j) { return {m(0, j), m(1, j), m(2, j)}; }
void set_column(RMat3& m, std::size_t j, const Vec3& v) {
  for (std::size_t i = 0; i < 3; ++i) m(i, j) = v[i];
}

Vec3 any_orthogonal(const Vec3& u) {
  // Cross with the least-aligned axis.
  std::size_t axis = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(u[i]) < std::abs(u[axis])) axis = i;
  Vec3 e{};
  e[axis] = 1.0;
  Vec3 w = cross(u, e);
  const double n = norm(w);
  return {w[0] / n, w[1] / n, w[2] / n};
}

}  // namespace

std::array<double, 4> singular_values(const CMat4& a) {
  if (!a.all_finite()) throw std::invalid_argument("singular_values: non-finite input");
  CMat4 w = a;
  const auto col_dot = [&](std::size_t p, std::size_t q) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += std::conj(w(i, p)) * w(i, q);
    return s;
  };
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < 3; ++p)
      for (std::size_t q = p + 1; q < 4; ++q) {
        const double alpha = col_dot(p, p).real(), beta = col_dot(q, q).real();
        const cplx gamma = col_dot(p, q);
        const double g = std::abs(gamma);
        if (g <= tolerances().jacobi * std::sqrt(alpha * beta) || g == 0.0) continue;
        rotated = true;
        const cplx phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
        for (std::size_t i = 0; i < 4; ++i) {
          const cplx ap = w(i, p), aq = w(i, q) * std::conj(phase);
          w(i, p) = c * ap - s * aq;
          w(i, q) = s * ap + c * aq;
        }
      }
    if (!rotated) break;
  }
  std::array<double, 4> out;
  for (std::size_t j = 0; j < 4; ++j) out[j] = std::sqrt(col_dot(j, j).real());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Svd3 svd3(const RMat3& t) {
  for (double x : t.data)
    if (!std::isfinite(x)) throw std::invalid_argument("svd3: non-finite entry");

  // One-sided Jacobi: rotate columns of a = t*V until mutually orthogonal.
  RMat3 a = t;
  RMat3 v = RMat3::identity();
  for (int sweep = 0; sweep < 60; ++sweep) {
    double worst = 0.0;
    for (std::size_t p = 0; p < 2; ++p) {
      for (std::size_t q = p + 1; q < 3; ++q) {
        const Vec3 ap = column(a, p), aq = column(a, q);
        const double alpha = dot(ap, ap), beta = dot(aq, aq), gamma = dot(ap, aq);
        if (alpha == 0.0 || beta == 0.0) continue;
        const double rel = std::abs(gamma) / std::sqrt(alpha * beta);
        worst = std::max(worst, rel);
        if (rel <= 1e-15) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double tt = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + tt * tt);
        const double s = c * tt;
        for (std::size_t i = 0; i < 3; ++i) {
          const double x = a(i, p), y = a(i, q);
          a(i, p) = c * x - s * y;
          a(i, q) = s * x + c * y;
          const double vx = v(i, p), vy = v(i, q);
          v(i, p) = c * vx - s * vy;
          v(i, q) = s * vx + c * vy;
        }
      }
    }
    if (worst <= 1e-15) break;
  }

  Vec3 sv{};
  for (std::size_t j = 0; j < 3; ++j) sv[j] = norm(column(a, j));
  std::array<std::size_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sv[i] > sv[j]; });

  Svd3 out;
  RMat3 u;
  const double smax = sv[order[0]];
  const double cutoff = std::max(smax, 1e-300) * 1e-14;
  std::size_t rank = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t j = order[k];
    out.d[k] = sv[j];
    set_column(out.right, k, column(v, j));
    if (sv[j] > cutoff) {
      const Vec3 col = column(a, j);
      set_column(u, k, {col[0] / sv[j], col[1] / sv[j], col[2] / sv[j]});
      ++rank;
    }
  }
  if (rank == 0) {
    u = RMat3::identity();
  } else if (rank == 1) {
    const Vec3 u0 = column(u, 0);
    const Vec3 u1 = any_orthogonal(u0);
    set_column(u, 1, u1);
    set_column(u, 2, cross(u0, u1));
  } else if (rank == 2) {
    set_column(u, 2, cross(column(u, 0), column(u, 1)));
  }

  // Make both factors proper rotations by moving reflections into d.
  if (u.det() < 0.0) {
    set_column(u, 2, [&] { Vec3 c = column(u, 2); return Vec3{-c[0], -c[1], -c[2]}; }());
    out.d[2] = -out.d[2];
  }
  if (out.right.det() < 0.0) {
    Vec3 c = column(out.right, 2);
    set_column(out.right, 2, {-c[0], -c[1], -c[2]});
    out.d[2] = -out.d[2];
  }
  // At this point at most one entry (the smallest) is negative, and its sign
  // matches det(t) unless the smallest value is zero.
  out.left = u;
  return out;
}

}  // namespace faithful
