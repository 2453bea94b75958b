#pragma once

// Dense complex/real linear algebra for the fixed sizes a two-qubit problem
// needs: 2x2 and 4x4 complex, 3x3 real.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace faithful {

using cplx = std::complex<double>;

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major complex matrix with compile-time shape.
template <std::size_t R, std::size_t C>
struct CMatrix {
  static constexpr std::size_t rows = R;
  static constexpr std::size_t cols = C;

  std::array<cplx, R * C> data{};

  cplx& operator()(std::size_t i, std::size_t j) { return data[i * C + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data[i * C + j]; }

  static CMatrix zero() { return CMatrix{}; }

  static CMatrix identity() requires(R == C) {
    CMatrix m;
    for (std::size_t i = 0; i < R; ++i) m(i, i) = 1.0;
    return m;
  }

  CMatrix<C, R> adjoint() const {
    CMatrix<C, R> out;
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t j = 0; j < C; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  CMatrix<C, R> transpose() const {
    CMatrix<C, R> out;
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t j = 0; j < C; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  CMatrix conj() const {
    CMatrix out;
    for (std::size_t k = 0; k < R * C; ++k) out.data[k] = std::conj(data[k]);
    return out;
  }

  cplx trace() const requires(R == C) {
    cplx t = 0.0;
    for (std::size_t i = 0; i < R; ++i) t += (*this)(i, i);
    return t;
  }

  /// Largest absolute entry.
  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data) m = std::max(m, std::abs(z));
    return m;
  }

  bool all_finite() const {
    for (const auto& z : data)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  CMatrix& operator+=(const CMatrix& o) {
    for (std::size_t k = 0; k < R * C; ++k) data[k] += o.data[k];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    for (std::size_t k = 0; k < R * C; ++k) data[k] -= o.data[k];
    return *this;
  }
  CMatrix& operator*=(cplx s) {
    for (auto& z : data) z *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(CMatrix a, double s) { return a *= cplx(s); }
  friend CMatrix operator*(double s, CMatrix a) { return a *= cplx(s); }
  friend bool operator==(const CMatrix&, const CMatrix&) = default;
};

template <std::size_t R, std::size_t K, std::size_t C>
CMatrix<R, C> operator*(const CMatrix<R, K>& a, const CMatrix<K, C>& b) {
  CMatrix<R, C> out;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t k = 0; k < K; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0)) continue;
      for (std::size_t j = 0; j < C; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

using CMat2 = CMatrix<2, 2>;
using CMat4 = CMatrix<4, 4>;
using CVec2 = std::array<cplx, 2>;
using CVec4 = std::array<cplx, 4>;
using Vec3 = std::array<double, 3>;

/// Real 3x3 matrix, row-major.
struct RMat3 {
  std::array<double, 9> data{};

  double& operator()(std::size_t i, std::size_t j) { return data[i * 3 + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * 3 + j]; }

  static RMat3 identity() {
    RMat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
  }
  static RMat3 diag(const Vec3& d) {
    RMat3 m;
    for (std::size_t i = 0; i < 3; ++i) m(i, i) = d[i];
    return m;
  }
  RMat3 transpose() const {
    RMat3 t;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  double det() const;
  double max_abs() const;
  friend bool operator==(const RMat3&, const RMat3&) = default;
};

RMat3 operator*(const RMat3& a, const RMat3& b);
RMat3 operator-(const RMat3& a, const RMat3& b);
Vec3 operator*(const RMat3& a, const Vec3& v);

double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 cross(const Vec3& a, const Vec3& b);

double norm(const CVec4& v);
cplx inner(const CVec4& a, const CVec4& b);  // <a|b>
CVec4 operator*(const CMat4& m, const CVec4& v);
CMat4 outer(const CVec4& a, const CVec4& b);  // |a><b|

/// sigma(0) is the identity, sigma(1..3) are X, Y, Z.
const CMat2& sigma(std::size_t i);

/// out((2i+k),(2j+l)) = a(i,j) * b(k,l)
CMat4 kron(const CMat2& a, const CMat2& b);

/// Hermitian part check: max |a - a^dagger|.
double hermiticity_error(const CMat4& a);

struct EigenSpectrum {
  std::array<double, 4> eigenvalues{};  // descending
  std::array<CVec4, 4> eigenvectors{};  // eigenvectors[k] pairs with eigenvalues[k]
};

/// Cyclic complex Jacobi. Throws std::invalid_argument if `a` is not
/// Hermitian within the configured tolerance.
EigenSpectrum herm_eigen(const CMat4& a);

/// Eigenvalues only, descending. Same preconditions as herm_eigen.
std::array<double, 4> herm_eigenvalues(const CMat4& a);

/// All eigenvalues of a general complex 4x4 matrix via Hessenberg reduction
/// and shifted QR. Sorted by descending real part, then imaginary part.
/// Throws NumericalError (with the iteration count) on non-convergence.
std::array<cplx, 4> general_eigenvalues(const CMat4& a);

/// Singular values of a complex 4x4 matrix, descending, by one-sided Jacobi.
/// Accurate to roughly eps * max_abs(a) in absolute terms, including the
/// values that are exactly zero.
std::array<double, 4> singular_values(const CMat4& a);

struct Svd3 {
  RMat3 left;   // proper rotation
  Vec3 d{};     // signed, |d| descending
  RMat3 right;  // proper rotation
};

/// t = left * diag(d) * right^T with det(left) = det(right) = +1. Reflections
/// are absorbed into d: d carries no negative entry when det(t) > 0 and
/// exactly one (on the smallest magnitude) when det(t) < 0.
Svd3 svd3(const RMat3& t);

}  // namespace faithful
