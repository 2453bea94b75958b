#include <doctest.h>

#include <cmath>

#include "faithful/linalg.hpp"
#include "helpers.hpp"

using namespace faithful;

TEST_SUITE("core-linalg") {

TEST_CASE("kron of Pauli constants") {
  CHECK(kron(sigma(0), sigma(0)) == CMat4::identity());

  const CMat4 zz = kron(sigma(3), sigma(3));
  const double diag[] = {1, -1, -1, 1};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(zz(i, j) == cplx(i == j ? diag[i] : 0.0));

  // Hand expansion: X x X swaps |00> <-> |11> and |01> <-> |10>.
  const CMat4 xx = kron(sigma(1), sigma(1));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(xx(i, j) == cplx(i + j == 3 ? 1.0 : 0.0));
}

TEST_CASE("kron is bilinear") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const CMat2 a = testing::random_cmat2(rng), b = testing::random_cmat2(rng), c = testing::random_cmat2(rng);
    const cplx alpha(0.3 * trial - 2.0, 1.1);
    const CMat4 lhs = kron(alpha * a + b, c);
    const CMat4 rhs = alpha * kron(a, c) + kron(b, c);
    CHECK((lhs - rhs).max_abs() <= 1e-12);
    const CMat4 lhs2 = kron(c, alpha * a + b);
    const CMat4 rhs2 = alpha * kron(c, a) + kron(c, b);
    CHECK((lhs2 - rhs2).max_abs() <= 1e-12);
  }
}

TEST_CASE("herm_eigen examples") {
  const auto quarter = herm_eigen(0.25 * CMat4::identity());
  for (double ev : quarter.eigenvalues) CHECK(ev == doctest::Approx(0.25).epsilon(1e-14));

  const auto zz = herm_eigen(kron(sigma(3), sigma(3)));
  CHECK(zz.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(zz.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(zz.eigenvalues[2] == doctest::Approx(-1.0));
  CHECK(zz.eigenvalues[3] == doctest::Approx(-1.0));

  CMat4 bad = CMat4::identity();
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(herm_eigen(bad), std::invalid_argument);
}

TEST_CASE("herm_eigen properties on random Hermitian matrices") {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const CMat4 a = testing::random_hermitian(rng);
    const auto spec = herm_eigen(a);
    double sum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) sum += spec.eigenvalues[k];
    CHECK(std::abs(sum - a.trace().real()) <= 1e-10);
    for (std::size_t k = 0; k + 1 < 4; ++k) CHECK(spec.eigenvalues[k] >= spec.eigenvalues[k + 1]);

    CMat4 recon;
    for (std::size_t k = 0; k < 4; ++k) {
      const CVec4& v = spec.eigenvectors[k];
      CHECK(std::abs(norm(v) - 1.0) <= 1e-12);
      const CVec4 av = a * v;
      for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(av[i] - spec.eigenvalues[k] * v[i]) <= 1e-10);
      for (std::size_t l = k + 1; l < 4; ++l) CHECK(std::abs(inner(v, spec.eigenvectors[l])) <= 1e-9);
      recon += spec.eigenvalues[k] * outer(v, v);
    }
    CHECK((recon - a).max_abs() <= 1e-9);
  }
}

TEST_CASE("general_eigenvalues examples") {
  CMat4 d;
  for (std::size_t i = 0; i < 4; ++i) d(i, i) = static_cast<double>(i + 1);
  const auto ev = general_eigenvalues(d);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(ev[i] - cplx(4.0 - i)) <= 1e-12);

  CMat4 shift;
  for (std::size_t i = 0; i + 1 < 4; ++i) shift(i, i + 1) = 1.0;
  for (const auto& z : general_eigenvalues(shift)) CHECK(std::abs(z) <= 1e-12);

  // Rotation generator: eigenvalues +-i and 0, 0.
  CMat4 rot;
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  const auto rev = general_eigenvalues(rot);
  double imag_sum = 0.0, abs_sum = 0.0;
  for (const auto& z : rev) {
    imag_sum += z.imag();
    abs_sum += std::abs(z);
  }
  CHECK(std::abs(imag_sum) <= 1e-12);
  CHECK(abs_sum == doctest::Approx(2.0));
}

TEST_CASE("general_eigenvalues trace and determinant") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const CMat4 a = testing::random_cmat4(rng);
    const auto ev = general_eigenvalues(a);
    cplx sum = 0.0, prod = 1.0;
    for (const auto& z : ev) {
      sum += z;
      prod *= z;
    }
    CHECK(std::abs(sum - a.trace()) <= 1e-8);
    // Determinant by cofactor expansion (independent of the QR path).
    auto det3 = [&](std::size_t skip_row, std::size_t skip_col) {
      std::array<std::size_t, 3> r{}, c{};
      for (std::size_t i = 0, k = 0; i < 4; ++i) if (i != skip_row) r[k++] = i;
      for (std::size_t j = 0, k = 0; j < 4; ++j) if (j != skip_col) c[k++] = j;
      return a(r[0], c[0]) * (a(r[1], c[1]) * a(r[2], c[2]) - a(r[1], c[2]) * a(r[2], c[1])) -
             a(r[0], c[1]) * (a(r[1], c[0]) * a(r[2], c[2]) - a(r[1], c[2]) * a(r[2], c[0])) +
             a(r[0], c[2]) * (a(r[1], c[0]) * a(r[2], c[1]) - a(r[1], c[1]) * a(r[2], c[0]));
    };
    cplx det = 0.0;
    for (std::size_t j = 0; j < 4; ++j) det += (j % 2 == 0 ? 1.0 : -1.0) * a(0, j) * det3(0, j);
    CHECK(std::abs(prod - det) <= 1e-8 * std::max(1.0, std::abs(det)));
  }
}

TEST_CASE("general_eigenvalues rejects non-finite input") {
  CMat4 a;
  a(1, 2) = std::nan("");
  CHECK_THROWS_AS(general_eigenvalues(a), std::invalid_argument);
}

namespace {
void check_svd(const RMat3& t) {
  const Svd3 s = svd3(t);
  const RMat3 recon = s.left * RMat3::diag(s.d) * s.right.transpose();
  CHECK((recon - t).max_abs() <= 1e-10);
  CHECK((s.left.transpose() * s.left - RMat3::identity()).max_abs() <= 1e-12);
  CHECK((s.right.transpose() * s.right - RMat3::identity()).max_abs() <= 1e-12);
  CHECK(std::abs(s.left.det() - 1.0) <= 1e-12);
  CHECK(std::abs(s.right.det() - 1.0) <= 1e-12);
  CHECK(std::abs(s.d[0]) >= std::abs(s.d[1]));
  CHECK(std::abs(s.d[1]) >= std::abs(s.d[2]));
  CHECK(s.d[0] >= 0.0);
  CHECK(s.d[1] >= 0.0);
  if (t.det() > 1e-12) CHECK(s.d[2] > 0.0);
  if (t.det() < -1e-12) CHECK(s.d[2] < 0.0);
}
}  // namespace

TEST_CASE("svd3 examples") {
  const Svd3 id = svd3(RMat3::identity());
  CHECK(id.d == Vec3{1.0, 1.0, 1.0});
  CHECK((id.left - RMat3::identity()).max_abs() <= 1e-15);

  const Svd3 phi = svd3(RMat3::diag({1.0, -1.0, 1.0}));
  CHECK(phi.d[0] == doctest::Approx(1.0));
  CHECK(phi.d[1] == doctest::Approx(1.0));
  CHECK(phi.d[2] == doctest::Approx(-1.0));
  check_svd(RMat3::diag({1.0, -1.0, 1.0}));

  const double c = std::cos(2.0 * M_PI / 8.0);
  const RMat3 t = RMat3::diag({-c, c, 1.0});
  const Svd3 s = svd3(t);
  CHECK(std::abs(s.d[0]) == doctest::Approx(1.0));
  CHECK(std::abs(s.d[1]) == doctest::Approx(c));
  CHECK(std::abs(s.d[2]) == doctest::Approx(c));
  int negatives = 0;
  for (double x : s.d) negatives += x < 0.0;
  CHECK((negatives == 1 || negatives == 3));
  CHECK((s.left * RMat3::diag(s.d) * s.right.transpose() - t).max_abs() <= 1e-12);
}

TEST_CASE("svd3 properties on random and degenerate matrices") {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) check_svd(testing::random_rmat3(rng));
  check_svd(RMat3{});
  RMat3 rank1;
  rank1(0, 2) = 2.0;
  check_svd(rank1);
  RMat3 rank2 = RMat3::diag({0.5, -0.25, 0.0});
  rank2(0, 1) = 0.3;
  check_svd(rank2);
}

}  // TEST_SUITE

TEST_SUITE("core-linalg") {

TEST_CASE("singular_values examples") {
  CHECK(singular_values(CMat4::identity()) == std::array<double, 4>{1, 1, 1, 1});
  CMat4 d;
  d(0, 0) = cplx(0, -3.0);
  d(1, 2) = 2.0;
  d(3, 1) = -0.5;
  const auto sv = singular_values(d);
  CHECK(sv[0] == doctest::Approx(3.0));
  CHECK(sv[1] == doctest::Approx(2.0));
  CHECK(sv[2] == doctest::Approx(0.5));
  CHECK(sv[3] == 0.0);
}

TEST_CASE("singular values square to the eigenvalues of A^dagger A") {
  Rng rng(91);
  for (int i = 0; i < 300; ++i) {
    CMat4 a = testing::random_cmat4(rng);
    if (i % 3 == 0) {
      // Rank-deficient: zero out one column's worth via a projector.
      const CVec4 v{1.0, 0.0, 0.0, 0.0};
      a = a * (CMat4::identity() - outer(v, v));
    }
    const auto sv = singular_values(a);
    const auto ev = herm_eigenvalues(a.adjoint() * a);
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(sv[k] * sv[k] - ev[k]) <= 1e-12 * (1 + ev[0]));
    if (i % 3 == 0) CHECK(sv[3] <= 1e-14 * sv[0]);
  }
}

}  // TEST_SUITE
