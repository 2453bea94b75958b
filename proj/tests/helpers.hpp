#pragma once

#include <random>

#include "faithful/linalg.hpp"
#include "faithful/rng.hpp"

namespace testing {

inline faithful::CMat2 random_cmat2(faithful::Rng& rng) {
  std::normal_distribution<double> g;
  faithful::CMat2 m;
  for (auto& z : m.data) z = {g(rng), g(rng)};
  return m;
}

inline faithful::CMat4 random_cmat4(faithful::Rng& rng) {
  std::normal_distribution<double> g;
  faithful::CMat4 m;
  for (auto& z : m.data) z = {g(rng), g(rng)};
  return m;
}

inline faithful::CMat4 random_hermitian(faithful::Rng& rng) {
  const auto m = random_cmat4(rng);
  return 0.5 * (m + m.adjoint());
}

inline faithful::RMat3 random_rmat3(faithful::Rng& rng) {
  std::normal_distribution<double> g;
  faithful::RMat3 m;
  for (auto& x : m.data) x = g(rng);
  return m;
}

inline faithful::Vec3 random_unit3(faithful::Rng& rng) {
  std::normal_distribution<double> g;
  faithful::Vec3 v{g(rng), g(rng), g(rng)};
  const double n = faithful::norm(v);
  return {v[0] / n, v[1] / n, v[2] / n};
}

}  // namespace testing
