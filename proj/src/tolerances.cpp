#include "faithful/tolerances.hpp"

namespace faithful {

namespace {
Tolerances& mutable_tolerances() {
  static Tolerances t;
  return t;
}
}  // namespace

const Tolerances& tolerances() { return mutable_tolerances(); }

void set_tolerances(const Tolerances& t) { mutable_tolerances() = t; }

}  // namespace faithful
