#pragma once
// Small hand-checkable problems shared by the unit and acceptance tests.

#include <vector>

#include "qoco/problem.hpp"
#include "qoco/sparse.hpp"

namespace fixtures {

// minimize x^2/2 + x  s.t.  x >= 1.   x* = 1, objective 1.5, z* = 2.
inline qoco::ProblemData tiny_qp() {
  qoco::ProblemData d;
  d.n = 1;
  d.m = 1;
  d.p = 0;
  d.P = qoco::CscMatrix::identity(1);
  d.c = {1.0};
  d.A = qoco::CscMatrix(0, 1);
  d.G = qoco::CscMatrix::identity(1, -1.0);
  d.h = {-1.0};
  d.cone.orthant_dim = 1;
  return d;
}

// minimize x_2  s.t.  x in SOC_3, x_1 = 1.   x* = (1, -1, 0), objective -1.
inline qoco::ProblemData soc_slice() {
  qoco::ProblemData d;
  d.n = 3;
  d.m = 3;
  d.p = 1;
  d.P = qoco::CscMatrix(3, 3);
  d.c = {0.0, 1.0, 0.0};
  const std::vector<qoco::Triplet> a{{0, 0, 1.0}};
  d.A = qoco::csc_from_triplets(1, 3, a);
  d.b = {1.0};
  d.G = qoco::CscMatrix::identity(3, -1.0);
  d.h = {0.0, 0.0, 0.0};
  d.cone.soc_dims = {3};
  return d;
}

// minimize x'Dx - mu'x / gamma  s.t.  1'x = 1, x >= 0, with
// D = diag(0.1, 0.2), mu = (0.1, 0.2), gamma = 1. P holds 2D.
inline constexpr double kPortD[2] = {0.1, 0.2};
inline constexpr double kPortMu[2] = {0.1, 0.2};

inline double portfolio2_objective(double x0, double x1) {
  return kPortD[0] * x0 * x0 + kPortD[1] * x1 * x1 - kPortMu[0] * x0 - kPortMu[1] * x1;
}

inline qoco::ProblemData portfolio2() {
  qoco::ProblemData d;
  d.n = 2;
  d.m = 2;
  d.p = 1;
  const std::vector<qoco::Triplet> p{{0, 0, 2.0 * kPortD[0]}, {1, 1, 2.0 * kPortD[1]}};
  d.P = qoco::csc_from_triplets(2, 2, p);
  d.c = {-kPortMu[0], -kPortMu[1]};
  const std::vector<qoco::Triplet> a{{0, 0, 1.0}, {0, 1, 1.0}};
  d.A = qoco::csc_from_triplets(1, 2, a);
  d.b = {1.0};
  d.G = qoco::CscMatrix::identity(2, -1.0);
  d.h = {0.0, 0.0};
  d.cone.orthant_dim = 2;
  return d;
}

}  // namespace fixtures
