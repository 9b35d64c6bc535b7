#include "qoco/problem.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qoco/error.hpp"

namespace qoco {

Index ConeSpec::total_dim() const {
  return orthant_dim + std::accumulate(soc_dims.begin(), soc_dims.end(), Index{0});
}

void validate_settings(const Settings& s) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(s.eps_abs) || !positive(s.eps_rel)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  }
  if (s.max_iters < 0 || s.refine_iters < 0) {
    throw Error(ErrorCode::InvalidArgument, "iteration counts must be nonnegative");
  }
  if (!(s.static_reg >= 0.0) || !std::isfinite(s.static_reg)) {
    throw Error(ErrorCode::InvalidArgument, "static_reg must be a finite nonnegative value");
  }
  if (!(s.step_fraction > 0.0 && s.step_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "step_fraction must lie in (0, 1)");
  }
  if (!positive(s.time_limit_seconds)) {
    throw Error(ErrorCode::InvalidArgument, "time_limit_seconds must be positive");
  }
}

std::string_view status_name(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Solved: return "Solved";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::TimeLimit: return "TimeLimit";
    case SolveStatus::NumericalError: return "NumericalError";
  }
  return "Unknown";
}

namespace {

void expect_shape(const CscMatrix& mat, const char* name, Index rows, Index cols) {
  if (mat.rows != rows || mat.cols != cols) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(name) + " is " + std::to_string(mat.rows) + "x" + std::to_string(mat.cols) +
                    ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void expect_length(const std::vector<double>& v, const char* name, Index len) {
  if (v.size() != static_cast<std::size_t>(len)) {
    throw Error(ErrorCode::DimensionMismatch, std::string(name) + " has length " + std::to_string(v.size()) +
                                                  ", expected " + std::to_string(len));
  }
}

}  // namespace

const ProblemData& validate_problem(const ProblemData& d) {
  if (d.n < 0 || d.m < 0 || d.p < 0) throw Error(ErrorCode::DimensionMismatch, "negative dimension");
  if (d.m == 0) throw Error(ErrorCode::EmptyCone, "at least one conic constraint is required");

  expect_shape(d.P, "P", d.n, d.n);
  expect_shape(d.A, "A", d.p, d.n);
  expect_shape(d.G, "G", d.m, d.n);
  expect_length(d.c, "c", d.n);
  expect_length(d.b, "b", d.p);
  expect_length(d.h, "h", d.m);

  check_csc(d.P);
  check_csc(d.A);
  check_csc(d.G);
  for (Index j = 0; j < d.P.cols; ++j) {
    for (Index k = d.P.col_ptr[j]; k < d.P.col_ptr[j + 1]; ++k) {
      if (d.P.row_idx[k] > j) {
        throw Error(ErrorCode::BadSparseStructure, "P must store only its upper triangle");
      }
    }
  }

  if (d.cone.orthant_dim < 0) throw Error(ErrorCode::ConeMismatch, "negative orthant dimension");
  for (Index q : d.cone.soc_dims) {
    if (q < 1) throw Error(ErrorCode::ConeMismatch, "second-order cone dimensions must be >= 1");
  }
  if (d.cone.total_dim() != d.m) {
    throw Error(ErrorCode::ConeMismatch, "l + sum(q) = " + std::to_string(d.cone.total_dim()) +
                                             " but m = " + std::to_string(d.m));
  }
  return d;
}

std::int64_t problem_size_nnz(const ProblemData& d) {
  return std::int64_t{d.A.nnz()} + d.G.nnz() + d.P.nnz();
}

}  // namespace qoco
