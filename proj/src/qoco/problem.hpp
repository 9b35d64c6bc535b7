#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "qoco/sparse.hpp"

namespace qoco {

/// K = R^l_+ x SOC(q_1) x ... x SOC(q_nsoc), in that order.
struct ConeSpec {
  Index orthant_dim = 0;
  std::vector<Index> soc_dims;

  Index soc_count() const { return static_cast<Index>(soc_dims.size()); }
  Index total_dim() const;

  bool operator==(const ConeSpec&) const = default;
};

/// minimize 1/2 x'Px + c'x  s.t.  Gx + s = h, s in K,  Ax = b.
/// P holds the upper triangle only.
struct ProblemData {
  Index n = 0;
  Index m = 0;
  Index p = 0;
  CscMatrix P;
  std::vector<double> c;
  CscMatrix A;
  std::vector<double> b;
  CscMatrix G;
  std::vector<double> h;
  ConeSpec cone;
};

struct Settings {
  double eps_abs = 1e-7;
  double eps_rel = 1e-7;
  int max_iters = 100;
  double static_reg = 1e-8;
  int refine_iters = 3;
  double step_fraction = 0.99;
  double time_limit_seconds = 3600.0;
};

/// Throws InvalidArgument on out-of-range settings.
void validate_settings(const Settings& settings);

enum class SolveStatus { Solved, MaxIters, TimeLimit, NumericalError };

std::string_view status_name(SolveStatus status) noexcept;

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalError;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
  std::vector<double> s;
  double objective = 0.0;
  int iterations = 0;
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;
  std::int64_t factor_calls = 0;
  std::int64_t solve_calls = 0;
};

/// Structural checks only; positive semidefiniteness of P is not verified.
/// Returns the data unchanged, or throws DimensionMismatch, ConeMismatch,
/// BadSparseStructure or EmptyCone.
const ProblemData& validate_problem(const ProblemData& data);

/// nnz(A) + nnz(G) + nnz(upper half of P).
std::int64_t problem_size_nnz(const ProblemData& data);

}  // namespace qoco
