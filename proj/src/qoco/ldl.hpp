#pragma once

#include <span>
#include <vector>

#include "qoco/sparse.hpp"

namespace qoco {

/// Analysis result for a fixed symmetric pattern. The factor L is unit lower
/// triangular; only its strictly lower entries are stored in `l_pattern`.
struct SymbolicFactor {
  Permutation perm;
  std::vector<Index> etree;  // parent of each column, -1 for roots
  std::vector<Index> l_col_counts;
  CscMatrix l_pattern;  // values left empty

  Index dim() const { return perm.size(); }
  Index l_nnz() const { return l_pattern.nnz(); }
};

struct NumericFactor {
  std::vector<double> l_values;  // aligned with SymbolicFactor::l_pattern
  std::vector<double> d;
  int dynamic_reg_bumps = 0;
};

struct RegularizationParams {
  double static_reg = 0.0;
  double dynamic_eps = 1e-14;
};

/// Elimination tree and L pattern of K(perm, perm). `upper` is the
/// unpermuted upper triangle.
SymbolicFactor symbolic_factor(const CscMatrix& upper, const Permutation& perm);

/// LDL^T of the already-permuted upper triangle `permuted`. `signs` gives the
/// expected pivot sign per unpermuted index (+1 or -1): static
/// regularization adds signs[i] * static_reg to each pivot, and any pivot
/// smaller in magnitude than dynamic_eps is replaced by signs[i] *
/// dynamic_eps. Throws NumericalError on a non-finite pivot.
NumericFactor numeric_factor(const CscMatrix& permuted, const SymbolicFactor& sym,
                             std::span<const int> signs, const RegularizationParams& reg);

/// Solves (L D L^T) y = b in permuted coordinates, in place.
void ldl_solve_permuted(const SymbolicFactor& sym, const NumericFactor& fac, std::span<double> b);

/// Solves K x = rhs with the factorization of K(perm, perm) + E, followed by
/// at most `refine_iters` rounds of iterative refinement against the
/// unregularized `upper`.
std::vector<double> solve_refine(const NumericFactor& fac, const SymbolicFactor& sym,
                                 const CscMatrix& upper, std::span<const double> rhs,
                                 int refine_iters);

}  // namespace qoco
