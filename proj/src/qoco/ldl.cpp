#include "qoco/ldl.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qoco/error.hpp"

namespace qoco {

SymbolicFactor symbolic_factor(const CscMatrix& upper, const Permutation& perm) {
  SymbolicFactor sym;
  const Index n = upper.cols;
  const CscMatrix k = symmetric_permute(upper, perm).matrix;
  sym.perm = perm;
  sym.etree.assign(n, -1);
  sym.l_col_counts.assign(n, 0);

  // Row k of L is the etree reach of the pattern of column k of the upper triangle.
  std::vector<Index> visited(n, -1);
  for (Index j = 0; j < n; ++j) {
    visited[j] = j;
    for (Index p = k.col_ptr[j]; p < k.col_ptr[j + 1]; ++p) {
      Index i = k.row_idx[p];
      if (i >= j) continue;
      while (visited[i] != j) {
        if (sym.etree[i] == -1) sym.etree[i] = j;
        ++sym.l_col_counts[i];
        visited[i] = j;
        i = sym.etree[i];
      }
    }
  }

  auto& l = sym.l_pattern;
  l = CscMatrix(n, n);
  std::partial_sum(sym.l_col_counts.begin(), sym.l_col_counts.end(), l.col_ptr.begin() + 1);
  l.row_idx.resize(l.col_ptr.back());
  std::vector<Index> next(l.col_ptr.begin(), l.col_ptr.end() - 1);
  std::fill(visited.begin(), visited.end(), -1);
  for (Index j = 0; j < n; ++j) {
    visited[j] = j;
    for (Index p = k.col_ptr[j]; p < k.col_ptr[j + 1]; ++p) {
      Index i = k.row_idx[p];
      if (i >= j) continue;
      while (visited[i] != j) {
        l.row_idx[next[i]++] = j;
        visited[i] = j;
        i = sym.etree[i];
      }
    }
  }
  return sym;
}

NumericFactor numeric_factor(const CscMatrix& k, const SymbolicFactor& sym, std::span<const int> signs,
                             const RegularizationParams& reg) {
  const Index n = sym.dim();
  if (k.cols != n || k.rows != n || signs.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::DimensionMismatch, "numeric_factor operands do not match the analysis");
  }
  const auto& lp = sym.l_pattern;
  NumericFactor fac;
  fac.l_values.assign(lp.nnz(), 0.0);
  fac.d.assign(n, 0.0);

  std::vector<double> y(n, 0.0);
  std::vector<Index> next(lp.col_ptr.begin(), lp.col_ptr.end() - 1);
  std::vector<Index> visited(n, -1);
  std::vector<Index> reach(n);
  std::vector<Index> path(n);

  for (Index j = 0; j < n; ++j) {
    // Topologically ordered reach of column j in the elimination tree.
    Index top = n;
    visited[j] = j;
    double diag = 0.0;
    for (Index p = k.col_ptr[j]; p < k.col_ptr[j + 1]; ++p) {
      Index i = k.row_idx[p];
      if (i == j) {
        diag = k.values[p];
        continue;
      }
      if (i > j) continue;
      y[i] = k.values[p];
      Index len = 0;
      while (visited[i] != j) {
        path[len++] = i;
        visited[i] = j;
        i = sym.etree[i];
      }
      while (len > 0) reach[--top] = path[--len];
    }

    for (Index t = top; t < n; ++t) {
      const Index c = reach[t];
      const double yc = y[c];
      y[c] = 0.0;
      for (Index p = lp.col_ptr[c]; p < next[c]; ++p) y[lp.row_idx[p]] -= fac.l_values[p] * yc;
      const double l_jc = yc / fac.d[c];
      fac.l_values[next[c]++] = l_jc;
      diag -= l_jc * yc;
    }

    const int sign = signs[sym.perm.forward[j]] >= 0 ? 1 : -1;
    diag += sign * reg.static_reg;
    if (!std::isfinite(diag)) {
      throw Error(ErrorCode::NumericalError, "non-finite pivot at column " + std::to_string(j));
    }
    if (std::abs(diag) < reg.dynamic_eps) {
      diag = sign * reg.dynamic_eps;
      ++fac.dynamic_reg_bumps;
    }
    fac.d[j] = diag;
  }
  return fac;
}

void ldl_solve_permuted(const SymbolicFactor& sym, const NumericFactor& fac, std::span<double> x) {
  const auto& lp = sym.l_pattern;
  const Index n = sym.dim();
  for (Index j = 0; j < n; ++j) {
    const double xj = x[j];
    for (Index p = lp.col_ptr[j]; p < lp.col_ptr[j + 1]; ++p) x[lp.row_idx[p]] -= fac.l_values[p] * xj;
  }
  for (Index j = 0; j < n; ++j) x[j] /= fac.d[j];
  for (Index j = n - 1; j >= 0; --j) {
    double acc = x[j];
    for (Index p = lp.col_ptr[j]; p < lp.col_ptr[j + 1]; ++p) acc -= fac.l_values[p] * x[lp.row_idx[p]];
    x[j] = acc;
  }
}

namespace {

void backsolve(const SymbolicFactor& sym, const NumericFactor& fac, std::span<const double> b,
               std::span<double> x, std::vector<double>& work) {
  const Index n = sym.dim();
  for (Index i = 0; i < n; ++i) work[i] = b[sym.perm.forward[i]];
  ldl_solve_permuted(sym, fac, work);
  for (Index i = 0; i < n; ++i) x[sym.perm.forward[i]] = work[i];
}

double residual(const CscMatrix& upper, std::span<const double> rhs, std::span<const double> x,
                std::vector<double>& r, std::vector<double>& kx) {
  std::copy(rhs.begin(), rhs.end(), r.begin());
  std::fill(kx.begin(), kx.end(), 0.0);
  symv_upper(upper, x, kx);
  double norm = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] -= kx[i];
    if (!std::isfinite(r[i])) throw Error(ErrorCode::NumericalError, "non-finite residual in refinement");
    norm = std::max(norm, std::abs(r[i]));
  }
  return norm;
}

}  // namespace

std::vector<double> solve_refine(const NumericFactor& fac, const SymbolicFactor& sym, const CscMatrix& upper,
                                 std::span<const double> rhs, int refine_iters) {
  const Index n = sym.dim();
  if (rhs.size() != static_cast<std::size_t>(n) || upper.cols != n) {
    throw Error(ErrorCode::DimensionMismatch, "solve_refine right-hand side has the wrong length");
  }
  std::vector<double> work(n), x(n), r(n), delta(n), trial(n), trial_r(n), kx(n);
  backsolve(sym, fac, rhs, x, work);
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NumericalError, "non-finite solution");
  }

  const double tol = 1e-12 * (1.0 + norm_inf(rhs));
  double rnorm = residual(upper, rhs, x, r, kx);
  for (int it = 0; it < refine_iters && rnorm > tol; ++it) {
    backsolve(sym, fac, r, delta, work);
    for (Index i = 0; i < n; ++i) trial[i] = x[i] + delta[i];
    const double trial_norm = residual(upper, rhs, trial, trial_r, kx);
    if (!(trial_norm < rnorm)) break;
    x.swap(trial);
    r.swap(trial_r);
    rnorm = trial_norm;
  }
  return x;
}

}  // namespace qoco
