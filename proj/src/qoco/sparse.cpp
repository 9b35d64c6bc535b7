#include "qoco/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qoco/error.hpp"

namespace qoco {

CscMatrix CscMatrix::identity(Index n, double scale) {
  CscMatrix m(n, n);
  m.row_idx.resize(n);
  m.values.assign(n, scale);
  for (Index j = 0; j < n; ++j) {
    m.col_ptr[j + 1] = j + 1;
    m.row_idx[j] = j;
  }
  return m;
}

void check_csc(const CscMatrix& m) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::BadSparseStructure, msg); };
  if (m.rows < 0 || m.cols < 0) fail("negative dimension");
  if (m.col_ptr.size() != static_cast<std::size_t>(m.cols) + 1) fail("col_ptr has wrong length");
  if (m.col_ptr[0] != 0) fail("col_ptr[0] must be 0");
  for (Index j = 0; j < m.cols; ++j) {
    if (m.col_ptr[j + 1] < m.col_ptr[j]) fail("col_ptr is decreasing at column " + std::to_string(j));
  }
  const auto nnz = static_cast<std::size_t>(m.col_ptr.back());
  if (m.row_idx.size() != nnz || m.values.size() != nnz) fail("row_idx/values length differs from nnz");
  for (Index j = 0; j < m.cols; ++j) {
    for (Index k = m.col_ptr[j]; k < m.col_ptr[j + 1]; ++k) {
      const Index r = m.row_idx[k];
      if (r < 0 || r >= m.rows) fail("row index out of range in column " + std::to_string(j));
      if (k > m.col_ptr[j] && r <= m.row_idx[k - 1]) {
        fail("row indices not strictly increasing in column " + std::to_string(j));
      }
    }
  }
}

CscMatrix csc_from_triplets(Index rows, Index cols, std::span<const Triplet> triplets) {
  CscMatrix m(rows, cols);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) + ")");
    }
    ++m.col_ptr[t.col + 1];
  }
  std::partial_sum(m.col_ptr.begin(), m.col_ptr.end(), m.col_ptr.begin());

  // Stable bucket by column, then sort rows within each column and sum duplicates.
  std::vector<Index> order(triplets.size());
  std::vector<Index> next(m.col_ptr.begin(), m.col_ptr.end() - 1);
  for (std::size_t k = 0; k < triplets.size(); ++k) order[next[triplets[k].col]++] = static_cast<Index>(k);

  m.row_idx.reserve(triplets.size());
  m.values.reserve(triplets.size());
  std::vector<Index> out_ptr(static_cast<std::size_t>(cols) + 1, 0);
  for (Index j = 0; j < cols; ++j) {
    auto first = order.begin() + m.col_ptr[j];
    auto last = order.begin() + m.col_ptr[j + 1];
    std::stable_sort(first, last, [&](Index a, Index b) { return triplets[a].row < triplets[b].row; });
    for (auto it = first; it != last; ++it) {
      const auto& t = triplets[*it];
      if (static_cast<Index>(m.row_idx.size()) > out_ptr[j] && m.row_idx.back() == t.row) {
        m.values.back() += t.value;
      } else {
        m.row_idx.push_back(t.row);
        m.values.push_back(t.value);
      }
    }
    out_ptr[j + 1] = static_cast<Index>(m.row_idx.size());
  }
  m.col_ptr = std::move(out_ptr);
  return m;
}

CscMatrix transpose(const CscMatrix& m) {
  CscMatrix t(m.cols, m.rows);
  t.row_idx.resize(m.nnz());
  t.values.resize(m.nnz());
  for (Index k = 0; k < m.nnz(); ++k) ++t.col_ptr[m.row_idx[k] + 1];
  std::partial_sum(t.col_ptr.begin(), t.col_ptr.end(), t.col_ptr.begin());
  std::vector<Index> next(t.col_ptr.begin(), t.col_ptr.end() - 1);
  for (Index j = 0; j < m.cols; ++j) {
    for (Index k = m.col_ptr[j]; k < m.col_ptr[j + 1]; ++k) {
      const Index dst = next[m.row_idx[k]]++;
      t.row_idx[dst] = j;
      t.values[dst] = m.values[k];
    }
  }
  return t;
}

CscMatrix upper_triangle(const CscMatrix& m) {
  CscMatrix u(m.rows, m.cols);
  for (Index j = 0; j < m.cols; ++j) {
    for (Index k = m.col_ptr[j]; k < m.col_ptr[j + 1]; ++k) {
      if (m.row_idx[k] <= j) {
        u.row_idx.push_back(m.row_idx[k]);
        u.values.push_back(m.values[k]);
      }
    }
    u.col_ptr[j + 1] = static_cast<Index>(u.row_idx.size());
  }
  return u;
}

void spmv(const CscMatrix& m, std::span<const double> x, bool transpose, std::span<double> out) {
  const auto in_len = static_cast<std::size_t>(transpose ? m.rows : m.cols);
  const auto out_len = static_cast<std::size_t>(transpose ? m.cols : m.rows);
  if (x.size() != in_len || out.size() != out_len) {
    throw Error(ErrorCode::DimensionMismatch, "spmv operand lengths do not match the matrix");
  }
  if (transpose) {
    for (Index j = 0; j < m.cols; ++j) {
      double acc = 0.0;
      for (Index k = m.col_ptr[j]; k < m.col_ptr[j + 1]; ++k) acc += m.values[k] * x[m.row_idx[k]];
      out[j] += acc;
    }
  } else {
    for (Index j = 0; j < m.cols; ++j) {
      const double xj = x[j];
      for (Index k = m.col_ptr[j]; k < m.col_ptr[j + 1]; ++k) out[m.row_idx[k]] += m.values[k] * xj;
    }
  }
}

void symv_upper(const CscMatrix& k, std::span<const double> x, std::span<double> out) {
  if (k.rows != k.cols || x.size() != static_cast<std::size_t>(k.cols) ||
      out.size() != static_cast<std::size_t>(k.rows)) {
    throw Error(ErrorCode::DimensionMismatch, "symv_upper operand lengths do not match the matrix");
  }
  for (Index j = 0; j < k.cols; ++j) {
    double acc = 0.0;
    const double xj = x[j];
    for (Index p = k.col_ptr[j]; p < k.col_ptr[j + 1]; ++p) {
      const Index i = k.row_idx[p];
      const double v = k.values[p];
      if (i == j) {
        acc += v * xj;
      } else {
        out[i] += v * xj;
        acc += v * x[i];
      }
    }
    out[j] += acc;
  }
}

Permutation Permutation::identity(Index n) {
  Permutation p;
  p.forward.resize(n);
  std::iota(p.forward.begin(), p.forward.end(), 0);
  p.inverse = p.forward;
  return p;
}

Permutation Permutation::from_forward(std::vector<Index> forward) {
  const auto n = static_cast<Index>(forward.size());
  Permutation p;
  p.inverse.assign(n, -1);
  for (Index i = 0; i < n; ++i) {
    const Index old = forward[i];
    if (old < 0 || old >= n || p.inverse[old] != -1) {
      throw Error(ErrorCode::BadPermutation, "forward map is not a bijection");
    }
    p.inverse[old] = i;
  }
  p.forward = std::move(forward);
  return p;
}

PermutedMatrix symmetric_permute(const CscMatrix& upper, const Permutation& perm) {
  const Index n = upper.cols;
  if (upper.rows != n) throw Error(ErrorCode::DimensionMismatch, "symmetric_permute needs a square matrix");
  if (perm.size() != n || perm.inverse.size() != perm.forward.size()) {
    throw Error(ErrorCode::BadPermutation, "permutation size does not match the matrix");
  }
  for (Index i = 0; i < n; ++i) {
    const Index old = perm.forward[i];
    if (old < 0 || old >= n || perm.inverse[old] != i) {
      throw Error(ErrorCode::BadPermutation, "inverse is inconsistent with forward");
    }
  }

  PermutedMatrix out{CscMatrix(n, n), std::vector<Index>(upper.nnz())};
  auto& m = out.matrix;
  auto new_coords = [&](Index row, Index col) {
    const Index a = perm.inverse[row];
    const Index b = perm.inverse[col];
    return std::pair{std::min(a, b), std::max(a, b)};
  };
  for (Index j = 0; j < n; ++j) {
    for (Index k = upper.col_ptr[j]; k < upper.col_ptr[j + 1]; ++k) {
      ++m.col_ptr[new_coords(upper.row_idx[k], j).second + 1];
    }
  }
  std::partial_sum(m.col_ptr.begin(), m.col_ptr.end(), m.col_ptr.begin());
  m.row_idx.resize(upper.nnz());
  m.values.resize(upper.nnz());

  // Scatter, then sort each destination column by row while carrying the source index.
  std::vector<Index> next(m.col_ptr.begin(), m.col_ptr.end() - 1);
  std::vector<Index> source(upper.nnz());
  for (Index j = 0; j < n; ++j) {
    for (Index k = upper.col_ptr[j]; k < upper.col_ptr[j + 1]; ++k) {
      const auto [r, c] = new_coords(upper.row_idx[k], j);
      const Index dst = next[c]++;
      m.row_idx[dst] = r;
      source[dst] = k;
    }
  }
  std::vector<std::pair<Index, Index>> column;
  for (Index c = 0; c < n; ++c) {
    column.clear();
    for (Index p = m.col_ptr[c]; p < m.col_ptr[c + 1]; ++p) column.emplace_back(m.row_idx[p], source[p]);
    std::sort(column.begin(), column.end());
    Index p = m.col_ptr[c];
    for (const auto& [r, src] : column) {
      m.row_idx[p] = r;
      m.values[p] = upper.values[src];
      out.entry_map[src] = p;
      ++p;
    }
  }
  return out;
}

double norm_inf(std::span<const double> v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

}  // namespace qoco
