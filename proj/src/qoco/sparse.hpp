#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qoco {

using Index = int;

/// Compressed sparse column matrix. Explicit zeros are kept as pattern
/// entries so that refactorization with fixed sparsity stays valid.
struct CscMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<Index> col_ptr{0};
  std::vector<Index> row_idx;
  std::vector<double> values;

  CscMatrix() = default;
  CscMatrix(Index rows_, Index cols_)
      : rows(rows_), cols(cols_), col_ptr(static_cast<std::size_t>(cols_) + 1, 0) {}

  Index nnz() const { return col_ptr.empty() ? 0 : col_ptr.back(); }

  static CscMatrix identity(Index n, double scale = 1.0);
};

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Throws BadSparseStructure if the CSC invariants do not hold.
void check_csc(const CscMatrix& m);

/// Duplicates are summed; entries come out sorted by row within each column.
CscMatrix csc_from_triplets(Index rows, Index cols, std::span<const Triplet> triplets);

CscMatrix transpose(const CscMatrix& m);

/// Keeps only entries with row <= col.
CscMatrix upper_triangle(const CscMatrix& m);

/// out += M x, or out += M^T x when `transpose` is set.
void spmv(const CscMatrix& m, std::span<const double> x, bool transpose,
          std::span<double> out);

/// out += K x where K is symmetric and only its upper triangle is stored.
void symv_upper(const CscMatrix& k, std::span<const double> x, std::span<double> out);

struct Permutation {
  std::vector<Index> forward;  // forward[new] = old
  std::vector<Index> inverse;  // inverse[old] = new

  Index size() const { return static_cast<Index>(forward.size()); }

  static Permutation identity(Index n);
  static Permutation from_forward(std::vector<Index> forward);
};

struct PermutedMatrix {
  CscMatrix matrix;
  /// entry_map[k] is the position in `matrix` of entry k of the source.
  std::vector<Index> entry_map;
};

/// Upper-triangular storage of K(forward, forward).
PermutedMatrix symmetric_permute(const CscMatrix& upper, const Permutation& perm);

enum class OrderingMethod { Natural, ApproximateMinimumDegree };

/// Fill-reducing symmetric ordering of the pattern of K + K^T, given the
/// upper triangle. Degree ties go to the smallest vertex index.
Permutation fill_reducing_order(const CscMatrix& upper,
                                OrderingMethod method = OrderingMethod::ApproximateMinimumDegree);

double norm_inf(std::span<const double> v);

}  // namespace qoco
