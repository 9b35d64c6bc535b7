#include "qoco/kkt.hpp"

namespace qoco {

KKTSystem assemble_kkt(const ProblemData& d, const ConeLayout& layout) {
  KKTSystem kkt;
  kkt.n = d.n;
  kkt.p = d.p;
  kkt.m = d.m;
  const Index dim = kkt.dim();
  const Index np = d.n + d.p;
  const CscMatrix at = transpose(d.A);
  const CscMatrix gt = transpose(d.G);

  auto& k = kkt.matrix;
  k = CscMatrix(dim, dim);
  k.row_idx.reserve(static_cast<std::size_t>(d.P.nnz() + d.A.nnz() + d.G.nnz() + layout.block_value_count() +
                                             d.n + d.p));
  k.values.reserve(k.row_idx.capacity());
  auto push = [&](Index row, double value) {
    k.row_idx.push_back(row);
    k.values.push_back(value);
    return static_cast<Index>(k.row_idx.size()) - 1;
  };

  for (Index j = 0; j < d.n; ++j) {
    bool has_diag = false;
    for (Index p = d.P.col_ptr[j]; p < d.P.col_ptr[j + 1]; ++p) {
      push(d.P.row_idx[p], d.P.values[p]);
      has_diag = has_diag || d.P.row_idx[p] == j;
    }
    if (!has_diag) push(j, 0.0);
    k.col_ptr[j + 1] = static_cast<Index>(k.row_idx.size());
  }
  for (Index i = 0; i < d.p; ++i) {
    for (Index p = at.col_ptr[i]; p < at.col_ptr[i + 1]; ++p) push(at.row_idx[p], at.values[p]);
    push(d.n + i, 0.0);
    k.col_ptr[d.n + i + 1] = static_cast<Index>(k.row_idx.size());
  }

  kkt.nt_block_entry_map.assign(layout.block_value_count(), -1);
  for (std::size_t item_no = 0; item_no < layout.items().size(); ++item_no) {
    const auto& item = layout.items()[item_no];
    const Index block_offset = layout.item_block_offset(item_no);
    for (Index local = 0; local < item.dim; ++local) {
      const Index r = item.offset + local;
      for (Index p = gt.col_ptr[r]; p < gt.col_ptr[r + 1]; ++p) push(gt.row_idx[p], gt.values[p]);
      if (item.kind == ConeKind::Orthant) {
        kkt.nt_block_entry_map[block_offset + local] = push(np + r, -1.0);
      } else {
        for (Index row = 0; row <= local; ++row) {
          kkt.nt_block_entry_map[block_offset + local * (local + 1) / 2 + row] =
              push(np + item.offset + row, row == local ? -1.0 : 0.0);
        }
      }
      k.col_ptr[np + r + 1] = static_cast<Index>(k.row_idx.size());
    }
  }

  kkt.signs.assign(dim, -1);
  std::fill_n(kkt.signs.begin(), d.n, 1);
  kkt.block_values.assign(layout.block_value_count(), 0.0);
  kkt.rhs.assign(dim, 0.0);
  kkt.sol.assign(dim, 0.0);
  return kkt;
}

void kkt_update_values(KKTSystem& kkt, LinsysBackend& backend, const NTScalingSet& scaling,
                       const ConeLayout& layout) {
  nt_block_values(scaling, layout, kkt.block_values, backend.executor());
  backend.update(kkt.block_values);
}

NTScalingSet identity_scaling(const ConeLayout& layout) {
  NTScalingSet nt;
  nt.w.assign(layout.dim(), 0.0);
  nt.eta.assign(layout.spec().soc_count(), 1.0);
  nt.lambda = cone_identity(layout);
  for (const auto& v : layout.views()) {
    if (v.kind == ConeKind::Orthant) {
      std::fill_n(nt.w.begin() + v.offset, v.dim, 1.0);
    } else {
      nt.w[v.offset] = 1.0;
    }
  }
  return nt;
}

}  // namespace qoco
