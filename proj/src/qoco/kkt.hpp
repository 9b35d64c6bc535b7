#pragma once

#include <vector>

#include "qoco/cones.hpp"
#include "qoco/linsys.hpp"
#include "qoco/problem.hpp"

namespace qoco {

/// Upper triangle of
///   [ P  A'  G'    ]
///   [ A  0   0     ]
///   [ G  0  -W'W   ]
/// with rows/columns [0,n) primal, [n,n+p) equality duals, [n+p,n+p+m) cone duals.
/// Every diagonal entry is stored (possibly as an explicit zero) so the
/// factorization can regularize it.
struct KKTSystem {
  Index n = 0;
  Index p = 0;
  Index m = 0;
  CscMatrix matrix;
  /// Position in matrix.values of each -W'W entry, in ConeLayout block order.
  std::vector<Index> nt_block_entry_map;
  std::vector<int> signs;
  std::vector<double> block_values;
  std::vector<double> rhs;
  std::vector<double> sol;

  Index dim() const { return n + p + m; }
};

/// The scaling block starts as -I with the full dense pattern of each SOC block.
KKTSystem assemble_kkt(const ProblemData& data, const ConeLayout& layout);

/// Writes -W'W for `scaling` into the backend's matrix through the entry map.
/// After LinsysBackend::initialize the backend owns the live values;
/// kkt.matrix keeps the assembled pattern and initial values.
void kkt_update_values(KKTSystem& kkt, LinsysBackend& backend, const NTScalingSet& scaling,
                       const ConeLayout& layout);

/// Scaling set with W = I on every cone (s = z = e).
NTScalingSet identity_scaling(const ConeLayout& layout);

}  // namespace qoco
