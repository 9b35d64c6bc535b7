#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "qoco/parallel.hpp"
#include "qoco/problem.hpp"

namespace qoco {

enum class ConeKind { Orthant, SecondOrder };

struct ConeView {
  ConeKind kind;
  Index offset;
  Index dim;
};

/// Number of cones in the barrier sense: one per orthant coordinate plus one
/// per second-order cone.
Index cone_degree(const ConeSpec& cone);

/// Product-cone geometry plus the per-cone work decomposition shared by the
/// serial and parallel executors. Work items are orthant chunks followed by
/// one item per second-order cone; both executors use the same items, so
/// reductions fold partial results in the same order.
class ConeLayout {
 public:
  static constexpr Index kOrthantChunk = 2048;

  explicit ConeLayout(ConeSpec spec, Index orthant_chunk = kOrthantChunk);

  const ConeSpec& spec() const { return spec_; }
  Index dim() const { return dim_; }
  Index degree() const { return cone_degree(spec_); }

  /// Orthant block (when l > 0) then each SOC, tiling [0, m).
  const std::vector<ConeView>& views() const { return views_; }

  const std::vector<ConeView>& items() const { return items_; }
  /// For SOC items, the index of that cone among the SOCs; -1 for orthant chunks.
  Index item_soc(std::size_t item) const { return item_soc_[item]; }
  /// Offset of the item's entries within the flattened -W'W block values.
  Index item_block_offset(std::size_t item) const { return item_block_offset_[item]; }

  /// l + sum q(q+1)/2: orthant diagonal plus each SOC's dense upper triangle.
  Index block_value_count() const { return block_value_count_; }

 private:
  ConeSpec spec_;
  Index dim_ = 0;
  Index block_value_count_ = 0;
  std::vector<ConeView> views_;
  std::vector<ConeView> items_;
  std::vector<Index> item_soc_;
  std::vector<Index> item_block_offset_;
};

class ConeExecutor {
 public:
  virtual ~ConeExecutor() = default;
  /// Calls fn(i) once for every i in [0, count).
  virtual void for_each(std::size_t count, const std::function<void(std::size_t)>& fn) = 0;
};

class SerialExecutor final : public ConeExecutor {
 public:
  void for_each(std::size_t count, const std::function<void(std::size_t)>& fn) override;
};

class ParallelExecutor final : public ConeExecutor {
 public:
  /// workers = 0 picks max(2, hardware concurrency).
  explicit ParallelExecutor(unsigned workers = 0);
  void for_each(std::size_t count, const std::function<void(std::size_t)>& fn) override;
  unsigned workers() const { return pool_.size(); }

 private:
  WorkerPool pool_;
};

SerialExecutor& serial_executor();

/// Nesterov-Todd scaling of a primal-dual pair. Orthant coordinates carry
/// w_i = sqrt(s_i / z_i); each SOC block carries its normalized scaling point
/// w_bar (w_bar_0^2 - |w_bar_1|^2 = 1) in `w` and a factor eta, with
///   W = eta [ w_bar_0  w_bar_1' ; w_bar_1  I + w_bar_1 w_bar_1' / (1 + w_bar_0) ],
///   W'W = eta^2 (2 w_bar w_bar' - J).
struct NTScalingSet {
  std::vector<double> w;
  std::vector<double> eta;
  std::vector<double> lambda;  // W z = W^{-1} s
};

enum class ScalingMode { Multiply, MultiplyInverse };

inline constexpr double kInfiniteStep = std::numeric_limits<double>::max();

std::vector<double> cone_identity(const ConeLayout& layout);
bool is_interior(std::span<const double> u, const ConeLayout& layout);

double cone_dot(std::span<const double> u, std::span<const double> v, const ConeLayout& layout,
                ConeExecutor& exec = serial_executor());

std::vector<double> jordan_product(std::span<const double> u, std::span<const double> v,
                                   const ConeLayout& layout, ConeExecutor& exec = serial_executor());

/// Returns w with u o w = v. u must be interior.
std::vector<double> jordan_divide(std::span<const double> u, std::span<const double> v,
                                  const ConeLayout& layout, ConeExecutor& exec = serial_executor());

/// Throws NotInterior unless both s and z are strictly interior.
NTScalingSet compute_nt_scaling(std::span<const double> s, std::span<const double> z,
                                const ConeLayout& layout, ConeExecutor& exec = serial_executor());

std::vector<double> apply_scaling(const NTScalingSet& scaling, std::span<const double> u, ScalingMode mode,
                                  const ConeLayout& layout, ConeExecutor& exec = serial_executor());

/// Entries of -W'W in ConeLayout::block_value_count() order: orthant
/// diagonal, then each SOC block's upper triangle column by column.
void nt_block_values(const NTScalingSet& scaling, const ConeLayout& layout, std::span<double> out,
                     ConeExecutor& exec = serial_executor());

/// sup{a >= 0 : u + a du in K}; kInfiniteStep if the ray never leaves K.
/// Throws NotInterior if u is not strictly interior.
double max_step_to_boundary(std::span<const double> u, std::span<const double> du, const ConeLayout& layout,
                            ConeExecutor& exec = serial_executor());

/// u + (1 + a) e where a is the largest per-cone violation, or u itself when
/// it is already interior (a < 0).
std::vector<double> bring_to_interior(std::span<const double> u, const ConeLayout& layout,
                                      ConeExecutor& exec = serial_executor());

/// s'z / degree(K).
double compute_mu(std::span<const double> s, std::span<const double> z, const ConeLayout& layout,
                  ConeExecutor& exec = serial_executor());

}  // namespace qoco
