#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qoco/cones.hpp"
#include "qoco/ldl.hpp"
#include "qoco/sparse.hpp"

namespace qoco {

struct LinsysOptions {
  double static_reg = 1e-8;
  double dynamic_eps = 1e-14;
  int refine_iters = 3;
  OrderingMethod ordering = OrderingMethod::ApproximateMinimumDegree;
};

struct LinsysCounters {
  std::int64_t factor_calls = 0;
  std::int64_t solve_calls = 0;
};

/// Linear-system backend for the KKT matrix.
///
/// Lifecycle: initialize() once with the full pattern (ordering and symbolic
/// analysis), then any number of update() / factor() / solve() calls. The
/// pattern is frozen after initialize(); update() only overwrites values of
/// the scaling block through the position map handed to initialize().
class LinsysBackend {
 public:
  virtual ~LinsysBackend() = default;

  virtual std::string_view name() const = 0;

  /// `signs` gives the expected pivot sign per row (+1 primal, -1 dual).
  /// `update_map[i]` is the position in kkt.values written by block value i;
  /// its order matches `layout.block_value_count()`.
  virtual void initialize(const CscMatrix& kkt, std::span<const int> signs, std::vector<Index> update_map,
                          const ConeLayout& layout, const LinsysOptions& options) = 0;

  virtual void update(std::span<const double> block_values) = 0;
  virtual void factor() = 0;
  virtual void solve(std::span<const double> rhs, std::span<double> out) = 0;

  /// Execution strategy for per-cone work tied to this backend.
  virtual ConeExecutor& executor() = 0;

  virtual const CscMatrix& matrix() const = 0;
  virtual const SymbolicFactor& symbolic() const = 0;
  virtual const NumericFactor& numeric() const = 0;

  const LinsysCounters& counters() const { return counters_; }
  void reset_counters() { counters_ = {}; }

 protected:
  LinsysCounters counters_;
};

/// Simplicial LDL^T backend. The per-cone work (scaling block updates and
/// every cone operation the solver routes through executor()) runs on the
/// given executor; factorization and triangular solves are shared.
class LdlBackend : public LinsysBackend {
 public:
  LdlBackend(std::string_view name, std::unique_ptr<ConeExecutor> executor);

  std::string_view name() const override { return name_; }
  void initialize(const CscMatrix& kkt, std::span<const int> signs, std::vector<Index> update_map,
                  const ConeLayout& layout, const LinsysOptions& options) override;
  void update(std::span<const double> block_values) override;
  void factor() override;
  void solve(std::span<const double> rhs, std::span<double> out) override;
  ConeExecutor& executor() override { return *executor_; }

  const CscMatrix& matrix() const override { return kkt_; }
  const SymbolicFactor& symbolic() const override { return symbolic_; }
  const NumericFactor& numeric() const override { return numeric_; }

 private:
  void require_initialized() const;

  std::string_view name_;
  std::unique_ptr<ConeExecutor> executor_;
  bool initialized_ = false;
  bool factored_ = false;
  LinsysOptions options_;
  std::optional<ConeLayout> layout_;
  CscMatrix kkt_;
  CscMatrix permuted_;
  std::vector<Index> entry_map_;
  std::vector<Index> update_map_;
  std::vector<int> signs_;
  SymbolicFactor symbolic_;
  NumericFactor numeric_;
};

/// "builtin" (serial) or "parallel"; anything else throws UnknownAlgebra.
std::unique_ptr<LinsysBackend> make_backend(std::string_view algebra);

bool is_known_algebra(std::string_view algebra);

}  // namespace qoco
