#include "qoco/linsys.hpp"

#include <string>

#include "qoco/error.hpp"

namespace qoco {

LdlBackend::LdlBackend(std::string_view name, std::unique_ptr<ConeExecutor> executor)
    : name_(name), executor_(std::move(executor)) {}

void LdlBackend::require_initialized() const {
  if (!initialized_) throw Error(ErrorCode::NotSetUp, "linear system backend used before initialize()");
}

void LdlBackend::initialize(const CscMatrix& kkt, std::span<const int> signs, std::vector<Index> update_map,
                            const ConeLayout& layout, const LinsysOptions& options) {
  if (initialized_) throw Error(ErrorCode::InvalidArgument, "initialize() may only be called once");
  if (kkt.rows != kkt.cols || signs.size() != static_cast<std::size_t>(kkt.cols)) {
    throw Error(ErrorCode::DimensionMismatch, "KKT matrix must be square with one sign per row");
  }
  if (update_map.size() != static_cast<std::size_t>(layout.block_value_count())) {
    throw Error(ErrorCode::DimensionMismatch, "update map does not cover the scaling block");
  }
  check_csc(kkt);
  options_ = options;
  kkt_ = kkt;
  signs_.assign(signs.begin(), signs.end());
  update_map_ = std::move(update_map);
  layout_.emplace(layout);

  const Permutation perm = fill_reducing_order(kkt_, options_.ordering);
  auto permuted = symmetric_permute(kkt_, perm);
  permuted_ = std::move(permuted.matrix);
  entry_map_ = std::move(permuted.entry_map);
  symbolic_ = symbolic_factor(kkt_, perm);
  initialized_ = true;
}

void LdlBackend::update(std::span<const double> block_values) {
  require_initialized();
  if (block_values.size() != update_map_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "block value count does not match the update map");
  }
  const auto& layout = *layout_;
  executor_->for_each(layout.items().size(), [&](std::size_t k) {
    const auto& item = layout.items()[k];
    const Index begin = layout.item_block_offset(k);
    const Index count = item.kind == ConeKind::Orthant ? item.dim : item.dim * (item.dim + 1) / 2;
    for (Index i = begin; i < begin + count; ++i) {
      const Index pos = update_map_[i];
      kkt_.values[pos] = block_values[i];
      permuted_.values[entry_map_[pos]] = block_values[i];
    }
  });
  factored_ = false;
}

void LdlBackend::factor() {
  require_initialized();
  ++counters_.factor_calls;
  numeric_ = numeric_factor(permuted_, symbolic_, signs_, {options_.static_reg, options_.dynamic_eps});
  factored_ = true;
}

void LdlBackend::solve(std::span<const double> rhs, std::span<double> out) {
  require_initialized();
  if (!factored_) throw Error(ErrorCode::NotSetUp, "solve() called before factor()");
  if (out.size() != rhs.size()) throw Error(ErrorCode::DimensionMismatch, "solution buffer length");
  ++counters_.solve_calls;
  const auto x = solve_refine(numeric_, symbolic_, kkt_, rhs, options_.refine_iters);
  std::copy(x.begin(), x.end(), out.begin());
}

bool is_known_algebra(std::string_view algebra) { return algebra == "builtin" || algebra == "parallel"; }

std::unique_ptr<LinsysBackend> make_backend(std::string_view algebra) {
  if (algebra == "builtin") return std::make_unique<LdlBackend>("builtin", std::make_unique<SerialExecutor>());
  if (algebra == "parallel") return std::make_unique<LdlBackend>("parallel", std::make_unique<ParallelExecutor>());
  throw Error(ErrorCode::UnknownAlgebra, "unknown algebra '" + std::string(algebra) + "'");
}

}  // namespace qoco
