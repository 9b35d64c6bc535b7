#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "qoco/error.hpp"
#include "qoco/sparse.hpp"

namespace qoco {
namespace {

// Approximate minimum degree on a quotient graph. Each vertex is a variable
// until it is eliminated, at which point it becomes an element whose member
// list is the set of variables it connects. Degrees use the approximate
// external-degree bound |A_i| + |L_p \ i| + sum_e |L_e \ L_p|.
class MinimumDegree {
 public:
  explicit MinimumDegree(const CscMatrix& upper) : n_(upper.cols) {
    var_adj_.resize(n_);
    elem_adj_.resize(n_);
    elem_vars_.resize(n_);
    state_.assign(n_, State::Variable);
    degree_.assign(n_, 0);
    mark_.assign(n_, 0);
    w_.assign(n_, 0);
    wmark_.assign(n_, 0);

    for (Index j = 0; j < n_; ++j) {
      for (Index k = upper.col_ptr[j]; k < upper.col_ptr[j + 1]; ++k) {
        const Index i = upper.row_idx[k];
        if (i == j) continue;
        var_adj_[i].push_back(j);
        var_adj_[j].push_back(i);
      }
    }
    for (auto& adj : var_adj_) {
      std::sort(adj.begin(), adj.end());
      adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }

    const double dense_cut = std::max(16.0, 10.0 * std::sqrt(static_cast<double>(n_)));
    for (Index v = 0; v < n_; ++v) {
      if (static_cast<double>(var_adj_[v].size()) > dense_cut) {
        state_[v] = State::Dense;
        dense_.push_back(v);
      }
    }
    for (Index v = 0; v < n_; ++v) {
      if (state_[v] != State::Variable) continue;
      std::erase_if(var_adj_[v], [&](Index u) { return state_[u] == State::Dense; });
      degree_[v] = static_cast<Index>(var_adj_[v].size());
      queue_.emplace(degree_[v], v);
    }
    remaining_ = static_cast<Index>(queue_.size());
  }

  std::vector<Index> run() {
    std::vector<Index> order;
    order.reserve(n_);
    while (!queue_.empty()) {
      const Index p = queue_.begin()->second;
      queue_.erase(queue_.begin());
      eliminate(p);
      order.push_back(p);
    }
    order.insert(order.end(), dense_.begin(), dense_.end());
    return order;
  }

 private:
  enum class State { Variable, Element, Absorbed, Dense };

  bool is_var(Index v) const { return state_[v] == State::Variable; }
  bool is_elem(Index e) const { return state_[e] == State::Element; }

  void eliminate(Index p) {
    --remaining_;
    const long stamp = ++stamp_;
    std::vector<Index> lp;
    mark_[p] = stamp;
    for (Index v : var_adj_[p]) {
      if (is_var(v) && mark_[v] != stamp) {
        mark_[v] = stamp;
        lp.push_back(v);
      }
    }
    for (Index e : elem_adj_[p]) {
      if (!is_elem(e)) continue;
      for (Index v : elem_vars_[e]) {
        if (is_var(v) && mark_[v] != stamp) {
          mark_[v] = stamp;
          lp.push_back(v);
        }
      }
      absorb(e);
    }
    std::sort(lp.begin(), lp.end());
    state_[p] = State::Element;
    std::vector<Index>().swap(var_adj_[p]);
    std::vector<Index>().swap(elem_adj_[p]);

    // |L_e \ L_p| for every live element reachable from L_p.
    for (Index i : lp) {
      for (Index e : elem_adj_[i]) {
        if (!is_elem(e)) continue;
        if (wmark_[e] != stamp) {
          wmark_[e] = stamp;
          w_[e] = live_size(e);
        }
        --w_[e];
      }
    }
    for (Index i : lp) {
      for (Index e : elem_adj_[i]) {
        if (is_elem(e) && wmark_[e] == stamp && w_[e] == 0) absorb(e);
      }
    }

    const auto lp_ext = static_cast<Index>(lp.size()) - 1;
    for (Index i : lp) {
      auto& ea = elem_adj_[i];
      std::erase_if(ea, [&](Index e) { return !is_elem(e); });
      Index deg = static_cast<Index>(lp_ext);
      for (Index e : ea) deg += w_[e];
      ea.push_back(p);

      auto& va = var_adj_[i];
      std::erase_if(va, [&](Index v) { return !is_var(v) || mark_[v] == stamp; });
      deg += static_cast<Index>(va.size());
      deg = std::min(deg, remaining_ - 1);

      queue_.erase({degree_[i], i});
      degree_[i] = deg;
      queue_.emplace(deg, i);
    }
    elem_vars_[p] = std::move(lp);
  }

  Index live_size(Index e) {
    auto& vars = elem_vars_[e];
    std::erase_if(vars, [&](Index v) { return !is_var(v); });
    return static_cast<Index>(vars.size());
  }

  void absorb(Index e) {
    state_[e] = State::Absorbed;
    std::vector<Index>().swap(elem_vars_[e]);
  }

  Index n_;
  Index remaining_ = 0;
  long stamp_ = 0;
  std::vector<std::vector<Index>> var_adj_;
  std::vector<std::vector<Index>> elem_adj_;
  std::vector<std::vector<Index>> elem_vars_;
  std::vector<State> state_;
  std::vector<Index> degree_;
  std::vector<long> mark_;
  std::vector<Index> w_;
  std::vector<long> wmark_;
  std::vector<Index> dense_;
  std::set<std::pair<Index, Index>> queue_;
};

}  // namespace

Permutation fill_reducing_order(const CscMatrix& upper, OrderingMethod method) {
  if (upper.rows != upper.cols) {
    throw Error(ErrorCode::DimensionMismatch, "ordering needs a square pattern");
  }
  if (method == OrderingMethod::Natural) return Permutation::identity(upper.cols);
  return Permutation::from_forward(MinimumDegree(upper).run());
}

}  // namespace qoco
