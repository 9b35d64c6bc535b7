#include "qoco/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "qoco/error.hpp"

namespace qoco {

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Huber: return "huber";
    case Family::Portfolio: return "portfolio";
    case Family::MultiPeriodPortfolio: return "multiperiod_portfolio";
    case Family::GroupLasso: return "group_lasso";
    case Family::TVDenoising: return "tv_denoising";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (family_name(f) == name) return f;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown problem family '" + std::string(name) + "'");
}

std::string problem_name(const GeneratorConfig& cfg) {
  return std::string(family_name(cfg.family)) + "_" + std::to_string(cfg.size_param);
}

Index smallest_size(Family family) {
  switch (family) {
    case Family::Huber: return 50;
    case Family::Portfolio: return 2;
    case Family::MultiPeriodPortfolio: return 2;
    case Family::GroupLasso: return 5;
    case Family::TVDenoising: return 32;
  }
  return 1;
}

namespace {

using Rng = std::mt19937_64;

class ProblemBuilder {
 public:
  ProblemBuilder(Index n, Index p, Index m) : n_(n), p_(p), m_(m), c(n, 0.0), b(p, 0.0), h(m, 0.0) {}

  void add_p(Index i, Index j, double v) { p_entries_.push_back({std::min(i, j), std::max(i, j), v}); }
  void add_a(Index row, Index col, double v) { a_entries_.push_back({row, col, v}); }
  void add_g(Index row, Index col, double v) { g_entries_.push_back({row, col, v}); }

  ProblemData build(ConeSpec cone) && {
    ProblemData d;
    d.n = n_;
    d.p = p_;
    d.m = m_;
    d.P = csc_from_triplets(n_, n_, p_entries_);
    d.A = csc_from_triplets(p_, n_, a_entries_);
    d.G = csc_from_triplets(m_, n_, g_entries_);
    d.c = std::move(c);
    d.b = std::move(b);
    d.h = std::move(h);
    d.cone = std::move(cone);
    validate_problem(d);
    return d;
  }

 private:
  Index n_, p_, m_;
  std::vector<Triplet> p_entries_, a_entries_, g_entries_;

 public:
  std::vector<double> c, b, h;
};

std::uint64_t mix_seed(std::uint64_t seed, Family family, Index size) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(family), static_cast<std::uint32_t>(size)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (std::uint64_t{words[0]} << 32) | words[1];
}

// Column-major sparse matrix with round(density * rows) distinct rows per
// column (at least one), entries drawn from `draw`.
template <typename Draw>
CscMatrix random_sparse(Index rows, Index cols, double density, Rng& rng, Draw&& draw) {
  const Index per_col = std::clamp<Index>(static_cast<Index>(std::lround(density * rows)), 1, rows);
  CscMatrix m(rows, cols);
  std::vector<Index> picked;
  std::unordered_set<Index> seen;
  for (Index j = 0; j < cols; ++j) {
    picked.clear();
    seen.clear();
    // Floyd's sampling of per_col distinct rows.
    for (Index r = rows - per_col; r < rows; ++r) {
      const Index t = std::uniform_int_distribution<Index>(0, r)(rng);
      const Index pick = seen.count(t) ? r : t;
      seen.insert(pick);
      picked.push_back(pick);
    }
    std::sort(picked.begin(), picked.end());
    for (Index r : picked) {
      m.row_idx.push_back(r);
      m.values.push_back(draw(rng));
    }
    m.col_ptr[j + 1] = static_cast<Index>(m.row_idx.size());
  }
  return m;
}

// minimize sum huber(a_i'x - b_i) as  u'u + 2 delta 1'v
//   s.t. -(u + v) <= Ax - b <= u + v,  0 <= u <= delta,  v >= 0.
ProblemData huber(const GeneratorConfig& cfg, Rng& rng) {
  const Index n_feat = cfg.size_param;
  const Index rows = 10 * n_feat;
  const double delta = cfg.huber_delta;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const CscMatrix a = random_sparse(rows, n_feat, 0.1, rng, [&](Rng& g) { return normal(g); });

  std::vector<double> x_true(n_feat);
  for (auto& v : x_true) v = normal(rng) / std::sqrt(static_cast<double>(n_feat));
  std::vector<double> rhs(rows, 0.0);
  spmv(a, x_true, false, rhs);
  for (auto& v : rhs) {
    v += 0.1 * normal(rng);
    if (unif(rng) < 0.05) v += 10.0 * normal(rng);  // outliers
  }

  const Index u0 = n_feat, v0 = n_feat + rows;
  ProblemBuilder pb(n_feat + 2 * rows, 0, 5 * rows);
  for (Index i = 0; i < rows; ++i) {
    pb.add_p(u0 + i, u0 + i, 2.0);
    pb.c[v0 + i] = 2.0 * delta;
  }
  for (Index j = 0; j < n_feat; ++j) {
    for (Index k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) {
      pb.add_g(a.row_idx[k], j, a.values[k]);
      pb.add_g(rows + a.row_idx[k], j, -a.values[k]);
    }
  }
  for (Index i = 0; i < rows; ++i) {
    pb.add_g(i, u0 + i, -1.0);
    pb.add_g(i, v0 + i, -1.0);
    pb.h[i] = rhs[i];
    pb.add_g(rows + i, u0 + i, -1.0);
    pb.add_g(rows + i, v0 + i, -1.0);
    pb.h[rows + i] = -rhs[i];
    pb.add_g(2 * rows + i, u0 + i, -1.0);
    pb.add_g(3 * rows + i, u0 + i, 1.0);
    pb.h[3 * rows + i] = delta;
    pb.add_g(4 * rows + i, v0 + i, -1.0);
  }
  return std::move(pb).build({5 * rows, {}});
}

// minimize x'Dx + y'y - mu'x / gamma  s.t.  y = F'x, 1'x = 1, x >= 0,
// with 100k assets and k factors.
ProblemData portfolio(const GeneratorConfig& cfg, Rng& rng) {
  const Index k = cfg.size_param;
  const Index n = 100 * k;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const CscMatrix f = random_sparse(n, k, 0.5, rng, [&](Rng& g) { return normal(g); });

  ProblemBuilder pb(n + k, k + 1, n);
  const double d_scale = std::sqrt(static_cast<double>(k));
  for (Index i = 0; i < n; ++i) {
    pb.add_p(i, i, 2.0 * d_scale * unif(rng));
    pb.c[i] = -normal(rng) / cfg.gamma;
    pb.add_a(k, i, 1.0);
    pb.add_g(i, i, -1.0);
  }
  for (Index j = 0; j < k; ++j) {
    pb.add_p(n + j, n + j, 2.0);
    pb.add_a(j, n + j, 1.0);
    for (Index p = f.col_ptr[j]; p < f.col_ptr[j + 1]; ++p) pb.add_a(j, f.row_idx[p], -f.values[p]);
  }
  pb.b[k] = 1.0;
  return std::move(pb).build({n, {}});
}

// Per period t: variables (w_t, y_t, tau_t). The l1 leverage bound is
// |w_t| <= tau_t, 1'tau_t <= L_max.
ProblemData multiperiod_portfolio(const GeneratorConfig& cfg, Rng& rng) {
  const Index periods = cfg.size_param;
  const Index n = cfg.mpp_assets;
  const Index kf = cfg.mpp_factors;
  const Index block = 2 * n + kf;
  const Index rows_per = 1 + kf;
  const Index cones_per = 2 * kf + 2 * n + 1;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const CscMatrix f = random_sparse(n, kf, 0.1, rng, [&](Rng& g) { return 0.02 * unif(g); });
  std::vector<double> risk(n);
  for (auto& v : risk) v = unif(rng);
  const double w_init = 1.0 / static_cast<double>(n);

  ProblemBuilder pb(periods * block, periods * rows_per, periods * cones_per);
  for (Index t = 0; t < periods; ++t) {
    const Index w = t * block, y = w + n, tau = y + kf;
    const Index eq = t * rows_per;
    const Index cone = t * cones_per;
    for (Index i = 0; i < n; ++i) {
      // w'Dw + |w_t - w_{t-1}|^2
      pb.add_p(w + i, w + i, 2.0 * risk[i] + 2.0);
      pb.c[w + i] = -0.05 * normal(rng) / cfg.gamma;
      if (t == 0) {
        pb.c[w + i] -= 2.0 * w_init;
      } else {
        pb.add_p(w - block + i, w - block + i, 2.0);
        pb.add_p(w - block + i, w + i, -2.0);
      }
      pb.add_a(eq, w + i, 1.0);
      pb.add_g(cone + 2 * kf + i, w + i, 1.0);
      pb.add_g(cone + 2 * kf + i, tau + i, -1.0);
      pb.add_g(cone + 2 * kf + n + i, w + i, -1.0);
      pb.add_g(cone + 2 * kf + n + i, tau + i, -1.0);
      pb.add_g(cone + 2 * kf + 2 * n, tau + i, 1.0);
    }
    pb.b[eq] = 1.0;
    pb.h[cone + 2 * kf + 2 * n] = cfg.leverage_max;
    for (Index j = 0; j < kf; ++j) {
      pb.add_p(y + j, y + j, 2.0);
      pb.add_a(eq + 1 + j, y + j, 1.0);
      for (Index p = f.col_ptr[j]; p < f.col_ptr[j + 1]; ++p) pb.add_a(eq + 1 + j, w + f.row_idx[p], -f.values[p]);
      pb.add_g(cone + j, y + j, -1.0);
      pb.add_g(cone + kf + j, y + j, 1.0);
      pb.h[cone + kf + j] = 0.01;
    }
  }
  return std::move(pb).build({periods * cones_per, {}});
}

// minimize |r|^2 + lambda sum t_g  s.t.  Ax - r = b,  (t_g, x_g) in SOC(11).
ProblemData group_lasso(const GeneratorConfig& cfg, Rng& rng) {
  const Index groups = cfg.size_param;
  const Index group_size = 10;
  const Index nx = group_size * groups;
  const Index rows = 250 * groups;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const CscMatrix a = random_sparse(rows, nx, 0.1, rng, [&](Rng& g) { return normal(g); });

  std::vector<double> x_true(nx, 0.0);
  for (Index g = 0; g < groups; ++g) {
    if (unif(rng) < 0.5) continue;
    for (Index i = 0; i < group_size; ++i) x_true[g * group_size + i] = normal(rng);
  }
  std::vector<double> rhs(rows, 0.0);
  spmv(a, x_true, false, rhs);
  for (auto& v : rhs) v += 0.1 * normal(rng);

  double lambda = cfg.lambda_reg;
  if (lambda <= 0.0) {
    std::vector<double> atb(nx, 0.0);
    spmv(a, rhs, true, atb);
    lambda = 0.1 * norm_inf(atb);
  }

  const Index t0 = nx, r0 = nx + groups;
  ProblemBuilder pb(nx + groups + rows, rows, groups * (group_size + 1));
  for (Index i = 0; i < rows; ++i) {
    pb.add_p(r0 + i, r0 + i, 2.0);
    pb.add_a(i, r0 + i, -1.0);
    pb.b[i] = rhs[i];
  }
  for (Index j = 0; j < nx; ++j) {
    for (Index k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) pb.add_a(a.row_idx[k], j, a.values[k]);
  }
  for (Index g = 0; g < groups; ++g) {
    const Index row = g * (group_size + 1);
    pb.c[t0 + g] = lambda;
    pb.add_g(row, t0 + g, -1.0);
    for (Index i = 0; i < group_size; ++i) pb.add_g(row + 1 + i, g * group_size + i, -1.0);
  }
  return std::move(pb).build({0, std::vector<Index>(groups, group_size + 1)});
}

// Piecewise-constant test image (rectangles and a disk) plus Gaussian noise.
std::vector<double> synthetic_image(Index side, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> img(static_cast<std::size_t>(side) * side, 0.2);
  const double s = static_cast<double>(side);
  for (int shape = 0; shape < 4; ++shape) {
    const double x0 = unif(rng) * s, y0 = unif(rng) * s;
    const double w = (0.15 + 0.35 * unif(rng)) * s, hgt = (0.15 + 0.35 * unif(rng)) * s;
    const double level = unif(rng);
    for (Index i = 0; i < side; ++i) {
      for (Index j = 0; j < side; ++j) {
        if (i >= y0 && i < y0 + hgt && j >= x0 && j < x0 + w) img[i * side + j] = level;
      }
    }
  }
  const double cx = unif(rng) * s, cy = unif(rng) * s, radius = (0.1 + 0.2 * unif(rng)) * s;
  const double level = unif(rng);
  for (Index i = 0; i < side; ++i) {
    for (Index j = 0; j < side; ++j) {
      if ((i - cy) * (i - cy) + (j - cx) * (j - cx) <= radius * radius) img[i * side + j] = level;
    }
  }
  for (auto& v : img) v += 0.1 * normal(rng);
  return img;
}

// minimize sum t_ij + lambda/2 |U - Y|_F^2  s.t.  (t_ij, D_x U_ij, D_y U_ij) in SOC(3)
// for every pixel with both forward differences defined.
ProblemData tv_denoising(const GeneratorConfig& cfg, Rng& rng) {
  const Index side = cfg.size_param;
  if (side < 2) throw Error(ErrorCode::InvalidArgument, "TV denoising needs an image side of at least 2");
  const Index pixels = side * side;
  const Index inner = (side - 1) * (side - 1);
  const auto noisy = synthetic_image(side, rng);

  ProblemBuilder pb(pixels + inner, 0, 3 * inner);
  for (Index i = 0; i < pixels; ++i) {
    pb.add_p(i, i, cfg.lambda_tv);
    pb.c[i] = -cfg.lambda_tv * noisy[i];
  }
  for (Index i = 0; i + 1 < side; ++i) {
    for (Index j = 0; j + 1 < side; ++j) {
      const Index k = i * (side - 1) + j;
      const Index row = 3 * k;
      const Index u = i * side + j;
      pb.c[pixels + k] = 1.0;
      pb.add_g(row, pixels + k, -1.0);
      pb.add_g(row + 1, u + side, -1.0);
      pb.add_g(row + 1, u, 1.0);
      pb.add_g(row + 2, u + 1, -1.0);
      pb.add_g(row + 2, u, 1.0);
    }
  }
  return std::move(pb).build({0, std::vector<Index>(inner, 3)});
}

}  // namespace

ProblemData generate_problem(const GeneratorConfig& cfg) {
  if (cfg.size_param < 1) throw Error(ErrorCode::InvalidArgument, "size_param must be >= 1");
  Rng rng(mix_seed(cfg.seed, cfg.family, cfg.size_param));
  switch (cfg.family) {
    case Family::Huber: return huber(cfg, rng);
    case Family::Portfolio: return portfolio(cfg, rng);
    case Family::MultiPeriodPortfolio: return multiperiod_portfolio(cfg, rng);
    case Family::GroupLasso: return group_lasso(cfg, rng);
    case Family::TVDenoising: return tv_denoising(cfg, rng);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown family");
}

}  // namespace qoco
