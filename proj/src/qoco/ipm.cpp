#include "qoco/ipm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "qoco/error.hpp"

namespace qoco {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NumericalError, std::string("non-finite ") + what);
  }
}

}  // namespace

Residuals compute_residuals(const ProblemData& d, const Iterate& it) {
  Residuals r;
  std::vector<double> px(d.n, 0.0), aty(d.n, 0.0), gtz(d.n, 0.0), ax(d.p, 0.0), gx(d.m, 0.0);
  symv_upper(d.P, it.x, px);
  spmv(d.A, it.y, true, aty);
  spmv(d.G, it.z, true, gtz);
  spmv(d.A, it.x, false, ax);
  spmv(d.G, it.x, false, gx);

  r.r_dual.resize(d.n);
  for (Index i = 0; i < d.n; ++i) r.r_dual[i] = px[i] + d.c[i] + aty[i] + gtz[i];
  r.r_eq.resize(d.p);
  for (Index i = 0; i < d.p; ++i) r.r_eq[i] = ax[i] - d.b[i];
  r.r_cone.resize(d.m);
  for (Index i = 0; i < d.m; ++i) r.r_cone[i] = gx[i] + it.s[i] - d.h[i];

  r.gap = dot(it.s, it.z);
  r.objective_primal = 0.5 * dot(it.x, px) + dot(d.c, it.x);

  r.px_norm = norm_inf(px);
  r.aty_norm = norm_inf(aty);
  r.gtz_norm = norm_inf(gtz);
  r.c_norm = norm_inf(d.c);
  r.ax_norm = norm_inf(ax);
  r.b_norm = norm_inf(d.b);
  r.gx_norm = norm_inf(gx);
  r.s_norm = norm_inf(it.s);
  r.h_norm = norm_inf(d.h);
  return r;
}

std::optional<SolveStatus> check_termination(const Residuals& r, const Iterate&, const Settings& st) {
  const double dual_tol =
      st.eps_abs + st.eps_rel * std::max({r.px_norm, r.aty_norm, r.gtz_norm, r.c_norm});
  const double eq_tol = st.eps_abs + st.eps_rel * std::max(r.ax_norm, r.b_norm);
  const double cone_tol = st.eps_abs + st.eps_rel * std::max({r.gx_norm, r.s_norm, r.h_norm});
  const double gap_tol = st.eps_abs + st.eps_rel * std::max(std::abs(r.objective_primal), 1.0);
  if (norm_inf(r.r_dual) <= dual_tol && norm_inf(r.r_eq) <= eq_tol && norm_inf(r.r_cone) <= cone_tol &&
      r.gap <= gap_tol) {
    return SolveStatus::Solved;
  }
  return std::nullopt;
}

IpmContext make_context(ProblemData data, const Settings& settings, std::string_view algebra) {
  validate_settings(settings);
  validate_problem(data);
  auto backend = make_backend(algebra);
  ConeLayout layout(data.cone);
  KKTSystem kkt = assemble_kkt(data, layout);
  const LinsysOptions options{settings.static_reg, 1e-14, settings.refine_iters,
                              OrderingMethod::ApproximateMinimumDegree};
  backend->initialize(kkt.matrix, kkt.signs, kkt.nt_block_entry_map, layout, options);
  return IpmContext{std::move(data), settings, std::move(layout), std::move(kkt), std::move(backend)};
}

Iterate initialize_iterate(IpmContext& ctx) {
  const auto& d = ctx.data;
  auto& kkt = ctx.kkt;
  auto& backend = *ctx.backend;
  auto& exec = backend.executor();
  const Index np = d.n + d.p;

  kkt_update_values(kkt, backend, identity_scaling(ctx.layout), ctx.layout);
  backend.factor();

  Iterate it;
  std::fill(kkt.rhs.begin(), kkt.rhs.end(), 0.0);
  std::copy(d.b.begin(), d.b.end(), kkt.rhs.begin() + d.n);
  std::copy(d.h.begin(), d.h.end(), kkt.rhs.begin() + np);
  backend.solve(kkt.rhs, kkt.sol);
  it.x.assign(kkt.sol.begin(), kkt.sol.begin() + d.n);
  std::vector<double> v(kkt.sol.begin() + np, kkt.sol.end());
  for (auto& x : v) x = -x;
  it.s = bring_to_interior(v, ctx.layout, exec);

  std::fill(kkt.rhs.begin(), kkt.rhs.end(), 0.0);
  for (Index i = 0; i < d.n; ++i) kkt.rhs[i] = -d.c[i];
  backend.solve(kkt.rhs, kkt.sol);
  it.y.assign(kkt.sol.begin() + d.n, kkt.sol.begin() + np);
  v.assign(kkt.sol.begin() + np, kkt.sol.end());
  it.z = bring_to_interior(v, ctx.layout, exec);

  require_finite(it.x, "initial x");
  require_finite(it.y, "initial y");
  it.mu = compute_mu(it.s, it.z, ctx.layout, exec);
  return it;
}

namespace {

struct Direction {
  std::vector<double> dx, dy, dz, ds;
};

// Solves the scaled Newton system for a complementarity target `ds_target`
// (the right-hand side of lambda o (W dz + W^{-1} ds) = -ds_target):
//   [P A' G'; A 0 0; G 0 -W'W] (dx, dy, dz) = (-r_dual, -r_eq, -r_cone + W (lambda \ ds_target))
//   ds = -W (lambda \ ds_target + W dz)
Direction solve_direction(IpmContext& ctx, const Residuals& res, const NTScalingSet& nt,
                          std::span<const double> ds_target) {
  const auto& d = ctx.data;
  auto& kkt = ctx.kkt;
  auto& exec = ctx.backend->executor();
  const Index np = d.n + d.p;

  const auto ratio = jordan_divide(nt.lambda, ds_target, ctx.layout, exec);
  const auto w_ratio = apply_scaling(nt, ratio, ScalingMode::Multiply, ctx.layout, exec);
  for (Index i = 0; i < d.n; ++i) kkt.rhs[i] = -res.r_dual[i];
  for (Index i = 0; i < d.p; ++i) kkt.rhs[d.n + i] = -res.r_eq[i];
  for (Index i = 0; i < d.m; ++i) kkt.rhs[np + i] = -res.r_cone[i] + w_ratio[i];

  ctx.backend->solve(kkt.rhs, kkt.sol);
  require_finite(kkt.sol, "search direction");

  Direction dir;
  dir.dx.assign(kkt.sol.begin(), kkt.sol.begin() + d.n);
  dir.dy.assign(kkt.sol.begin() + d.n, kkt.sol.begin() + np);
  dir.dz.assign(kkt.sol.begin() + np, kkt.sol.end());
  auto wdz = apply_scaling(nt, dir.dz, ScalingMode::Multiply, ctx.layout, exec);
  for (Index i = 0; i < d.m; ++i) wdz[i] += ratio[i];
  dir.ds = apply_scaling(nt, wdz, ScalingMode::Multiply, ctx.layout, exec);
  for (auto& x : dir.ds) x = -x;
  require_finite(dir.ds, "slack direction");
  return dir;
}

double boundary_step(IpmContext& ctx, const Iterate& it, const Direction& dir) {
  auto& exec = ctx.backend->executor();
  return std::min(max_step_to_boundary(it.s, dir.ds, ctx.layout, exec),
                  max_step_to_boundary(it.z, dir.dz, ctx.layout, exec));
}

}  // namespace

StepInfo ipm_step(IpmContext& ctx, const Residuals& res, Iterate& it, const StepControl& control) {
  const auto& layout = ctx.layout;
  auto& exec = ctx.backend->executor();
  StepInfo info;

  const auto nt = compute_nt_scaling(it.s, it.z, layout, exec);
  kkt_update_values(ctx.kkt, *ctx.backend, nt, layout);
  ctx.backend->factor();

  const double mu = compute_mu(it.s, it.z, layout, exec);
  info.mu_before = mu;

  // Predictor.
  const auto lambda_sq = jordan_product(nt.lambda, nt.lambda, layout, exec);
  const Direction aff = solve_direction(ctx, res, nt, lambda_sq);
  info.alpha_affine = std::min(1.0, boundary_step(ctx, it, aff));

  std::vector<double> s_aff(it.s), z_aff(it.z);
  for (Index i = 0; i < layout.dim(); ++i) {
    s_aff[i] += info.alpha_affine * aff.ds[i];
    z_aff[i] += info.alpha_affine * aff.dz[i];
  }
  const double mu_aff = compute_mu(s_aff, z_aff, layout, exec);
  info.sigma = control.sigma ? *control.sigma : std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

  // Corrector: lambda o lambda + (W^{-1} ds_aff) o (W dz_aff) - sigma mu e.
  std::vector<double> target = lambda_sq;
  if (control.corrector) {
    const auto ds_scaled = apply_scaling(nt, aff.ds, ScalingMode::MultiplyInverse, layout, exec);
    const auto dz_scaled = apply_scaling(nt, aff.dz, ScalingMode::Multiply, layout, exec);
    const auto second = jordan_product(ds_scaled, dz_scaled, layout, exec);
    for (Index i = 0; i < layout.dim(); ++i) target[i] += second[i];
  }
  const auto e = cone_identity(layout);
  for (Index i = 0; i < layout.dim(); ++i) target[i] -= info.sigma * mu * e[i];
  const Direction dir = solve_direction(ctx, res, nt, target);

  info.alpha = std::min(1.0, ctx.settings.step_fraction * boundary_step(ctx, it, dir));
  const double a = info.alpha;
  for (Index i = 0; i < ctx.data.n; ++i) it.x[i] += a * dir.dx[i];
  for (Index i = 0; i < ctx.data.p; ++i) it.y[i] += a * dir.dy[i];
  for (Index i = 0; i < ctx.data.m; ++i) {
    it.s[i] += a * dir.ds[i];
    it.z[i] += a * dir.dz[i];
  }
  it.mu = compute_mu(it.s, it.z, layout, exec);
  info.mu_after = it.mu;
  return info;
}

Solver::Solver(std::string_view algebra) : algebra_(algebra) {
  if (!is_known_algebra(algebra)) {
    throw Error(ErrorCode::UnknownAlgebra, "unknown algebra '" + algebra_ + "'");
  }
}

void Solver::setup(ProblemData data, const Settings& settings) {
  const auto t0 = Clock::now();
  validate_settings(settings);
  validate_problem(data);
  ctx_ = std::make_unique<IpmContext>(make_context(std::move(data), settings, algebra_));
  setup_seconds_ = seconds_since(t0);
}

const IpmContext& Solver::context() const {
  if (!ctx_) throw Error(ErrorCode::NotSetUp, "setup() has not been called");
  return *ctx_;
}

SolveResult Solver::solve() {
  if (!ctx_) throw Error(ErrorCode::NotSetUp, "solve() called before setup()");
  auto& ctx = *ctx_;
  const auto& st = ctx.settings;
  ctx.backend->reset_counters();

  SolveResult result;
  const auto t_init = Clock::now();
  Iterate it;
  bool ok = true;
  try {
    it = initialize_iterate(ctx);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NumericalError && e.code() != ErrorCode::NotInterior) throw;
    ok = false;
  }
  result.setup_seconds = setup_seconds_ + seconds_since(t_init);

  const auto t_loop = Clock::now();
  int iterations = 0;
  int tiny_steps = 0;
  SolveStatus status = SolveStatus::NumericalError;
  while (ok) {
    const Residuals res = compute_residuals(ctx.data, it);
    if (auto done = check_termination(res, it, st)) {
      status = *done;
      if (callback_) callback_({iterations, it, res, nullptr});
      break;
    }
    if (iterations >= st.max_iters) {
      status = SolveStatus::MaxIters;
      break;
    }
    if (result.setup_seconds + seconds_since(t_loop) > st.time_limit_seconds) {
      status = SolveStatus::TimeLimit;
      break;
    }
    StepInfo info;
    try {
      info = ipm_step(ctx, res, it, {});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NumericalError && e.code() != ErrorCode::NotInterior) throw;
      status = SolveStatus::NumericalError;
      break;
    }
    ++iterations;
    if (callback_) callback_({iterations, it, res, &info});
    tiny_steps = info.alpha < 1e-10 ? tiny_steps + 1 : 0;
    if (tiny_steps >= 3) {
      status = SolveStatus::NumericalError;
      break;
    }
  }
  result.solve_seconds = seconds_since(t_loop);

  result.status = status;
  result.iterations = iterations;
  if (ok) {
    result.objective = compute_residuals(ctx.data, it).objective_primal;
    result.x = std::move(it.x);
    result.y = std::move(it.y);
    result.z = std::move(it.z);
    result.s = std::move(it.s);
  } else {
    result.objective = std::numeric_limits<double>::quiet_NaN();
  }
  result.factor_calls = ctx.backend->counters().factor_calls;
  result.solve_calls = ctx.backend->counters().solve_calls;
  return result;
}

}  // namespace qoco
