#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qoco/error.hpp"
#include "qoco/generators.hpp"
#include "qoco/ipm.hpp"

using namespace qoco;

namespace {

double dual_objective(const ProblemData& d, const SolveResult& r) {
  const oracle::Dense p = oracle::densify_sym(d.P);
  const auto px = oracle::matvec(p, r.x);
  double v = 0.0;
  for (Index i = 0; i < d.n; ++i) v -= 0.5 * r.x[i] * px[i];
  for (Index i = 0; i < d.p; ++i) v -= d.b[i] * r.y[i];
  for (Index i = 0; i < d.m; ++i) v -= d.h[i] * r.z[i];
  return v;
}

SolveResult run(const ProblemData& d, const char* algebra = "builtin", Settings st = {}) {
  Solver s(algebra);
  s.setup(d, st);
  return s.solve();
}

}  // namespace

TEST_CASE("residuals") {
  SUBCASE("tiny QP at its optimum") {
    const ProblemData d = fixtures::tiny_qp();
    Iterate it{{1.0}, {}, {2.0}, {0.0}};
    const Residuals r = compute_residuals(d, it);
    CHECK(oracle::norm_inf(r.r_dual) <= 1e-12);
    CHECK(oracle::norm_inf(r.r_cone) <= 1e-12);
    CHECK(r.gap == 0.0);
    CHECK(r.objective_primal == 1.5);
  }
  SUBCASE("zero data and iterate") {
    ProblemData d;
    d.n = 2;
    d.m = 2;
    d.p = 1;
    d.P = CscMatrix(2, 2);
    d.c = {3.0, -4.0};
    d.A = CscMatrix(1, 2);
    d.b = {0.0};
    d.G = CscMatrix(2, 2);
    d.h = {0.0, 0.0};
    d.cone.orthant_dim = 2;
    Iterate it{{0, 0}, {0}, {0, 0}, {0, 0}};
    const Residuals r = compute_residuals(d, it);
    CHECK(r.r_dual == d.c);
    CHECK(r.r_eq == std::vector<double>{0.0});
    CHECK(r.r_cone == std::vector<double>{0.0, 0.0});
    CHECK(r.gap == 0.0);
  }
  SUBCASE("random data against dense evaluation") {
    GeneratorConfig cfg{Family::GroupLasso, 5, 4};
    const ProblemData d = generate_problem(cfg);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Iterate it;
    it.x.resize(d.n);
    it.y.resize(d.p);
    it.z.resize(d.m);
    it.s.resize(d.m);
    for (auto* v : {&it.x, &it.y, &it.z, &it.s}) {
      for (auto& e : *v) e = u(rng);
    }
    const Residuals r = compute_residuals(d, it);
    const oracle::Dense p = oracle::densify_sym(d.P), a = oracle::densify(d.A), g = oracle::densify(d.G);
    auto rd = oracle::matvec(p, it.x);
    const auto aty = oracle::matvec(oracle::transpose(a), it.y);
    const auto gtz = oracle::matvec(oracle::transpose(g), it.z);
    double obj = 0.0;
    for (Index i = 0; i < d.n; ++i) {
      obj += 0.5 * it.x[i] * rd[i] + d.c[i] * it.x[i];
      rd[i] += d.c[i] + aty[i] + gtz[i];
    }
    auto req = oracle::matvec(a, it.x);
    for (Index i = 0; i < d.p; ++i) req[i] -= d.b[i];
    auto rc = oracle::matvec(g, it.x);
    double gap = 0.0;
    for (Index i = 0; i < d.m; ++i) {
      rc[i] += it.s[i] - d.h[i];
      gap += it.s[i] * it.z[i];
    }
    for (Index i = 0; i < d.n; ++i) CHECK(r.r_dual[i] == doctest::Approx(rd[i]).epsilon(1e-12).scale(1.0));
    for (Index i = 0; i < d.p; ++i) CHECK(r.r_eq[i] == doctest::Approx(req[i]).epsilon(1e-12).scale(1.0));
    for (Index i = 0; i < d.m; ++i) CHECK(r.r_cone[i] == doctest::Approx(rc[i]).epsilon(1e-12).scale(1.0));
    CHECK(r.gap == doctest::Approx(gap).epsilon(1e-12));
    CHECK(r.objective_primal == doctest::Approx(obj).epsilon(1e-12));
  }
}

TEST_CASE("termination") {
  Residuals r;
  r.r_dual = {0.0};
  r.r_eq = {};
  r.r_cone = {0.0};
  const Settings st;
  CHECK(check_termination(r, {}, st) == SolveStatus::Solved);

  r.gap = 1e-3;
  CHECK_FALSE(check_termination(r, {}, st).has_value());

  // exactly on the threshold counts as converged
  r.gap = 0.0;
  r.c_norm = 4.0;
  r.r_dual = {st.eps_abs + st.eps_rel * 4.0};
  CHECK(check_termination(r, {}, st) == SolveStatus::Solved);
  r.r_dual = {std::nextafter(st.eps_abs + st.eps_rel * 4.0, 1.0)};
  CHECK_FALSE(check_termination(r, {}, st).has_value());
}

TEST_CASE("initialization") {
  SUBCASE("tiny QP gives a finite interior point") {
    IpmContext ctx = make_context(fixtures::tiny_qp(), {}, "builtin");
    const Iterate it = initialize_iterate(ctx);
    CHECK(std::isfinite(it.x[0]));
    CHECK(is_interior(it.s, ctx.layout));
    CHECK(is_interior(it.z, ctx.layout));
    CHECK(ctx.backend->counters().factor_calls == 1);
    CHECK(ctx.backend->counters().solve_calls == 2);
  }
  SUBCASE("W = I keeps the -I block") {
    IpmContext ctx = make_context(fixtures::soc_slice(), {}, "builtin");
    initialize_iterate(ctx);
    const oracle::Dense k = oracle::densify_sym(ctx.backend->matrix());
    const Index off = ctx.data.n + ctx.data.p;
    for (Index i = 0; i < ctx.data.m; ++i) {
      for (Index j = 0; j < ctx.data.m; ++j) CHECK(k(off + i, off + j) == (i == j ? -1.0 : 0.0));
    }
  }
  SUBCASE("generated problems start interior") {
    for (Family f : kAllFamilies) {
      GeneratorConfig cfg{f, smallest_size(f), 2};
      cfg.mpp_assets = 200;
      cfg.mpp_factors = 10;
      IpmContext ctx = make_context(generate_problem(cfg), {}, "parallel");
      const Iterate it = initialize_iterate(ctx);
      CHECK_MESSAGE(is_interior(it.s, ctx.layout), family_name(f));
      CHECK_MESSAGE(is_interior(it.z, ctx.layout), family_name(f));
    }
  }
}

TEST_CASE("ipm_step") {
  SUBCASE("one factor and two solves per step") {
    IpmContext ctx = make_context(fixtures::soc_slice(), {}, "builtin");
    Iterate it = initialize_iterate(ctx);
    const auto f0 = ctx.backend->counters().factor_calls;
    const auto s0 = ctx.backend->counters().solve_calls;
    ipm_step(ctx, compute_residuals(ctx.data, it), it);
    CHECK(ctx.backend->counters().factor_calls == f0 + 1);
    CHECK(ctx.backend->counters().solve_calls == s0 + 2);
  }
  SUBCASE("centered feasible point is a fixed point of pure centering") {
    // x = 2 gives s = 1, z = 3 with zero residuals; a single cone is always centered.
    IpmContext ctx = make_context(fixtures::tiny_qp(), {}, "builtin");
    Iterate it{{2.0}, {}, {3.0}, {1.0}, 3.0};
    const Residuals res = compute_residuals(ctx.data, it);
    CHECK(oracle::norm_inf(res.r_dual) == 0.0);
    CHECK(oracle::norm_inf(res.r_cone) == 0.0);
    StepControl ctl;
    ctl.sigma = 1.0;
    ctl.corrector = false;
    const StepInfo info = ipm_step(ctx, res, it, ctl);
    CHECK(std::abs(info.mu_after - info.mu_before) <= 1e-10 * info.mu_before);
    CHECK(it.x[0] == doctest::Approx(2.0).epsilon(1e-10));
  }
  SUBCASE("mu decreases on the tiny QP") {
    Solver s("builtin");
    s.setup(fixtures::tiny_qp());
    std::vector<double> mus;
    s.set_iteration_callback([&](const IterationLog& log) {
      if (log.step) mus.push_back(log.step->mu_after);
    });
    s.solve();
    REQUIRE(mus.size() >= 3);
    for (std::size_t i = 1; i < std::min<std::size_t>(mus.size(), 5); ++i) CHECK(mus[i] < mus[i - 1]);
  }
}

TEST_CASE("analytic solves") {
  SUBCASE("tiny QP") {
    const SolveResult r = run(fixtures::tiny_qp());
    CHECK(r.status == SolveStatus::Solved);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.objective == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(r.z[0] == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("SOC slice") {
    const SolveResult r = run(fixtures::soc_slice(), "parallel");
    CHECK(r.status == SolveStatus::Solved);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.x[1] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(std::abs(r.x[2]) <= 1e-6);
    CHECK(r.objective == doctest::Approx(-1.0).epsilon(1e-6));
  }
  SUBCASE("two-asset portfolio against a grid search") {
    const double t = oracle::grid_argmin([](double a) { return fixtures::portfolio2_objective(a, 1.0 - a); }, 0.0,
                                         1.0, 1e-6);
    const SolveResult r = run(fixtures::portfolio2());
    CHECK(r.status == SolveStatus::Solved);
    CHECK(std::abs(r.x[0] - t) <= 1e-5);
    CHECK(std::abs(r.objective - fixtures::portfolio2_objective(t, 1.0 - t)) <= 1e-6);
  }
}

TEST_CASE("solve invariants") {
  for (Family f : kAllFamilies) {
    GeneratorConfig cfg{f, smallest_size(f), 5};
    cfg.mpp_assets = 200;
    cfg.mpp_factors = 10;
    const ProblemData d = generate_problem(cfg);
    Solver s("builtin");
    s.setup(d);
    bool interior = true;
    std::vector<std::vector<double>> trace;
    const ConeLayout layout(d.cone);
    s.set_iteration_callback([&](const IterationLog& log) {
      if (log.step) {
        interior = interior && is_interior(log.iterate.s, layout) && is_interior(log.iterate.z, layout);
      }
      trace.push_back(log.iterate.x);
    });
    const SolveResult r = s.solve();
    CHECK_MESSAGE(r.status == SolveStatus::Solved, family_name(f));
    CHECK(interior);
    CHECK(r.factor_calls == r.iterations + 1);
    CHECK(r.solve_calls == 2 * r.iterations + 2);

    double gap = 0.0;
    for (Index i = 0; i < d.m; ++i) gap += r.s[i] * r.z[i];
    CHECK(gap >= -1e-9);
    const double scale = 1.0 + std::abs(r.objective);
    CHECK(std::abs(r.objective - dual_objective(d, r) - gap) <= 1e-5 * scale);

    // a second run replays the same trace bit for bit
    Solver again("builtin");
    again.setup(d);
    std::vector<std::vector<double>> trace2;
    again.set_iteration_callback([&](const IterationLog& log) { trace2.push_back(log.iterate.x); });
    const SolveResult r2 = again.solve();
    CHECK(trace == trace2);
    CHECK(r2.objective == r.objective);
  }
}

TEST_CASE("gap consistency on the tiny problems") {
  for (const ProblemData& d : {fixtures::tiny_qp(), fixtures::soc_slice(), fixtures::portfolio2()}) {
    const SolveResult r = run(d);
    double gap = 0.0;
    for (Index i = 0; i < d.m; ++i) gap += r.s[i] * r.z[i];
    CHECK(std::abs(r.objective - dual_objective(d, r) - gap) <= 1e-6);
  }
}

TEST_CASE("driver statuses and errors") {
  Settings st;
  st.max_iters = 1;
  CHECK(run(fixtures::soc_slice(), "builtin", st).status == SolveStatus::MaxIters);
  st = {};
  st.time_limit_seconds = 1e-12;
  CHECK(run(generate_problem({Family::TVDenoising, 32, 0}), "builtin", st).status == SolveStatus::TimeLimit);

  Solver s("builtin");
  CHECK_THROWS_AS(s.solve(), Error);
  try {
    s.solve();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSetUp);
  }
  ProblemData bad = fixtures::tiny_qp();
  bad.h.push_back(0.0);
  CHECK_THROWS_AS(s.setup(bad), Error);
  CHECK_FALSE(s.is_setup());
  CHECK_THROWS_AS(Solver("gpu"), Error);

  // solving twice from one setup gives the same answer
  s.setup(fixtures::tiny_qp());
  const SolveResult a = s.solve();
  const SolveResult b = s.solve();
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
  CHECK(b.factor_calls == b.iterations + 1);
}

TEST_CASE("backends agree on the analytic problems") {
  for (const ProblemData& d : {fixtures::tiny_qp(), fixtures::soc_slice(), fixtures::portfolio2()}) {
    const SolveResult a = run(d, "builtin");
    const SolveResult b = run(d, "parallel");
    CHECK(a.objective == b.objective);
    CHECK(a.x == b.x);
  }
}
