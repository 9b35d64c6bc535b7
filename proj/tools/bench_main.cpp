// bench: generate benchmark problems, run sweeps and summarize results.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qoco/qoco.h"

namespace {

int report_error(qoco_error code) {
  std::fprintf(stderr, "bench: %s\n", qoco_last_error_message());
  return code == QOCO_OK ? 0 : 1 + static_cast<int>(code);
}

struct SolverGuard {
  qoco_solver* ptr = nullptr;
  ~SolverGuard() { qoco_solver_destroy(ptr); }
};

struct ProblemGuard {
  qoco_problem* ptr = nullptr;
  ~ProblemGuard() { qoco_problem_destroy(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for the qoco conic solver"};
  app.require_subcommand(1);

  qoco_bench_options run_opt;
  qoco_default_bench_options(&run_opt);
  std::string families = "all", sizes, backend = "builtin", out_csv = "results.csv";
  auto* run = app.add_subcommand("run", "Solve generated problems and write a results CSV");
  run->add_option("--family", families, "Family name, comma list or 'all'")->capture_default_str();
  run->add_option("--sizes", sizes, "Comma separated size parameters (default: smallest per family)");
  run->add_option("--backend", backend, "builtin, parallel or both")->capture_default_str();
  run->add_option("--eps", run_opt.eps, "Absolute and relative tolerance")->capture_default_str();
  run->add_option("--time-limit", run_opt.time_limit_seconds, "Per-solve limit in seconds")->capture_default_str();
  run->add_option("--seed", run_opt.seed, "Generator seed")->capture_default_str();
  run->add_option("--assets", run_opt.mpp_assets, "Asset count for the multi-period family")->capture_default_str();
  run->add_option("--out", out_csv, "Results CSV")->capture_default_str();
  bool quiet = false;
  run->add_flag("--quiet", quiet, "Do not echo rows");

  std::string report_in = "results.csv", profiles = "relative,absolute", out_dir = "report";
  double shift = 1.0, report_limit = 3600.0;
  auto* report = app.add_subcommand("report", "Shifted geometric means and performance profiles");
  report->add_option("--in", report_in, "Results CSV")->capture_default_str();
  report->add_option("--sgm-shift", shift, "Shift in seconds")->capture_default_str();
  report->add_option("--profiles", profiles, "relative, absolute or both")->capture_default_str();
  report->add_option("--time-limit", report_limit, "Runtime charged to failed runs")->capture_default_str();
  report->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

  std::string gen_family, gen_out = "problem.qocoprob";
  int gen_size = 0;
  unsigned long long gen_seed = 0;
  int gen_assets = 0;
  auto* gen = app.add_subcommand("gen", "Write one generated problem in QOCOPROB format");
  gen->add_option("--family", gen_family, "Family name")->required();
  gen->add_option("--size", gen_size, "Size parameter")->required();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--assets", gen_assets, "Asset count for the multi-period family");
  gen->add_option("--out", gen_out, "Output file")->capture_default_str();

  std::string solve_in, solve_backend = "builtin";
  auto* solve = app.add_subcommand("solve", "Solve a QOCOPROB file");
  solve->add_option("--in", solve_in, "Problem file")->required();
  solve->add_option("--backend", solve_backend, "builtin or parallel")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    run_opt.families = families.c_str();
    run_opt.sizes = sizes.c_str();
    run_opt.backends = backend.c_str();
    auto echo = [](const char* row, void*) { std::printf("%s\n", row), std::fflush(stdout); };
    const qoco_error rc = qoco_bench_run(&run_opt, out_csv.c_str(), quiet ? nullptr : +echo, nullptr);
    return rc == QOCO_OK ? 0 : report_error(rc);
  }

  if (*report) {
    const qoco_error rc = qoco_bench_report(report_in.c_str(), shift, profiles.c_str(), report_limit, out_dir.c_str());
    if (rc != QOCO_OK) return report_error(rc);
    std::printf("wrote %s/sgm.csv\n", out_dir.c_str());
    return 0;
  }

  if (*gen) {
    ProblemGuard prob;
    qoco_error rc = qoco_problem_generate(gen_family.c_str(), gen_size, gen_seed, gen_assets, &prob.ptr);
    if (rc == QOCO_OK) rc = qoco_problem_write(prob.ptr, gen_out.c_str());
    if (rc != QOCO_OK) return report_error(rc);
    long long nnz = 0;
    qoco_problem_dims(prob.ptr, nullptr, nullptr, nullptr, &nnz);
    std::printf("%s size_nnz=%lld\n", gen_out.c_str(), nnz);
    return 0;
  }

  ProblemGuard prob;
  SolverGuard solver;
  qoco_info info{};
  qoco_error rc = qoco_problem_read(solve_in.c_str(), &prob.ptr);
  if (rc == QOCO_OK) rc = qoco_solver_create(solve_backend.c_str(), &solver.ptr);
  if (rc == QOCO_OK) rc = qoco_solver_setup_problem(solver.ptr, prob.ptr);
  if (rc == QOCO_OK) rc = qoco_solver_solve(solver.ptr, &info);
  if (rc != QOCO_OK) return report_error(rc);
  std::printf("status %s\niterations %d\nobjective %.17g\nsetup_seconds %.6f\nsolve_seconds %.6f\n",
              qoco_status_name(info.status), info.iterations, info.objective, info.setup_seconds,
              info.solve_seconds);
  return info.status == QOCO_SOLVED ? 0 : 2;
}
