#include "qoco/qoco.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "qoco/bench.hpp"
#include "qoco/error.hpp"
#include "qoco/generators.hpp"
#include "qoco/ipm.hpp"
#include "qoco/linsys.hpp"
#include "qoco/metrics.hpp"
#include "qoco/problem_io.hpp"

struct qoco_solver {
  qoco::Solver solver;
  qoco::Settings settings;
  std::optional<qoco::SolveResult> result;
  qoco::Index n = 0, m = 0, p = 0;
};

struct qoco_problem {
  qoco::ProblemData data;
};

namespace {

thread_local std::string last_error;

qoco_error fail(qoco_error code, const std::string& msg) {
  last_error = msg;
  return code;
}

template <class F>
qoco_error guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return QOCO_OK;
  } catch (const qoco::Error& e) {
    return fail(static_cast<qoco_error>(static_cast<int>(e.code()) + 1), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QOCO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QOCO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QOCO_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw qoco::Error(qoco::ErrorCode::InvalidArgument, what);
}

qoco::CscMatrix to_csc(const qoco_csc* in, int rows, int cols, const char* name) {
  if (!in) {
    qoco::CscMatrix out;
    out.rows = rows;
    out.cols = cols;
    out.col_ptr.assign(cols + 1, 0);
    return out;
  }
  require(in->cols >= 0 && in->rows >= 0, name);
  require(in->col_ptr != nullptr, name);
  qoco::CscMatrix out;
  out.rows = in->rows;
  out.cols = in->cols;
  out.col_ptr.assign(in->col_ptr, in->col_ptr + in->cols + 1);
  const int nnz = out.col_ptr.back();
  if (nnz < 0) throw qoco::Error(qoco::ErrorCode::BadSparseStructure, std::string(name) + " has negative nnz");
  if (nnz > 0) {
    require(in->row_idx != nullptr && in->values != nullptr, name);
    out.row_idx.assign(in->row_idx, in->row_idx + nnz);
    out.values.assign(in->values, in->values + nnz);
  }
  return out;
}

std::vector<double> to_vec(const double* v, int len, const char* name) {
  if (len <= 0) return {};
  require(v != nullptr, name);
  return std::vector<double>(v, v + len);
}

std::vector<std::string> split(const char* list) {
  std::vector<std::string> out;
  if (!list) return out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

qoco::Settings from_c(const qoco_settings& s) {
  qoco::Settings out;
  out.eps_abs = s.eps_abs;
  out.eps_rel = s.eps_rel;
  out.max_iters = s.max_iters;
  out.static_reg = s.static_reg;
  out.refine_iters = s.refine_iters;
  out.step_fraction = s.step_fraction;
  out.time_limit_seconds = s.time_limit_seconds;
  return out;
}

void do_setup(qoco_solver* h, qoco::ProblemData data) {
  h->result.reset();
  const qoco::Index n = data.n, m = data.m, p = data.p;
  h->solver.setup(std::move(data), h->settings);
  h->n = n;
  h->m = m;
  h->p = p;
}

}  // namespace

extern "C" {

const char* qoco_error_name(qoco_error code) {
  if (code == QOCO_OK) return "Ok";
  if (code == QOCO_ERR_INTERNAL) return "Internal";
  if (code > QOCO_OK && code < QOCO_ERR_INTERNAL) {
    return qoco::error_name(static_cast<qoco::ErrorCode>(static_cast<int>(code) - 1)).data();
  }
  return "Unknown";
}

const char* qoco_status_name(qoco_status status) {
  if (status < QOCO_SOLVED || status > QOCO_NUMERICAL_ERROR) return "Unknown";
  return qoco::status_name(static_cast<qoco::SolveStatus>(status)).data();
}

const char* qoco_last_error_message(void) { return last_error.c_str(); }

void qoco_default_settings(qoco_settings* settings) {
  if (!settings) return;
  const qoco::Settings d;
  *settings = qoco_settings{d.eps_abs,      d.eps_rel,       d.max_iters,           d.static_reg,
                            d.refine_iters, d.step_fraction, d.time_limit_seconds};
}

qoco_error qoco_solver_create(const char* algebra, qoco_solver** out) {
  return guarded([&] {
    require(out != nullptr, "output handle is NULL");
    *out = nullptr;
    require(algebra != nullptr, "algebra is NULL");
    *out = new qoco_solver{qoco::Solver(algebra), {}, std::nullopt};
  });
}

void qoco_solver_destroy(qoco_solver* solver) { delete solver; }

qoco_error qoco_solver_set_settings(qoco_solver* solver, const qoco_settings* settings) {
  return guarded([&] {
    require(solver && settings, "NULL argument");
    const qoco::Settings s = from_c(*settings);
    qoco::validate_settings(s);
    solver->settings = s;
  });
}

qoco_error qoco_solver_setup(qoco_solver* solver, int n, int m, int p, const qoco_csc* P, const double* c,
                             const qoco_csc* A, const double* b, const qoco_csc* G, const double* h, int l,
                             int nsoc, const int* q) {
  return guarded([&] {
    require(solver != nullptr, "solver is NULL");
    require(n >= 0 && m >= 0 && p >= 0 && l >= 0 && nsoc >= 0, "negative dimension");
    require(nsoc == 0 || q != nullptr, "q is NULL");
    qoco::ProblemData data;
    data.n = n;
    data.m = m;
    data.p = p;
    data.P = to_csc(P, n, n, "P");
    data.c = to_vec(c, n, "c");
    data.A = to_csc(A, p, n, "A");
    data.b = to_vec(b, p, "b");
    data.G = to_csc(G, m, n, "G");
    data.h = to_vec(h, m, "h");
    data.cone.orthant_dim = l;
    if (nsoc > 0) data.cone.soc_dims.assign(q, q + nsoc);
    do_setup(solver, std::move(data));
  });
}

qoco_error qoco_solver_setup_problem(qoco_solver* solver, const qoco_problem* problem) {
  return guarded([&] {
    require(solver && problem, "NULL argument");
    do_setup(solver, problem->data);
  });
}

qoco_error qoco_solver_solve(qoco_solver* solver, qoco_info* info) {
  return guarded([&] {
    require(solver != nullptr, "solver is NULL");
    solver->result = solver->solver.solve();
    if (info) {
      const auto& r = *solver->result;
      info->status = static_cast<qoco_status>(r.status);
      info->iterations = r.iterations;
      info->objective = r.objective;
      info->setup_seconds = r.setup_seconds;
      info->solve_seconds = r.solve_seconds;
      info->factor_calls = r.factor_calls;
      info->solve_calls = r.solve_calls;
    }
  });
}

qoco_error qoco_solver_dims(const qoco_solver* solver, int* n, int* m, int* p) {
  return guarded([&] {
    require(solver != nullptr, "solver is NULL");
    if (!solver->solver.is_setup()) throw qoco::Error(qoco::ErrorCode::NotSetUp, "setup has not been called");
    if (n) *n = solver->n;
    if (m) *m = solver->m;
    if (p) *p = solver->p;
  });
}

qoco_error qoco_solver_get_solution(const qoco_solver* solver, double* x, double* y, double* z, double* s) {
  return guarded([&] {
    require(solver != nullptr, "solver is NULL");
    if (!solver->result) throw qoco::Error(qoco::ErrorCode::NotSetUp, "no solution available");
    const auto& r = *solver->result;
    if (x) std::copy(r.x.begin(), r.x.end(), x);
    if (y) std::copy(r.y.begin(), r.y.end(), y);
    if (z) std::copy(r.z.begin(), r.z.end(), z);
    if (s) std::copy(r.s.begin(), r.s.end(), s);
  });
}

qoco_error qoco_problem_read(const char* path, qoco_problem** out) {
  return guarded([&] {
    require(path && out, "NULL argument");
    *out = nullptr;
    *out = new qoco_problem{qoco::read_problem_file(path)};
  });
}

qoco_error qoco_problem_write(const qoco_problem* problem, const char* path) {
  return guarded([&] {
    require(problem && path, "NULL argument");
    qoco::write_problem_file(path, problem->data);
  });
}

qoco_error qoco_problem_generate(const char* family, int size, unsigned long long seed, int mpp_assets,
                                 qoco_problem** out) {
  return guarded([&] {
    require(family && out, "NULL argument");
    *out = nullptr;
    qoco::GeneratorConfig cfg;
    cfg.family = qoco::parse_family(family);
    cfg.size_param = size;
    cfg.seed = seed;
    if (mpp_assets > 0) cfg.mpp_assets = mpp_assets;
    *out = new qoco_problem{qoco::generate_problem(cfg)};
  });
}

void qoco_problem_destroy(qoco_problem* problem) { delete problem; }

qoco_error qoco_problem_dims(const qoco_problem* problem, int* n, int* m, int* p, long long* size_nnz) {
  return guarded([&] {
    require(problem != nullptr, "problem is NULL");
    if (n) *n = problem->data.n;
    if (m) *m = problem->data.m;
    if (p) *p = problem->data.p;
    if (size_nnz) *size_nnz = qoco::problem_size_nnz(problem->data);
  });
}

void qoco_default_bench_options(qoco_bench_options* options) {
  if (!options) return;
  *options = qoco_bench_options{"all", "", "builtin", 1e-7, 3600.0, 0, 5000};
}

qoco_error qoco_bench_run(const qoco_bench_options* options, const char* out_csv, qoco_bench_callback callback,
                          void* user) {
  return guarded([&] {
    require(options && out_csv, "NULL argument");
    qoco::BenchOptions opt;
    for (const auto& f : split(options->families)) {
      if (f == "all") {
        opt.families.assign(std::begin(qoco::kAllFamilies), std::end(qoco::kAllFamilies));
      } else {
        opt.families.push_back(qoco::parse_family(f));
      }
    }
    if (opt.families.empty()) throw qoco::Error(qoco::ErrorCode::EmptyInput, "no families selected");
    for (const auto& s : split(options->sizes)) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || v <= 0) throw qoco::Error(qoco::ErrorCode::InvalidArgument, "bad size '" + s + "'");
      opt.sizes.push_back(v);
    }
    opt.backends.clear();
    for (const auto& b : split(options->backends)) {
      if (b == "both") {
        opt.backends.push_back("builtin");
        opt.backends.push_back("parallel");
      } else {
        if (!qoco::is_known_algebra(b)) throw qoco::Error(qoco::ErrorCode::UnknownAlgebra, "'" + b + "'");
        opt.backends.push_back(b);
      }
    }
    if (opt.backends.empty()) throw qoco::Error(qoco::ErrorCode::EmptyInput, "no backends selected");
    opt.settings.eps_abs = options->eps;
    opt.settings.eps_rel = options->eps;
    opt.settings.time_limit_seconds = options->time_limit_seconds;
    qoco::validate_settings(opt.settings);
    opt.seed = options->seed;
    if (options->mpp_assets > 0) opt.mpp_assets = options->mpp_assets;

    std::ofstream out(out_csv);
    if (!out) throw qoco::Error(qoco::ErrorCode::IoError, std::string("cannot write '") + out_csv + "'");
    out << qoco::kBenchCsvHeader << '\n';
    qoco::run_benchmark(opt, [&](const qoco::BenchRecord& r) {
      const std::string row = qoco::format_record_csv(r);
      out << row << '\n' << std::flush;
      if (callback) callback(row.c_str(), user);
    });
    if (!out) throw qoco::Error(qoco::ErrorCode::IoError, std::string("write to '") + out_csv + "' failed");
  });
}

qoco_error qoco_bench_report(const char* in_csv, double sgm_shift, const char* profiles, double time_limit_seconds,
                             const char* out_dir) {
  return guarded([&] {
    require(in_csv && out_dir, "NULL argument");
    require(sgm_shift >= 0.0 && time_limit_seconds > 0.0, "shift must be >= 0 and time limit > 0");
    std::vector<qoco::ProfileKind> kinds;
    for (const auto& k : split(profiles)) {
      if (k == "relative") {
        kinds.push_back(qoco::ProfileKind::Relative);
      } else if (k == "absolute") {
        kinds.push_back(qoco::ProfileKind::Absolute);
      } else {
        throw qoco::Error(qoco::ErrorCode::InvalidArgument, "unknown profile '" + k + "'");
      }
    }
    std::ifstream in(in_csv);
    if (!in) throw qoco::Error(qoco::ErrorCode::IoError, std::string("cannot read '") + in_csv + "'");
    const auto records = qoco::read_records_csv(in);
    if (records.empty()) throw qoco::Error(qoco::ErrorCode::EmptyInput, "no records in '" + std::string(in_csv) + "'");
    const auto summary = qoco::summarize(records, sgm_shift, time_limit_seconds);
    qoco::write_report(summary, kinds, time_limit_seconds, out_dir);
  });
}

}  // extern "C"
