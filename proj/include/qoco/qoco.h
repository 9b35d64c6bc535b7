/* C interface to the qoco conic solver and its benchmark harness. */
#ifndef QOCO_QOCO_H
#define QOCO_QOCO_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#  ifdef QOCO_BUILDING_LIBRARY
#    define QOCO_API __declspec(dllexport)
#  else
#    define QOCO_API __declspec(dllimport)
#  endif
#else
#  define QOCO_API __attribute__((visibility("default")))
#endif

typedef enum qoco_error {
  QOCO_OK = 0,
  QOCO_ERR_DIMENSION_MISMATCH,
  QOCO_ERR_CONE_MISMATCH,
  QOCO_ERR_BAD_SPARSE_STRUCTURE,
  QOCO_ERR_EMPTY_CONE,
  QOCO_ERR_INDEX_OUT_OF_RANGE,
  QOCO_ERR_BAD_PERMUTATION,
  QOCO_ERR_NOT_INTERIOR,
  QOCO_ERR_NUMERICAL,
  QOCO_ERR_UNKNOWN_ALGEBRA,
  QOCO_ERR_NOT_SET_UP,
  QOCO_ERR_EMPTY_INPUT,
  QOCO_ERR_PARSE,
  QOCO_ERR_IO,
  QOCO_ERR_INVALID_ARGUMENT,
  QOCO_ERR_INTERNAL
} qoco_error;

typedef enum qoco_status {
  QOCO_SOLVED = 0,
  QOCO_MAX_ITERS,
  QOCO_TIME_LIMIT,
  QOCO_NUMERICAL_ERROR
} qoco_status;

typedef struct qoco_solver qoco_solver;
typedef struct qoco_problem qoco_problem;

typedef struct qoco_settings {
  double eps_abs;
  double eps_rel;
  int max_iters;
  double static_reg;
  int refine_iters;
  double step_fraction;
  double time_limit_seconds;
} qoco_settings;

/* Compressed sparse column view; col_ptr has cols + 1 entries. For P only the
   upper triangle is read. */
typedef struct qoco_csc {
  int rows;
  int cols;
  const int* col_ptr;
  const int* row_idx;
  const double* values;
} qoco_csc;

typedef struct qoco_info {
  qoco_status status;
  int iterations;
  double objective;
  double setup_seconds;
  double solve_seconds;
  long long factor_calls;
  long long solve_calls;
} qoco_info;

/* Name of a code, e.g. "DimensionMismatch". Never NULL. */
QOCO_API const char* qoco_error_name(qoco_error code);
QOCO_API const char* qoco_status_name(qoco_status status);
/* Message of the last failed call on this thread, "" if none. */
QOCO_API const char* qoco_last_error_message(void);

QOCO_API void qoco_default_settings(qoco_settings* settings);

/* algebra: "builtin" or "parallel". */
QOCO_API qoco_error qoco_solver_create(const char* algebra, qoco_solver** out);
QOCO_API void qoco_solver_destroy(qoco_solver* solver);
/* Applies to the next setup. */
QOCO_API qoco_error qoco_solver_set_settings(qoco_solver* solver, const qoco_settings* settings);

/* P, A and G may be NULL for an empty matrix of the implied shape. The cone is
   an orthant of size l followed by nsoc second-order cones of sizes q. */
QOCO_API qoco_error qoco_solver_setup(qoco_solver* solver, int n, int m, int p,
                                      const qoco_csc* P, const double* c,
                                      const qoco_csc* A, const double* b,
                                      const qoco_csc* G, const double* h,
                                      int l, int nsoc, const int* q);
QOCO_API qoco_error qoco_solver_setup_problem(qoco_solver* solver, const qoco_problem* problem);
QOCO_API qoco_error qoco_solver_solve(qoco_solver* solver, qoco_info* info);
QOCO_API qoco_error qoco_solver_dims(const qoco_solver* solver, int* n, int* m, int* p);
/* Copies the last solution; any pointer may be NULL. Lengths are n, p, m, m. */
QOCO_API qoco_error qoco_solver_get_solution(const qoco_solver* solver,
                                             double* x, double* y, double* z, double* s);

QOCO_API qoco_error qoco_problem_read(const char* path, qoco_problem** out);
QOCO_API qoco_error qoco_problem_write(const qoco_problem* problem, const char* path);
/* family: huber, portfolio, multiperiod_portfolio, group_lasso, tv_denoising.
   mpp_assets <= 0 keeps the default asset count. */
QOCO_API qoco_error qoco_problem_generate(const char* family, int size, unsigned long long seed,
                                          int mpp_assets, qoco_problem** out);
QOCO_API void qoco_problem_destroy(qoco_problem* problem);
QOCO_API qoco_error qoco_problem_dims(const qoco_problem* problem, int* n, int* m, int* p,
                                      long long* size_nnz);

/* Comma separated lists. families may be "all", backends may be "both", an
   empty or NULL sizes list selects the smallest size of each family. */
typedef struct qoco_bench_options {
  const char* families;
  const char* sizes;
  const char* backends;
  double eps;
  double time_limit_seconds;
  unsigned long long seed;
  int mpp_assets;
} qoco_bench_options;

typedef void (*qoco_bench_callback)(const char* csv_row, void* user);

QOCO_API void qoco_default_bench_options(qoco_bench_options* options);
/* Writes the results CSV to out_csv. The callback, if set, sees each row as it
   is produced. */
QOCO_API qoco_error qoco_bench_run(const qoco_bench_options* options, const char* out_csv,
                                   qoco_bench_callback callback, void* user);
/* profiles: "relative", "absolute" or both, comma separated. Writes sgm.csv and
   profile_*.csv into out_dir. */
QOCO_API qoco_error qoco_bench_report(const char* in_csv, double sgm_shift, const char* profiles,
                                      double time_limit_seconds, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif
