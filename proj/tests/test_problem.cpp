#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "qoco/error.hpp"
#include "qoco/generators.hpp"
#include "qoco/problem.hpp"
#include "qoco/problem_io.hpp"

using namespace qoco;

namespace {

ErrorCode code_of(const ProblemData& d) {
  try {
    validate_problem(d);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected validation error");
  return ErrorCode::InvalidArgument;
}

bool same_matrix(const CscMatrix& a, const CscMatrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.col_ptr == b.col_ptr && a.row_idx == b.row_idx &&
         a.values == b.values;
}

bool same_problem(const ProblemData& a, const ProblemData& b) {
  return a.n == b.n && a.m == b.m && a.p == b.p && same_matrix(a.P, b.P) && same_matrix(a.A, b.A) &&
         same_matrix(a.G, b.G) && a.c == b.c && a.b == b.b && a.h == b.h && a.cone == b.cone;
}

}  // namespace

TEST_CASE("minimal well formed problem validates") {
  const ProblemData d = fixtures::tiny_qp();
  CHECK_NOTHROW(validate_problem(d));
}

TEST_CASE("cone dimensions must add up to m") {
  ProblemData d;
  d.n = 1;
  d.m = 2;
  d.P = CscMatrix(1, 1);
  d.c = {0.0};
  d.A = CscMatrix(0, 1);
  d.G = CscMatrix(2, 1);
  d.h = {0.0, 0.0};
  d.cone.orthant_dim = 1;
  d.cone.soc_dims = {2};
  CHECK(code_of(d) == ErrorCode::ConeMismatch);
}

TEST_CASE("vector lengths must match matrix shapes") {
  ProblemData d;
  d.n = 3;
  d.m = 1;
  d.p = 2;
  d.P = CscMatrix(3, 3);
  d.c = {0.0, 0.0, 0.0};
  d.A = CscMatrix(2, 3);
  d.b = {0.0, 0.0, 0.0};
  d.G = CscMatrix(1, 3);
  d.h = {1.0};
  d.cone.orthant_dim = 1;
  CHECK(code_of(d) == ErrorCode::DimensionMismatch);
  d.b = {0.0, 0.0};
  CHECK_NOTHROW(validate_problem(d));
  d.c.pop_back();
  CHECK(code_of(d) == ErrorCode::DimensionMismatch);
}

TEST_CASE("other structural errors") {
  SUBCASE("empty cone") {
    ProblemData d;
    d.n = 1;
    d.P = CscMatrix(1, 1);
    d.c = {1.0};
    d.A = CscMatrix(0, 1);
    d.G = CscMatrix(0, 1);
    CHECK(code_of(d) == ErrorCode::EmptyCone);
  }
  SUBCASE("lower triangle of P is rejected") {
    ProblemData d = fixtures::portfolio2();
    const std::vector<Triplet> full{{0, 0, 1.0}, {1, 0, 0.5}, {0, 1, 0.5}, {1, 1, 1.0}};
    d.P = csc_from_triplets(2, 2, full);
    CHECK(code_of(d) == ErrorCode::BadSparseStructure);
  }
  SUBCASE("unsorted rows") {
    ProblemData d = fixtures::soc_slice();
    d.G.row_idx = {0, 1, 2};
    d.G.col_ptr = {0, 3, 3, 3};
    d.G.values = {1.0, 1.0, 1.0};
    CHECK_NOTHROW(validate_problem(d));
    d.G.row_idx = {1, 0, 2};
    CHECK(code_of(d) == ErrorCode::BadSparseStructure);
  }
  SUBCASE("row index out of range") {
    ProblemData d = fixtures::tiny_qp();
    d.G.row_idx = {1};
    CHECK(code_of(d) == ErrorCode::BadSparseStructure);
  }
  SUBCASE("zero-dimensional second-order cone") {
    ProblemData d = fixtures::tiny_qp();
    d.cone.orthant_dim = 1;
    d.cone.soc_dims = {0};
    CHECK(code_of(d) == ErrorCode::ConeMismatch);
  }
}

TEST_CASE("validate_problem is idempotent") {
  const ProblemData d = generate_problem({Family::GroupLasso, 5, 3});
  const ProblemData once = validate_problem(d);
  const ProblemData twice = validate_problem(once);
  CHECK(same_problem(once, twice));
  CHECK(same_problem(d, twice));
}

TEST_CASE("settings validation") {
  Settings s;
  CHECK_NOTHROW(validate_settings(s));
  s.step_fraction = 1.0;
  CHECK_THROWS_AS(validate_settings(s), Error);
  s = {};
  s.eps_abs = 0.0;
  CHECK_THROWS_AS(validate_settings(s), Error);
  s = {};
  s.max_iters = -1;
  CHECK_THROWS_AS(validate_settings(s), Error);
}

TEST_CASE("problem size counts A, G and the upper half of P") {
  ProblemData d;
  d.n = 2;
  d.m = 2;
  d.p = 1;
  d.P = CscMatrix::identity(2);
  d.c = {0.0, 0.0};
  const std::vector<Triplet> a{{0, 0, 1.0}, {0, 1, 1.0}};
  d.A = csc_from_triplets(1, 2, a);
  d.b = {1.0};
  d.G = CscMatrix::identity(2);
  d.h = {0.0, 0.0};
  d.cone.orthant_dim = 2;
  CHECK(problem_size_nnz(d) == 6);

  d.P = CscMatrix(2, 2);
  d.A = CscMatrix(1, 2);
  d.G = CscMatrix(2, 2);
  CHECK(problem_size_nnz(d) == 0);
}

TEST_CASE("problem size of a generated problem matches a recount") {
  const ProblemData d = generate_problem({Family::Huber, 50, 0});
  auto recount = [](const CscMatrix& m) {
    std::int64_t c = 0;
    for (Index j = 0; j < m.cols; ++j) {
      for (Index k = m.col_ptr[j]; k < m.col_ptr[j + 1]; ++k) c += m.row_idx[k] >= 0 ? 1 : 0;
    }
    return c;
  };
  CHECK(problem_size_nnz(d) == recount(d.P) + recount(d.A) + recount(d.G));
}

TEST_CASE("problem size is invariant under a column permutation") {
  const ProblemData d = generate_problem({Family::Portfolio, 2, 1});
  std::vector<Index> perm(d.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(7);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto permute_cols = [&](const CscMatrix& m) {
    std::vector<Triplet> t;
    for (Index j = 0; j < m.cols; ++j) {
      for (Index k = m.col_ptr[j]; k < m.col_ptr[j + 1]; ++k) t.push_back({m.row_idx[k], perm[j], m.values[k]});
    }
    return csc_from_triplets(m.rows, m.cols, t);
  };
  ProblemData q = d;
  q.A = permute_cols(d.A);
  q.G = permute_cols(d.G);
  CHECK(problem_size_nnz(q) == problem_size_nnz(d));
}

TEST_CASE("QOCOPROB round trip is exact") {
  for (Family f : kAllFamilies) {
    GeneratorConfig cfg{f, smallest_size(f), 11};
    cfg.mpp_assets = 60;
    cfg.mpp_factors = 5;
    const ProblemData d = generate_problem(cfg);
    std::stringstream ss;
    write_problem(ss, d);
    const ProblemData back = read_problem(ss);
    CHECK_MESSAGE(same_problem(d, back), family_name(f));
  }
}

TEST_CASE("QOCOPROB layout") {
  std::stringstream ss;
  write_problem(ss, fixtures::tiny_qp());
  const std::string expected =
      "QOCOPROB 1\n1 1 0 1 0\n\nMAT P 1 1 1\n0 0 1\nMAT A 0 1 0\nMAT G 1 1 1\n0 0 -1\n"
      "VEC c 1\n1\nVEC b 0\nVEC h 1\n-1\n";
  CHECK(ss.str() == expected);
}

TEST_CASE("QOCOPROB parse errors") {
  auto parse = [](const std::string& text) {
    std::stringstream ss(text);
    try {
      read_problem(ss);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(parse("") == ErrorCode::ParseError);
  CHECK(parse("QOCOPROB 2\n") == ErrorCode::ParseError);
  CHECK(parse("QOCOPROB 1\n1 1 0 1 0\n\nMAT P 1 1 1\n0 0\n") == ErrorCode::ParseError);
  // Well formed file, but the cone does not add up.
  CHECK(parse("QOCOPROB 1\n1 1 0 2 0\n\nMAT P 1 1 0\nMAT A 0 1 0\nMAT G 1 1 0\nVEC c 1\n1\nVEC b 0\nVEC h 1\n1\n") ==
        ErrorCode::ConeMismatch);
  CHECK_THROWS_AS(read_problem_file("/nonexistent/problem.qocoprob"), Error);
}
