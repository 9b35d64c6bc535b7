#include "qoco/problem_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "qoco/error.hpp"

namespace qoco {
namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& out, const char* name, const CscMatrix& m) {
  out << "MAT " << name << ' ' << m.rows << ' ' << m.cols << ' ' << m.nnz() << '\n';
  for (Index j = 0; j < m.cols; ++j) {
    for (Index k = m.col_ptr[j]; k < m.col_ptr[j + 1]; ++k) {
      out << m.row_idx[k] << ' ' << j << ' ' << format_real(m.values[k]) << '\n';
    }
  }
}

void write_vector(std::ostream& out, const char* name, const std::vector<double>& v) {
  out << "VEC " << name << ' ' << v.size() << '\n';
  for (double x : v) out << format_real(x) << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of input");
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no_) + ": " + msg);
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

double parse_real(LineReader& lr, const std::string& token) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size()) lr.fail("bad real '" + token + "'");
  return v;
}

template <typename... Ts>
void parse_fields(LineReader& lr, const std::string& line, Ts&... fields) {
  std::istringstream ss(line);
  ((ss >> fields) && ...);
  std::string extra;
  if (ss.fail() || (ss >> extra)) lr.fail("malformed line '" + line + "'");
}

CscMatrix read_matrix(LineReader& lr, const char* expected_name) {
  std::string tag, name;
  Index rows = 0, cols = 0, nnz = 0;
  parse_fields(lr, lr.next(), tag, name, rows, cols, nnz);
  if (tag != "MAT" || name != expected_name) lr.fail(std::string("expected MAT ") + expected_name);
  if (rows < 0 || cols < 0 || nnz < 0) lr.fail("negative matrix size");

  CscMatrix m(rows, cols);
  m.row_idx.reserve(nnz);
  m.values.reserve(nnz);
  Index current_col = 0;
  for (Index k = 0; k < nnz; ++k) {
    Index r = 0, c = 0;
    std::string value;
    parse_fields(lr, lr.next(), r, c, value);
    if (c < current_col || c >= cols || r < 0 || r >= rows) lr.fail("entry out of order or out of range");
    while (current_col < c) m.col_ptr[++current_col] = k;
    m.row_idx.push_back(r);
    m.values.push_back(parse_real(lr, value));
  }
  while (current_col < cols) m.col_ptr[++current_col] = nnz;
  try {
    check_csc(m);
  } catch (const Error& e) {
    lr.fail(e.what());
  }
  return m;
}

std::vector<double> read_vector(LineReader& lr, const char* expected_name) {
  std::string tag, name;
  long len = 0;
  parse_fields(lr, lr.next(), tag, name, len);
  if (tag != "VEC" || name != expected_name) lr.fail(std::string("expected VEC ") + expected_name);
  if (len < 0) lr.fail("negative vector length");
  std::vector<double> v(static_cast<std::size_t>(len));
  for (auto& x : v) {
    std::string token;
    parse_fields(lr, lr.next(), token);
    x = parse_real(lr, token);
  }
  return v;
}

}  // namespace

void write_problem(std::ostream& out, const ProblemData& d) {
  out << "QOCOPROB 1\n";
  out << d.n << ' ' << d.m << ' ' << d.p << ' ' << d.cone.orthant_dim << ' ' << d.cone.soc_count() << '\n';
  for (std::size_t i = 0; i < d.cone.soc_dims.size(); ++i) {
    if (i) out << ' ';
    out << d.cone.soc_dims[i];
  }
  out << '\n';
  write_matrix(out, "P", d.P);
  write_matrix(out, "A", d.A);
  write_matrix(out, "G", d.G);
  write_vector(out, "c", d.c);
  write_vector(out, "b", d.b);
  write_vector(out, "h", d.h);
}

void write_problem_file(const std::string& path, const ProblemData& data) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  write_problem(out, data);
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

ProblemData read_problem(std::istream& in) {
  LineReader lr(in);
  if (lr.next() != "QOCOPROB 1") lr.fail("missing 'QOCOPROB 1' header");

  ProblemData d;
  Index nsoc = 0;
  parse_fields(lr, lr.next(), d.n, d.m, d.p, d.cone.orthant_dim, nsoc);
  if (nsoc < 0) lr.fail("negative SOC count");
  {
    const std::string line = lr.next();
    std::istringstream ss(line);
    Index q = 0;
    while (ss >> q) d.cone.soc_dims.push_back(q);
    if (!ss.eof() || d.cone.soc_count() != nsoc) lr.fail("expected " + std::to_string(nsoc) + " SOC dimensions");
  }
  d.P = read_matrix(lr, "P");
  d.A = read_matrix(lr, "A");
  d.G = read_matrix(lr, "G");
  d.c = read_vector(lr, "c");
  d.b = read_vector(lr, "b");
  d.h = read_vector(lr, "h");
  validate_problem(d);
  return d;
}

ProblemData read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_problem(in);
}

}  // namespace qoco
