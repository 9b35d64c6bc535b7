#include "qoco/bench.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "qoco/error.hpp"
#include "qoco/ipm.hpp"

namespace qoco {

std::vector<BenchRecord> run_benchmark(const BenchOptions& opt,
                                       const std::function<void(const BenchRecord&)>& on_record) {
  std::vector<BenchRecord> records;
  for (Family family : opt.families) {
    std::vector<Index> sizes = opt.sizes;
    if (sizes.empty()) sizes.push_back(smallest_size(family));
    for (Index size : sizes) {
      GeneratorConfig cfg;
      cfg.family = family;
      cfg.size_param = size;
      cfg.seed = opt.seed;
      cfg.mpp_assets = opt.mpp_assets;
      ProblemData data;
      bool generated = true;
      try {
        data = generate_problem(cfg);
      } catch (const Error&) {
        generated = false;
      }
      for (const auto& backend : opt.backends) {
        BenchRecord rec;
        rec.problem = problem_name(cfg);
        rec.family = std::string(family_name(family));
        rec.backend = backend;
        rec.status = std::string(status_name(SolveStatus::NumericalError));
        rec.objective = std::numeric_limits<double>::quiet_NaN();
        if (generated) {
          rec.size_nnz = problem_size_nnz(data);
          try {
            Solver solver(backend);
            solver.setup(data, opt.settings);
            const SolveResult res = solver.solve();
            rec.status = std::string(status_name(res.status));
            rec.iterations = res.iterations;
            rec.setup_seconds = res.setup_seconds;
            rec.solve_seconds = res.solve_seconds;
            rec.objective = res.objective;
          } catch (const Error& e) {
            if (e.code() == ErrorCode::UnknownAlgebra) throw;
          }
        }
        if (on_record) on_record(rec);
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw Error(ErrorCode::ParseError, "bad number '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw Error(ErrorCode::ParseError, "bad integer '" + s + "'");
  return v;
}

}  // namespace

std::string format_record_csv(const BenchRecord& r) {
  return r.problem + ',' + r.family + ',' + std::to_string(r.size_nnz) + ',' + r.backend + ',' + r.status + ',' +
         std::to_string(r.iterations) + ',' + format_real(r.setup_seconds) + ',' + format_real(r.solve_seconds) +
         ',' + format_real(r.objective);
}

void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kBenchCsvHeader << '\n';
  for (const auto& r : records) out << format_record_csv(r) << '\n';
}

std::vector<BenchRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty benchmark CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kBenchCsvHeader) throw Error(ErrorCode::ParseError, "unexpected CSV header '" + line + "'");
  std::vector<BenchRecord> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 9) throw Error(ErrorCode::ParseError, "expected 9 columns in '" + line + "'");
    BenchRecord r;
    r.problem = f[0];
    r.family = f[1];
    r.size_nnz = parse_int(f[2]);
    r.backend = f[3];
    r.status = f[4];
    r.iterations = static_cast<int>(parse_int(f[5]));
    r.setup_seconds = parse_double(f[6]);
    r.solve_seconds = parse_double(f[7]);
    r.objective = parse_double(f[8]);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace qoco
