#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qoco/generators.hpp"
#include "qoco/problem.hpp"

namespace qoco {

struct BenchRecord {
  std::string problem;
  std::string family;
  std::int64_t size_nnz = 0;
  std::string backend;
  std::string status;
  int iterations = 0;
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;
  double objective = 0.0;

  double total_seconds() const { return setup_seconds + solve_seconds; }
  bool operator==(const BenchRecord&) const = default;
};

struct BenchOptions {
  std::vector<Family> families;
  std::vector<Index> sizes;  // empty: smallest size of each family
  std::vector<std::string> backends{"builtin"};
  Settings settings;         // settings.time_limit_seconds caps every run
  std::uint64_t seed = 0;
  Index mpp_assets = 5000;
};

/// Generates and solves every (family, size) on every backend, sequentially.
/// A failing run is recorded with its status and never stops the sweep.
std::vector<BenchRecord> run_benchmark(const BenchOptions& options,
                                       const std::function<void(const BenchRecord&)>& on_record = {});

inline constexpr const char* kBenchCsvHeader =
    "problem,family,size_nnz,backend,status,iterations,setup_seconds,solve_seconds,objective";

/// One CSV row without the trailing newline.
std::string format_record_csv(const BenchRecord& record);
void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records);
std::vector<BenchRecord> read_records_csv(std::istream& in);

}  // namespace qoco
