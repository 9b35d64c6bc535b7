#pragma once

#include <span>
#include <string>
#include <vector>

#include "qoco/bench.hpp"

namespace qoco {

/// exp(mean(ln(t + shift))) - shift. Non-finite entries (failures) count as
/// `failure_time`. Throws EmptyInput for an empty sample.
double shifted_geometric_mean(std::span<const double> times, double shift, double failure_time);

enum class ProfileKind { Relative, Absolute };

/// times[solver][problem], +infinity marking a failed run. Relative: the
/// fraction of problems with t <= tau * (best time on that problem);
/// Absolute: the fraction with t <= tau seconds. Returns one curve per solver.
std::vector<std::vector<double>> performance_profile(const std::vector<std::vector<double>>& times,
                                                     ProfileKind kind, std::span<const double> taus);

/// Log-spaced grid: [1, 1e3] for relative profiles, [1e-4, time_limit] for absolute.
std::vector<double> default_taus(ProfileKind kind, double time_limit, int points = 121);

struct BenchSummary {
  std::vector<std::string> solvers;
  std::vector<std::string> problems;
  std::vector<std::vector<double>> times;  // total runtime, +inf unless Solved
  std::vector<double> sgm;                 // failures count as the time limit
  std::vector<double> failure_rate;
};

BenchSummary summarize(const std::vector<BenchRecord>& records, double sgm_shift, double time_limit);

/// Writes sgm.csv and profile_<kind>.csv for each requested kind into `dir`.
void write_report(const BenchSummary& summary, const std::vector<ProfileKind>& kinds, double time_limit,
                  const std::string& dir);

}  // namespace qoco
