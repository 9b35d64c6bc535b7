#include "qoco/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include "qoco/error.hpp"

namespace qoco {

double shifted_geometric_mean(std::span<const double> times, double shift, double failure_time) {
  if (times.empty()) throw Error(ErrorCode::EmptyInput, "shifted geometric mean of no samples");
  double acc = 0.0;
  for (double t : times) acc += std::log((std::isfinite(t) ? t : failure_time) + shift);
  return std::exp(acc / static_cast<double>(times.size())) - shift;
}

std::vector<std::vector<double>> performance_profile(const std::vector<std::vector<double>>& times,
                                                     ProfileKind kind, std::span<const double> taus) {
  const std::size_t solvers = times.size();
  const std::size_t problems = solvers ? times[0].size() : 0;
  for (const auto& row : times) {
    if (row.size() != problems) throw Error(ErrorCode::DimensionMismatch, "ragged time matrix");
  }
  std::vector<double> best(problems, std::numeric_limits<double>::infinity());
  for (const auto& row : times) {
    for (std::size_t p = 0; p < problems; ++p) best[p] = std::min(best[p], row[p]);
  }

  std::vector<std::vector<double>> curves(solvers, std::vector<double>(taus.size(), 0.0));
  if (problems == 0) return curves;
  for (std::size_t s = 0; s < solvers; ++s) {
    for (std::size_t k = 0; k < taus.size(); ++k) {
      std::size_t count = 0;
      for (std::size_t p = 0; p < problems; ++p) {
        const double t = times[s][p];
        if (!std::isfinite(t)) continue;
        const double limit = kind == ProfileKind::Relative ? taus[k] * best[p] : taus[k];
        if (t <= limit) ++count;
      }
      curves[s][k] = static_cast<double>(count) / static_cast<double>(problems);
    }
  }
  return curves;
}

std::vector<double> default_taus(ProfileKind kind, double time_limit, int points) {
  const double lo = kind == ProfileKind::Relative ? 0.0 : -4.0;
  const double hi = kind == ProfileKind::Relative ? 3.0 : std::log10(std::max(time_limit, 1e-3));
  std::vector<double> taus(points);
  for (int i = 0; i < points; ++i) {
    taus[i] = std::pow(10.0, lo + (hi - lo) * i / std::max(1, points - 1));
  }
  if (kind == ProfileKind::Relative) taus.front() = 1.0;
  return taus;
}

BenchSummary summarize(const std::vector<BenchRecord>& records, double sgm_shift, double time_limit) {
  BenchSummary out;
  std::map<std::string, std::size_t> solver_idx, problem_idx;
  for (const auto& r : records) {
    if (solver_idx.emplace(r.backend, out.solvers.size()).second) out.solvers.push_back(r.backend);
    if (problem_idx.emplace(r.problem, out.problems.size()).second) out.problems.push_back(r.problem);
  }
  const double inf = std::numeric_limits<double>::infinity();
  out.times.assign(out.solvers.size(), std::vector<double>(out.problems.size(), inf));
  for (const auto& r : records) {
    const bool ok = r.status == "Solved" && std::isfinite(r.total_seconds()) && r.total_seconds() <= time_limit;
    out.times[solver_idx[r.backend]][problem_idx[r.problem]] = ok ? r.total_seconds() : inf;
  }
  for (const auto& row : out.times) {
    out.sgm.push_back(row.empty() ? std::numeric_limits<double>::quiet_NaN()
                                  : shifted_geometric_mean(row, sgm_shift, time_limit));
    const auto failed = std::count_if(row.begin(), row.end(), [](double t) { return !std::isfinite(t); });
    out.failure_rate.push_back(row.empty() ? 0.0 : static_cast<double>(failed) / static_cast<double>(row.size()));
  }
  return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_report(const BenchSummary& summary, const std::vector<ProfileKind>& kinds, double time_limit,
                  const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(std::filesystem::path(dir) / "sgm.csv");
    out << "solver,sgm_seconds,failure_rate,problems\n";
    for (std::size_t s = 0; s < summary.solvers.size(); ++s) {
      out << summary.solvers[s] << ',' << fmt(summary.sgm[s]) << ',' << fmt(summary.failure_rate[s]) << ','
          << summary.problems.size() << '\n';
    }
  }
  for (ProfileKind kind : kinds) {
    const auto taus = default_taus(kind, time_limit);
    const auto curves = performance_profile(summary.times, kind, taus);
    auto out = open_out(std::filesystem::path(dir) /
                        (kind == ProfileKind::Relative ? "profile_relative.csv" : "profile_absolute.csv"));
    out << "tau";
    for (const auto& s : summary.solvers) out << ',' << s;
    out << '\n';
    for (std::size_t k = 0; k < taus.size(); ++k) {
      out << fmt(taus[k]);
      for (const auto& curve : curves) out << ',' << fmt(curve[k]);
      out << '\n';
    }
  }
}

}  // namespace qoco
