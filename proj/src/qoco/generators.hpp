#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qoco/problem.hpp"

namespace qoco {

enum class Family { Huber, Portfolio, MultiPeriodPortfolio, GroupLasso, TVDenoising };

inline constexpr Family kAllFamilies[] = {Family::Huber, Family::Portfolio, Family::MultiPeriodPortfolio,
                                          Family::GroupLasso, Family::TVDenoising};

std::string_view family_name(Family family);
/// Accepts the names produced by family_name(); throws InvalidArgument otherwise.
Family parse_family(std::string_view name);

/// size_param is N for Huber and group lasso, the factor count k for the
/// single-period portfolio, the horizon T for the multi-period portfolio and
/// the image side length for TV denoising.
struct GeneratorConfig {
  Family family = Family::Huber;
  Index size_param = 1;
  std::uint64_t seed = 0;

  double gamma = 1.0;           // risk aversion (both portfolio families)
  double lambda_reg = 0.0;      // group lasso weight; <= 0 selects 0.1 * |A'b|_inf
  double leverage_max = 1.6;    // multi-period |w_t|_1 bound
  double lambda_tv = 1.0;       // TV fidelity weight
  double huber_delta = 1.0;
  Index mpp_assets = 5000;      // rows of the multi-period factor loading matrix
  Index mpp_factors = 50;
};

/// Deterministic in (family, size_param, seed, constants). The result is validated.
ProblemData generate_problem(const GeneratorConfig& cfg);

/// e.g. "huber_50", "group_lasso_5", "tv_denoising_32".
std::string problem_name(const GeneratorConfig& cfg);

/// Smallest desk-scale size per family.
Index smallest_size(Family family);

}  // namespace qoco
