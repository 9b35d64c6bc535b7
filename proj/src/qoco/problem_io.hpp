#pragma once

#include <iosfwd>
#include <string>

#include "qoco/problem.hpp"

namespace qoco {

// "QOCOPROB 1" text format: header, dimension line, SOC dimension line,
// matrices P, A, G as 0-based column-major triplets, then vectors c, b, h.
// Reals are written with 17 significant digits so they round-trip exactly.

void write_problem(std::ostream& out, const ProblemData& data);
void write_problem_file(const std::string& path, const ProblemData& data);

/// The parsed problem is validated before it is returned.
ProblemData read_problem(std::istream& in);
ProblemData read_problem_file(const std::string& path);

}  // namespace qoco
