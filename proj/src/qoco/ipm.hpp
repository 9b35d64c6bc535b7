#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qoco/cones.hpp"
#include "qoco/kkt.hpp"
#include "qoco/linsys.hpp"
#include "qoco/problem.hpp"

namespace qoco {

struct Iterate {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
  std::vector<double> s;
  double mu = 0.0;
};

struct Residuals {
  std::vector<double> r_dual;  // Px + c + A'y + G'z
  std::vector<double> r_eq;    // Ax - b
  std::vector<double> r_cone;  // Gx + s - h
  double gap = 0.0;            // s'z
  double objective_primal = 0.0;

  // Magnitudes used to scale the relative tolerances.
  double px_norm = 0.0;
  double aty_norm = 0.0;
  double gtz_norm = 0.0;
  double c_norm = 0.0;
  double ax_norm = 0.0;
  double b_norm = 0.0;
  double gx_norm = 0.0;
  double s_norm = 0.0;
  double h_norm = 0.0;
};

Residuals compute_residuals(const ProblemData& data, const Iterate& it);

/// Solved when every residual is within eps_abs + eps_rel * (its scale);
/// the comparisons are inclusive. Returns nullopt otherwise.
std::optional<SolveStatus> check_termination(const Residuals& res, const Iterate& it, const Settings& settings);

/// Everything one solve needs; owned by Solver.
struct IpmContext {
  ProblemData data;
  Settings settings;
  ConeLayout layout;
  KKTSystem kkt;
  std::unique_ptr<LinsysBackend> backend;
};

/// Builds the context: validation, KKT assembly and the backend's one-time
/// analysis.
IpmContext make_context(ProblemData data, const Settings& settings, std::string_view algebra);

/// Factors the KKT matrix with W = I and solves it twice: once for the
/// primal point (rhs (0, b, h)) and once for the dual point (rhs (-c, 0, 0)).
/// Slack and cone duals are shifted into the interior of K.
Iterate initialize_iterate(IpmContext& ctx);

struct StepControl {
  std::optional<double> sigma;  // overrides the (mu_aff / mu)^3 heuristic
  bool corrector = true;        // second-order Mehrotra term
};

struct StepInfo {
  double alpha_affine = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  double mu_before = 0.0;
  double mu_after = 0.0;
};

/// One Mehrotra predictor-corrector iteration: one factorization and two
/// solves. Throws NumericalError on a non-finite direction.
StepInfo ipm_step(IpmContext& ctx, const Residuals& res, Iterate& it, const StepControl& control = {});

struct IterationLog {
  int iteration;
  const Iterate& iterate;
  const Residuals& residuals;
  const StepInfo* step;  // null on the terminating evaluation
};

/// Front end: construct with the algebra name, setup(), then solve().
class Solver {
 public:
  explicit Solver(std::string_view algebra);

  /// Validation errors are raised before anything is allocated.
  void setup(ProblemData data, const Settings& settings = {});

  SolveResult solve();

  void set_iteration_callback(std::function<void(const IterationLog&)> cb) { callback_ = std::move(cb); }

  const std::string& algebra() const { return algebra_; }
  bool is_setup() const { return ctx_ != nullptr; }
  const IpmContext& context() const;

 private:
  std::string algebra_;
  std::unique_ptr<IpmContext> ctx_;
  double setup_seconds_ = 0.0;
  std::function<void(const IterationLog&)> callback_;
};

}  // namespace qoco
