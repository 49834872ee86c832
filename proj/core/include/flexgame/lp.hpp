#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace flexgame::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Linear program in the canonical form used throughout the project:
///
///   min  c' x
///   s.t. A x <= d        (inequality block, duals lambda >= 0)
///        E x  = b        (equality block, duals mu, free sign)
///        l <= x <= u     (bounds, +-inf allowed; l == u pins a variable)
///
/// Duals follow the Lagrangian  L = c'x + lambda'(Ax - d) + mu'(Ex - b),
/// so at an optimum  r := c + A'lambda + E'mu  is the vector of bound
/// multipliers: r_j >= 0 when x_j sits at its lower bound, r_j <= 0 at the
/// upper bound, r_j = 0 when x_j is strictly between its bounds.
struct LpProblem {
  Eigen::VectorXd cost;
  Eigen::MatrixXd ineq;
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq;
  Eigen::VectorXd eq_rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<std::string> var_names;
  std::vector<std::string> ineq_names;
  std::vector<std::string> eq_names;

  int num_vars() const { return static_cast<int>(cost.size()); }
  int num_ineq() const { return static_cast<int>(ineq_rhs.size()); }
  int num_eq() const { return static_cast<int>(eq_rhs.size()); }

  /// Throws std::invalid_argument on dimension mismatch, l > u, or
  /// duplicate/empty labels.
  void check_consistent() const;

  bool operator==(const LpProblem& other) const;
};

/// Incremental construction helper; assembles the dense blocks once.
class LpBuilder {
 public:
  using Terms = std::vector<std::pair<int, double>>;

  int add_variable(std::string name, double lower, double upper, double cost);
  int add_inequality(std::string name, const Terms& terms, double rhs);
  int add_equality(std::string name, const Terms& terms, double rhs);

  int num_vars() const { return static_cast<int>(cost_.size()); }

  LpProblem build() const;

 private:
  struct Row {
    std::string name;
    Terms terms;
    double rhs;
  };
  std::vector<double> cost_, lower_, upper_;
  std::vector<std::string> var_names_;
  std::vector<Row> ineq_rows_, eq_rows_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd ineq_duals;     ///< lambda >= 0
  Eigen::VectorXd eq_duals;       ///< mu
  Eigen::VectorXd reduced_costs;  ///< r = c + A'lambda + E'mu
  /// Infeasibility certificate (set when status == kInfeasible):
  /// with t := A'farkas_ineq + E'farkas_eq, farkas_ineq >= 0, the bound-wise
  /// support  sum_j max_{x_j in [l_j,u_j]} t_j x_j  is strictly below
  /// farkas_ineq'd + farkas_eq'b... negated; see certificate_slack().
  Eigen::VectorXd farkas_ineq;
  Eigen::VectorXd farkas_eq;
  int iterations = 0;
};

struct SimplexOptions {
  double tol = 1e-9;        ///< feasibility / optimality pivot tolerance
  int max_iterations = 0;   ///< 0 = automatic (scaled with problem size)
  int stall_threshold = 200;  ///< degenerate pivots before Bland's rule
  int refactor_every = 100;   ///< basis inverse refresh cadence
};

/// Bounded-variable two-phase revised simplex. Deterministic: identical
/// input bytes produce identical solution bytes. Entering variable is the
/// most negative reduced cost, ties broken by lowest column index; Bland's
/// rule takes over after `stall_threshold` non-improving pivots.
LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options = {});

/// Dual objective  g = -lambda'd - mu'b + sum_j box_term(r_j)  evaluated
/// from the reported multipliers. Equals the primal objective at an optimum
/// (strong duality). Throws std::logic_error unless status is kOptimal.
double dual_objective(const LpProblem& problem, const LpSolution& solution);

/// Worst-case violation of the infeasibility certificate: a valid Farkas
/// certificate makes this strictly negative (no x in the box can satisfy
/// the aggregated constraint).
double certificate_slack(const LpProblem& problem, const LpSolution& solution);

struct KktReport {
  double primal_residual = 0.0;   ///< max constraint / bound violation
  double dual_residual = 0.0;     ///< max sign violation of lambda / r
  double complementarity = 0.0;   ///< max lambda_k (d_k - A_k x), bound terms
  double duality_gap = 0.0;       ///< |c'x - g|
  bool ok(double tol) const;
};

KktReport check_kkt(const LpProblem& problem, const LpSolution& solution);

/// CPLEX LP-format dump for cross-checking against external solvers.
void write_lp_format(const LpProblem& problem, std::ostream& os);

}  // namespace flexgame::lp
