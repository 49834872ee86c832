#include "flexgame/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace flexgame::lp {

void LpProblem::check_consistent() const {
  const int n = num_vars();
  auto fail = [](const std::string& what) { throw std::invalid_argument("LpProblem: " + what); };
  if (lower.size() != n || upper.size() != n) fail("bound dimensions do not match cost");
  if (ineq.rows() != num_ineq() || (num_ineq() > 0 && ineq.cols() != n))
    fail("inequality block dimensions inconsistent");
  if (eq.rows() != num_eq() || (num_eq() > 0 && eq.cols() != n))
    fail("equality block dimensions inconsistent");
  if (static_cast<int>(var_names.size()) != n) fail("variable label count mismatch");
  if (static_cast<int>(ineq_names.size()) != num_ineq()) fail("inequality label count mismatch");
  if (static_cast<int>(eq_names.size()) != num_eq()) fail("equality label count mismatch");
  for (int j = 0; j < n; ++j) {
    if (std::isnan(lower(j)) || std::isnan(upper(j))) fail("NaN bound on " + var_names[j]);
    if (lower(j) > upper(j)) fail("lower > upper on " + var_names[j]);
  }
  std::unordered_set<std::string> seen;
  for (const auto* names : {&var_names, &ineq_names, &eq_names}) {
    for (const auto& name : *names) {
      if (name.empty()) fail("empty label");
      if (!seen.insert(name).second) fail("duplicate label '" + name + "'");
    }
  }
}

bool LpProblem::operator==(const LpProblem& other) const {
  auto same = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  return same(cost, other.cost) && same(ineq, other.ineq) && same(ineq_rhs, other.ineq_rhs) &&
         same(eq, other.eq) && same(eq_rhs, other.eq_rhs) && same(lower, other.lower) &&
         same(upper, other.upper) && var_names == other.var_names &&
         ineq_names == other.ineq_names && eq_names == other.eq_names;
}

int LpBuilder::add_variable(std::string name, double lower, double upper, double cost) {
  var_names_.push_back(std::move(name));
  lower_.push_back(lower);
  upper_.push_back(upper);
  cost_.push_back(cost);
  return static_cast<int>(cost_.size()) - 1;
}

int LpBuilder::add_inequality(std::string name, const Terms& terms, double rhs) {
  ineq_rows_.push_back({std::move(name), terms, rhs});
  return static_cast<int>(ineq_rows_.size()) - 1;
}

int LpBuilder::add_equality(std::string name, const Terms& terms, double rhs) {
  eq_rows_.push_back({std::move(name), terms, rhs});
  return static_cast<int>(eq_rows_.size()) - 1;
}

LpProblem LpBuilder::build() const {
  LpProblem p;
  const int n = num_vars();
  p.cost = Eigen::Map<const Eigen::VectorXd>(cost_.data(), n);
  p.lower = Eigen::Map<const Eigen::VectorXd>(lower_.data(), n);
  p.upper = Eigen::Map<const Eigen::VectorXd>(upper_.data(), n);
  p.var_names = var_names_;
  auto fill = [n](const std::vector<Row>& rows, Eigen::MatrixXd& mat, Eigen::VectorXd& rhs,
                  std::vector<std::string>& names) {
    const int m = static_cast<int>(rows.size());
    mat = Eigen::MatrixXd::Zero(m, n);
    rhs.resize(m);
    names.reserve(m);
    for (int i = 0; i < m; ++i) {
      for (const auto& [j, a] : rows[i].terms) mat(i, j) += a;
      rhs(i) = rows[i].rhs;
      names.push_back(rows[i].name);
    }
  };
  fill(ineq_rows_, p.ineq, p.ineq_rhs, p.ineq_names);
  fill(eq_rows_, p.eq, p.eq_rhs, p.eq_names);
  p.check_consistent();
  return p;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFreeAtZero };

// Bounded-variable revised simplex over the equality system
//   [A  I  .][x s a]' = rhs,  per-column bounds.
// Columns are ordered structural | slack | artificial. The basis inverse is
// kept explicitly and refreshed from an LU factorization on a fixed cadence.
class Simplex {
 public:
  Simplex(const Eigen::MatrixXd& a_ineq, const Eigen::VectorXd& d, const Eigen::MatrixXd& a_eq,
          const Eigen::VectorXd& b, const Eigen::VectorXd& lo, const Eigen::VectorXd& up,
          const Eigen::VectorXd& cost, const SimplexOptions& opt)
      : opt_(opt),
        mi_(static_cast<int>(d.size())),
        me_(static_cast<int>(b.size())),
        m_(mi_ + me_),
        n_(static_cast<int>(cost.size())),
        cost_struct_(cost) {
    rhs_.resize(m_);
    rhs_ << d, b;
    rhs_scale_ = m_ > 0 ? 1.0 + rhs_.cwiseAbs().maxCoeff() : 1.0;

    // Nonbasic start: every structural variable parked at a finite bound.
    state_.assign(n_, VarState::kAtLower);
    value_.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lo(j))) {
        state_[j] = VarState::kAtLower;
        value_[j] = lo(j);
      } else if (std::isfinite(up(j))) {
        state_[j] = VarState::kAtUpper;
        value_[j] = up(j);
      } else {
        state_[j] = VarState::kFreeAtZero;
        value_[j] = 0.0;
      }
    }

    Eigen::VectorXd residual = rhs_;
    if (n_ > 0) {
      Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(value_.data(), n_);
      if (mi_ > 0) residual.head(mi_) -= a_ineq * x0;
      if (me_ > 0) residual.tail(me_) -= a_eq * x0;
    }

    // Artificial columns only where the slack start is not feasible.
    art_col_.assign(m_, -1);
    int n_art = 0;
    for (int i = 0; i < m_; ++i) {
      const bool needs_art = (i >= mi_) || residual(i) < 0.0;
      if (needs_art) art_col_[i] = n_ + mi_ + n_art++;
    }
    ncols_ = n_ + mi_ + n_art;

    w_ = Eigen::MatrixXd::Zero(m_, ncols_);
    if (mi_ > 0 && n_ > 0) w_.topLeftCorner(mi_, n_) = a_ineq;
    if (me_ > 0 && n_ > 0) w_.bottomLeftCorner(me_, n_) = a_eq;
    lo_.resize(ncols_);
    up_.resize(ncols_);
    lo_.head(n_) = lo;
    up_.head(n_) = up;
    state_.resize(ncols_, VarState::kAtLower);
    value_.resize(ncols_, 0.0);

    basic_.assign(m_, -1);
    for (int i = 0; i < mi_; ++i) {
      const int s = n_ + i;
      w_(i, s) = 1.0;
      lo_(s) = 0.0;
      up_(s) = kInf;
      if (art_col_[i] < 0) {
        basic_[i] = s;
        state_[s] = VarState::kBasic;
        value_[s] = residual(i);
      } else {
        state_[s] = VarState::kAtLower;
        value_[s] = 0.0;
      }
    }
    for (int i = 0; i < m_; ++i) {
      const int a = art_col_[i];
      if (a < 0) continue;
      w_(i, a) = residual(i) >= 0.0 ? 1.0 : -1.0;
      lo_(a) = 0.0;
      up_(a) = kInf;
      basic_[i] = a;
      state_[a] = VarState::kBasic;
      value_[a] = std::abs(residual(i));
    }

    binv_ = Eigen::MatrixXd::Identity(m_, m_);
    for (int i = 0; i < m_; ++i) binv_(i, i) = 1.0 / w_(i, basic_[i]);

    cost_ = Eigen::VectorXd::Zero(ncols_);
    max_iter_ = opt_.max_iterations > 0 ? opt_.max_iterations : 1000 + 50 * (m_ + ncols_);
  }

  LpStatus solve() {
    // Phase 1: minimize total artificial mass.
    cost_.setZero();
    for (int i = 0; i < m_; ++i)
      if (art_col_[i] >= 0) cost_(art_col_[i]) = 1.0;
    LpStatus st = iterate();
    if (st != LpStatus::kOptimal) return st == LpStatus::kUnbounded ? LpStatus::kIterationLimit : st;
    refresh(true);
    if (phase1_objective() > 1e-7 * rhs_scale_) {
      farkas_ = dual_multipliers();
      return LpStatus::kInfeasible;
    }
    // Phase 2: artificials pinned at zero, real costs.
    for (int i = 0; i < m_; ++i)
      if (art_col_[i] >= 0) up_(art_col_[i]) = 0.0;
    cost_.setZero();
    cost_.head(n_) = cost_struct_;
    st = iterate();
    if (st == LpStatus::kOptimal) refresh(true);
    return st;
  }

  Eigen::VectorXd primal() const {
    return Eigen::Map<const Eigen::VectorXd>(value_.data(), n_);
  }

  // Row multipliers y with y' = c_B' B^-1; reported duals are their negation.
  Eigen::VectorXd dual_multipliers() const {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb(i) = cost_(basic_[i]);
    return binv_.transpose() * cb;
  }

  const Eigen::VectorXd& farkas() const { return farkas_; }
  int iterations() const { return total_iter_; }
  int num_ineq() const { return mi_; }

 private:
  double phase1_objective() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i)
      if (art_col_[i] >= 0) s += value_[art_col_[i]];
    return s;
  }

  // Rebuild the basis inverse from scratch and optionally resync the basic
  // values against the bound-held nonbasics.
  void refresh(bool recompute_values) {
    Eigen::MatrixXd b(m_, m_);
    for (int i = 0; i < m_; ++i) b.col(i) = w_.col(basic_[i]);
    binv_ = Eigen::PartialPivLU<Eigen::MatrixXd>(b).inverse();
    if (!recompute_values) return;
    Eigen::VectorXd r = rhs_;
    for (int j = 0; j < ncols_; ++j) {
      if (state_[j] == VarState::kBasic || value_[j] == 0.0) continue;
      r -= w_.col(j) * value_[j];
    }
    Eigen::VectorXd xb = binv_ * r;
    for (int i = 0; i < m_; ++i) value_[basic_[i]] = xb(i);
  }

  LpStatus iterate() {
    int stall = 0;
    bool bland = false;
    int since_refactor = 0;
    while (true) {
      if (total_iter_++ > max_iter_) return LpStatus::kIterationLimit;
      if (++since_refactor >= opt_.refactor_every) {
        refresh(true);
        since_refactor = 0;
      }
      const Eigen::VectorXd y = dual_multipliers();
      const Eigen::VectorXd rho = cost_ - w_.transpose() * y;

      int enter = -1;
      double best_score = opt_.tol;
      for (int j = 0; j < ncols_; ++j) {
        double score = 0.0;
        switch (state_[j]) {
          case VarState::kBasic: continue;
          case VarState::kAtLower: score = -rho(j); break;
          case VarState::kAtUpper: score = rho(j); break;
          case VarState::kFreeAtZero: score = std::abs(rho(j)); break;
        }
        if (score > best_score) {
          enter = j;
          best_score = score;
          if (bland) break;  // lowest eligible index
        }
      }
      if (enter < 0) return LpStatus::kOptimal;

      const double dir = (state_[enter] == VarState::kAtUpper ||
                          (state_[enter] == VarState::kFreeAtZero && rho(enter) > 0.0))
                             ? -1.0
                             : 1.0;
      const Eigen::VectorXd col = binv_ * w_.col(enter);

      // Ratio test: blocking basic variable, or the entering variable's own
      // opposite bound (bound flip).
      double best_t = kInf;
      int leave_pos = -1;
      double leave_piv = 0.0;
      const double flip_t =
          (std::isfinite(lo_(enter)) && std::isfinite(up_(enter))) ? up_(enter) - lo_(enter) : kInf;
      for (int k = 0; k < m_; ++k) {
        const int j = basic_[k];
        const double delta = -dir * col(k);  // d x_j / d t
        double t;
        if (delta > kPivTol) {
          if (!std::isfinite(up_(j))) continue;
          t = (up_(j) - value_[j]) / delta;
        } else if (delta < -kPivTol) {
          if (!std::isfinite(lo_(j))) continue;
          t = (value_[j] - lo_(j)) / (-delta);
        } else {
          continue;
        }
        if (t < 0.0) t = 0.0;
        bool better;
        if (bland) {
          // Bland: smallest ratio, ties to the lowest basic position.
          better = t < best_t - 1e-12 || (t <= best_t + 1e-12 && leave_pos >= 0 && k < leave_pos) ||
                   leave_pos < 0;
        } else {
          better = t < best_t - 1e-10 ||
                   (t < best_t + 1e-10 && std::abs(col(k)) > std::abs(leave_piv) + 1e-12);
        }
        if (better) {
          best_t = std::min(best_t, t);
          leave_pos = k;
          leave_piv = col(k);
        }
      }

      if (!std::isfinite(best_t) && !std::isfinite(flip_t)) return LpStatus::kUnbounded;

      if (flip_t < best_t) {
        // Entering variable runs to its other bound; basis unchanged.
        value_[enter] = dir > 0 ? up_(enter) : lo_(enter);
        state_[enter] = dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
        for (int k = 0; k < m_; ++k) value_[basic_[k]] -= dir * col(k) * flip_t;
        stall = flip_t <= 1e-12 ? stall + 1 : 0;
      } else {
        const double t = best_t;
        const int leave = basic_[leave_pos];
        for (int k = 0; k < m_; ++k) value_[basic_[k]] -= dir * col(k) * t;
        value_[enter] = (state_[enter] == VarState::kFreeAtZero ? 0.0 : value_[enter]) + dir * t;
        const double leave_delta = -dir * col(leave_pos);
        if (leave_delta > 0.0) {
          state_[leave] = VarState::kAtUpper;
          value_[leave] = up_(leave);
        } else {
          state_[leave] = VarState::kAtLower;
          value_[leave] = lo_(leave);
        }
        state_[enter] = VarState::kBasic;
        basic_[leave_pos] = enter;
        // Eta update of the explicit inverse.
        const double piv = col(leave_pos);
        binv_.row(leave_pos) /= piv;
        for (int i = 0; i < m_; ++i) {
          if (i == leave_pos) continue;
          const double f = col(i);
          if (f != 0.0) binv_.row(i) -= f * binv_.row(leave_pos);
        }
        stall = t <= 1e-12 ? stall + 1 : 0;
      }
      if (stall > opt_.stall_threshold) bland = true;
    }
  }

  static constexpr double kPivTol = 1e-9;

  SimplexOptions opt_;
  int mi_, me_, m_, n_;
  Eigen::VectorXd cost_struct_;
  Eigen::VectorXd rhs_;
  double rhs_scale_ = 1.0;
  Eigen::MatrixXd w_;
  Eigen::VectorXd lo_, up_, cost_;
  std::vector<VarState> state_;
  std::vector<double> value_;
  std::vector<int> basic_;
  std::vector<int> art_col_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd farkas_;
  int ncols_ = 0;
  int max_iter_ = 0;
  int total_iter_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options) {
  problem.check_consistent();
  const int n = problem.num_vars();
  const int mi = problem.num_ineq();
  const int me = problem.num_eq();

  // Presolve: eliminate pinned variables (l == u) into the right-hand sides.
  std::vector<int> keep;
  keep.reserve(n);
  for (int j = 0; j < n; ++j)
    if (problem.lower(j) != problem.upper(j)) keep.push_back(j);
  const int nk = static_cast<int>(keep.size());

  Eigen::VectorXd fixed = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j)
    if (problem.lower(j) == problem.upper(j)) fixed(j) = problem.lower(j);

  Eigen::MatrixXd a_ineq(mi, nk), a_eq(me, nk);
  Eigen::VectorXd lo(nk), up(nk), cost(nk);
  for (int k = 0; k < nk; ++k) {
    const int j = keep[k];
    if (mi > 0) a_ineq.col(k) = problem.ineq.col(j);
    if (me > 0) a_eq.col(k) = problem.eq.col(j);
    lo(k) = problem.lower(j);
    up(k) = problem.upper(j);
    cost(k) = problem.cost(j);
  }
  Eigen::VectorXd d = problem.ineq_rhs;
  Eigen::VectorXd b = problem.eq_rhs;
  if (nk < n) {
    if (mi > 0) d -= problem.ineq * fixed;
    if (me > 0) b -= problem.eq * fixed;
  }

  Simplex simplex(a_ineq, d, a_eq, b, lo, up, cost, options);
  const LpStatus status = simplex.solve();

  LpSolution sol;
  sol.status = status;
  sol.iterations = simplex.iterations();
  sol.x = fixed;
  const Eigen::VectorXd xr = simplex.primal();
  for (int k = 0; k < nk; ++k) sol.x(keep[k]) = xr(k);
  sol.objective = problem.cost.dot(sol.x);

  if (status == LpStatus::kInfeasible) {
    const Eigen::VectorXd& y = simplex.farkas();
    sol.farkas_ineq = (-y.head(mi)).cwiseMax(0.0);
    sol.farkas_eq = -y.tail(me);
    return sol;
  }
  if (status != LpStatus::kOptimal && status != LpStatus::kIterationLimit) return sol;

  const Eigen::VectorXd y = simplex.dual_multipliers();
  sol.ineq_duals = -y.head(mi);
  sol.eq_duals = -y.tail(me);
  // r = c + A'lambda + E'mu over the original variable set (pinned variables
  // included, so the dual objective decomposition stays exact).
  sol.reduced_costs = problem.cost;
  if (mi > 0) sol.reduced_costs += problem.ineq.transpose() * sol.ineq_duals;
  if (me > 0) sol.reduced_costs += problem.eq.transpose() * sol.eq_duals;
  return sol;
}

double dual_objective(const LpProblem& problem, const LpSolution& solution) {
  if (solution.status != LpStatus::kOptimal)
    throw std::logic_error("dual_objective: solution status is not optimal");
  double g = 0.0;
  if (problem.num_ineq() > 0) g -= solution.ineq_duals.dot(problem.ineq_rhs);
  if (problem.num_eq() > 0) g -= solution.eq_duals.dot(problem.eq_rhs);
  for (int j = 0; j < problem.num_vars(); ++j) {
    const double r = solution.reduced_costs(j);
    if (problem.lower(j) == problem.upper(j)) {
      g += r * problem.lower(j);
    } else if (r > 1e-9) {
      g += r * problem.lower(j);
    } else if (r < -1e-9) {
      g += r * problem.upper(j);
    }
  }
  return g;
}

double certificate_slack(const LpProblem& problem, const LpSolution& solution) {
  if (solution.farkas_ineq.size() != problem.num_ineq() ||
      solution.farkas_eq.size() != problem.num_eq())
    throw std::logic_error("certificate_slack: no Farkas certificate attached");
  Eigen::VectorXd t = Eigen::VectorXd::Zero(problem.num_vars());
  if (problem.num_ineq() > 0) t += problem.ineq.transpose() * solution.farkas_ineq;
  if (problem.num_eq() > 0) t += problem.eq.transpose() * solution.farkas_eq;
  double inf_support = 0.0;
  for (int j = 0; j < problem.num_vars(); ++j) {
    if (t(j) > 1e-11) {
      inf_support += t(j) * problem.lower(j);
    } else if (t(j) < -1e-11) {
      inf_support += t(j) * problem.upper(j);
    }
  }
  double rhs = 0.0;
  if (problem.num_ineq() > 0) rhs += solution.farkas_ineq.dot(problem.ineq_rhs);
  if (problem.num_eq() > 0) rhs += solution.farkas_eq.dot(problem.eq_rhs);
  return rhs - inf_support;  // valid certificate: strictly negative
}

bool KktReport::ok(double tol) const {
  return primal_residual <= tol && dual_residual <= tol && complementarity <= tol &&
         duality_gap <= tol * 10;
}

KktReport check_kkt(const LpProblem& problem, const LpSolution& solution) {
  KktReport rep;
  const bool has_duals = solution.reduced_costs.size() == problem.num_vars() &&
                         solution.ineq_duals.size() == problem.num_ineq() &&
                         solution.eq_duals.size() == problem.num_eq();
  if (!has_duals) throw std::logic_error("check_kkt: solution carries no multipliers");
  const auto& x = solution.x;
  if (problem.num_ineq() > 0) {
    const Eigen::VectorXd slack = problem.ineq_rhs - problem.ineq * x;
    rep.primal_residual = std::max(rep.primal_residual, (-slack).maxCoeff());
    rep.dual_residual = std::max(rep.dual_residual, (-solution.ineq_duals).maxCoeff());
    rep.complementarity =
        std::max(rep.complementarity, solution.ineq_duals.cwiseProduct(slack).cwiseAbs().maxCoeff());
  }
  if (problem.num_eq() > 0) {
    rep.primal_residual =
        std::max(rep.primal_residual, (problem.eq * x - problem.eq_rhs).cwiseAbs().maxCoeff());
  }
  for (int j = 0; j < problem.num_vars(); ++j) {
    rep.primal_residual = std::max({rep.primal_residual, problem.lower(j) - x(j), x(j) - problem.upper(j)});
    if (problem.lower(j) == problem.upper(j)) continue;
    const double r = solution.reduced_costs(j);
    // Sign condition by position: r must not push into the interior.
    if (r > 0.0) {
      if (std::isfinite(problem.lower(j)))
        rep.complementarity = std::max(rep.complementarity, r * (x(j) - problem.lower(j)));
      else
        rep.dual_residual = std::max(rep.dual_residual, r);
    } else if (r < 0.0) {
      if (std::isfinite(problem.upper(j)))
        rep.complementarity = std::max(rep.complementarity, -r * (problem.upper(j) - x(j)));
      else
        rep.dual_residual = std::max(rep.dual_residual, -r);
    }
  }
  if (solution.status == LpStatus::kOptimal) {
    const double g = dual_objective(problem, solution);
    rep.duality_gap = std::abs(solution.objective - g) / (1.0 + std::abs(solution.objective));
  }
  return rep;
}

namespace {

std::string lp_safe_name(const std::string& name, int index, char prefix) {
  std::string out;
  out.reserve(name.size() + 4);
  for (char ch : name) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '_' || ch == '.';
    out.push_back(ok ? ch : '_');
  }
  if (out.empty() || !((out[0] >= 'a' && out[0] <= 'z') || (out[0] >= 'A' && out[0] <= 'Z')))
    out = std::string(1, prefix) + std::to_string(index) + "_" + out;
  return out;
}

void write_terms(std::ostream& os, const Eigen::MatrixXd& mat, int row,
                 const std::vector<std::string>& names) {
  bool first = true;
  for (int j = 0; j < mat.cols(); ++j) {
    const double a = mat(row, j);
    if (a == 0.0) continue;
    if (first) {
      os << (a < 0 ? "- " : "");
    } else {
      os << (a < 0 ? " - " : " + ");
    }
    os << std::abs(a) << " " << names[j];
    first = false;
  }
  if (first) os << "0 " << names[0];
}

}  // namespace

void write_lp_format(const LpProblem& problem, std::ostream& os) {
  std::vector<std::string> vn(problem.num_vars());
  for (int j = 0; j < problem.num_vars(); ++j) vn[j] = lp_safe_name(problem.var_names[j], j, 'x');
  os << "\\ " << problem.num_vars() << " variables, " << problem.num_ineq() << " <= rows, "
     << problem.num_eq() << " = rows\n";
  os << "Minimize\n obj: ";
  bool first = true;
  for (int j = 0; j < problem.num_vars(); ++j) {
    const double c = problem.cost(j);
    if (c == 0.0) continue;
    os << (first ? (c < 0 ? "- " : "") : (c < 0 ? " - " : " + ")) << std::abs(c) << " " << vn[j];
    first = false;
  }
  if (first) os << "0 " << vn[0];
  os << "\nSubject To\n";
  for (int i = 0; i < problem.num_ineq(); ++i) {
    os << " " << lp_safe_name(problem.ineq_names[i], i, 'r') << ": ";
    write_terms(os, problem.ineq, i, vn);
    os << " <= " << problem.ineq_rhs(i) << "\n";
  }
  for (int i = 0; i < problem.num_eq(); ++i) {
    os << " " << lp_safe_name(problem.eq_names[i], i, 'e') << ": ";
    write_terms(os, problem.eq, i, vn);
    os << " = " << problem.eq_rhs(i) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < problem.num_vars(); ++j) {
    const double l = problem.lower(j), u = problem.upper(j);
    if (!std::isfinite(l) && !std::isfinite(u)) {
      os << " " << vn[j] << " free\n";
    } else if (!std::isfinite(u)) {
      os << " " << vn[j] << " >= " << l << "\n";
    } else if (!std::isfinite(l)) {
      os << " " << vn[j] << " <= " << u << "\n";
    } else {
      os << " " << l << " <= " << vn[j] << " <= " << u << "\n";
    }
  }
  os << "End\n";
}

}  // namespace flexgame::lp
