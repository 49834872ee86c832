#include <flexgame/lp.hpp>

#include <doctest.h>

#include <cstring>
#include <sstream>

#include "support/lp_oracle.hpp"

using namespace flexgame;
using lp::kInf;

TEST_CASE("single variable against its lower bound") {
  lp::LpBuilder b;
  b.add_variable("x", 3.0, kInf, 1.0);
  const auto p = b.build();
  const auto s = lp::solve_lp(p);
  REQUIRE(s.status == lp::LpStatus::kOptimal);
  CHECK(s.x(0) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(s.objective == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(s.reduced_costs(0) == doctest::Approx(1.0));  // bound multiplier
}

TEST_CASE("maximization via negated cost, inequality dual") {
  lp::LpBuilder b;
  b.add_variable("x", 0.0, kInf, -1.0);
  b.add_inequality("cap", {{0, 1.0}}, 5.0);
  const auto p = b.build();
  const auto s = lp::solve_lp(p);
  REQUIRE(s.status == lp::LpStatus::kOptimal);
  CHECK(s.x(0) == doctest::Approx(5.0));
  CHECK(s.objective == doctest::Approx(-5.0));
  CHECK(s.ineq_duals(0) == doctest::Approx(1.0));
  CHECK(lp::dual_objective(p, s) == doctest::Approx(-5.0));
}

TEST_CASE("three variable instance matches vertex enumeration") {
  // min -2x - 3y - z
  // x + y + z <= 10, x + 2y <= 8, z <= 4 (as a row), box [0, 6]^3
  lp::LpBuilder b;
  b.add_variable("x", 0.0, 6.0, -2.0);
  b.add_variable("y", 0.0, 6.0, -3.0);
  b.add_variable("z", 0.0, 6.0, -1.0);
  b.add_inequality("r0", {{0, 1.0}, {1, 1.0}, {2, 1.0}}, 10.0);
  b.add_inequality("r1", {{0, 1.0}, {1, 2.0}}, 8.0);
  b.add_inequality("r2", {{2, 1.0}}, 4.0);
  const auto p = b.build();
  const auto s = lp::solve_lp(p);
  REQUIRE(s.status == lp::LpStatus::kOptimal);
  const auto oracle = testsupport::enumerate_optimum(p);
  REQUIRE(oracle.has_value());
  CHECK(s.objective == doctest::Approx(oracle->objective).epsilon(1e-9));
  CHECK(lp::check_kkt(p, s).ok(1e-8));
}

TEST_CASE("hand-solved dual of a two variable instance") {
  // min x + 2y  s.t.  x + y >= 4  (written as -x - y <= -4), x,y >= 0.
  // Optimum (4, 0), objective 4; the row dual is 1 and y's reduced cost 1.
  lp::LpBuilder b;
  b.add_variable("x", 0.0, kInf, 1.0);
  b.add_variable("y", 0.0, kInf, 2.0);
  b.add_inequality("cover", {{0, -1.0}, {1, -1.0}}, -4.0);
  const auto p = b.build();
  const auto s = lp::solve_lp(p);
  REQUIRE(s.status == lp::LpStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(4.0));
  CHECK(s.ineq_duals(0) == doctest::Approx(1.0));
  CHECK(s.reduced_costs(1) == doctest::Approx(1.0));
  CHECK(lp::dual_objective(p, s) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK_THROWS_AS(lp::dual_objective(p, lp::LpSolution{}), std::logic_error);
}

TEST_CASE("equality rows with redundant duplicates") {
  // x + y = 4 stated twice, plus x - y = 2: consistent but rank deficient.
  lp::LpBuilder b;
  b.add_variable("x", -kInf, kInf, 1.0);
  b.add_variable("y", -kInf, kInf, 3.0);
  b.add_equality("sum", {{0, 1.0}, {1, 1.0}}, 4.0);
  b.add_equality("sum_again", {{0, 2.0}, {1, 2.0}}, 8.0);
  b.add_equality("diff", {{0, 1.0}, {1, -1.0}}, 2.0);
  const auto p = b.build();
  const auto s = lp::solve_lp(p);
  REQUIRE(s.status == lp::LpStatus::kOptimal);
  CHECK(s.x(0) == doctest::Approx(3.0));
  CHECK(s.x(1) == doctest::Approx(1.0));
  CHECK(lp::check_kkt(p, s).ok(1e-8));
}

TEST_CASE("infeasible instance carries a valid Farkas certificate") {
  lp::LpBuilder b;
  b.add_variable("x", 0.0, 2.0, 1.0);
  b.add_variable("y", 0.0, 2.0, 1.0);
  b.add_inequality("impossible", {{0, -1.0}, {1, -1.0}}, -5.0);  // x + y >= 5
  const auto p = b.build();
  const auto s = lp::solve_lp(p);
  REQUIRE(s.status == lp::LpStatus::kInfeasible);
  CHECK(s.farkas_ineq.minCoeff() >= 0.0);
  CHECK(lp::certificate_slack(p, s) < -1e-9);
}

TEST_CASE("infeasible equality system certificate") {
  lp::LpBuilder b;
  b.add_variable("x", 0.0, 10.0, 0.0);
  b.add_equality("a", {{0, 1.0}}, 3.0);
  b.add_equality("b", {{0, 1.0}}, 4.0);
  const auto p = b.build();
  const auto s = lp::solve_lp(p);
  REQUIRE(s.status == lp::LpStatus::kInfeasible);
  CHECK(lp::certificate_slack(p, s) < -1e-9);
}

TEST_CASE("unbounded detection") {
  lp::LpBuilder b;
  b.add_variable("x", 0.0, kInf, -1.0);
  b.add_inequality("weak", {{0, -1.0}}, 0.0);
  const auto p = b.build();
  CHECK(lp::solve_lp(p).status == lp::LpStatus::kUnbounded);
}

TEST_CASE("pinned variables are eliminated but priced") {
  lp::LpBuilder b;
  b.add_variable("x", 0.0, kInf, 2.0);
  b.add_variable("t", 5.0, 5.0, 0.0);  // pinned
  b.add_equality("bal", {{0, 1.0}, {1, -1.0}}, 1.0);  // x = t + 1
  const auto p = b.build();
  const auto s = lp::solve_lp(p);
  REQUIRE(s.status == lp::LpStatus::kOptimal);
  CHECK(s.x(0) == doctest::Approx(6.0));
  CHECK(s.x(1) == doctest::Approx(5.0));
  CHECK(s.objective == doctest::Approx(12.0));
  // mu on bal is -2, so the pinned column picks up r = 0 - (-2)*(-1) = 2.
  CHECK(s.eq_duals(0) == doctest::Approx(-2.0));
  CHECK(s.reduced_costs(1) == doctest::Approx(2.0));
  CHECK(lp::dual_objective(p, s) == doctest::Approx(12.0).epsilon(1e-10));
}

TEST_CASE("scaling covariance: k * cost scales objective and duals") {
  const auto p = testsupport::random_bounded_lp(1234);
  auto scaled = p;
  scaled.cost *= 3.0;
  const auto s1 = lp::solve_lp(p);
  const auto s2 = lp::solve_lp(scaled);
  REQUIRE(s1.status == lp::LpStatus::kOptimal);
  REQUIRE(s2.status == lp::LpStatus::kOptimal);
  CHECK(s2.objective == doctest::Approx(3.0 * s1.objective).epsilon(1e-9));
  // The argmin set is unchanged: the scaled problem's optimum evaluated
  // under the original cost reproduces the original optimal value.
  CHECK(p.cost.dot(s2.x) == doctest::Approx(s1.objective).epsilon(1e-9));
  for (int i = 0; i < p.num_ineq(); ++i)
    CHECK(s2.ineq_duals(i) == doctest::Approx(3.0 * s1.ineq_duals(i)).epsilon(1e-8));
}

TEST_CASE("determinism: identical input bytes, identical solution bytes") {
  const auto p = testsupport::random_bounded_lp(99);
  const auto s1 = lp::solve_lp(p);
  const auto s2 = lp::solve_lp(p);
  REQUIRE(s1.status == s2.status);
  CHECK(std::memcmp(s1.x.data(), s2.x.data(), sizeof(double) * s1.x.size()) == 0);
  CHECK(std::memcmp(s1.ineq_duals.data(), s2.ineq_duals.data(),
                    sizeof(double) * s1.ineq_duals.size()) == 0);
  CHECK(s1.objective == s2.objective);
  CHECK(s1.iterations == s2.iterations);
}

TEST_CASE("random suite: oracle agreement and KKT invariants") {
  int optimal_count = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto p = testsupport::random_bounded_lp(seed);
    const auto s = lp::solve_lp(p);
    REQUIRE_MESSAGE(s.status == lp::LpStatus::kOptimal, "seed ", seed);
    const auto rep = lp::check_kkt(p, s);
    CHECK_MESSAGE(rep.primal_residual <= 1e-8, "seed ", seed);
    CHECK_MESSAGE(rep.dual_residual <= 1e-8, "seed ", seed);
    CHECK_MESSAGE(rep.complementarity <= 1e-8 * (1.0 + std::abs(s.objective)), "seed ", seed);
    const auto oracle = testsupport::enumerate_optimum(p);
    REQUIRE_MESSAGE(oracle.has_value(), "seed ", seed);
    CHECK_MESSAGE(s.objective ==
                      doctest::Approx(oracle->objective).epsilon(1e-8).scale(1 + std::abs(oracle->objective)),
                  "seed ", seed);
    ++optimal_count;
  }
  CHECK(optimal_count == 60);
}

TEST_CASE("lp format dump is parseable text") {
  lp::LpBuilder b;
  b.add_variable("gen:up+", 0.0, 10.0, 50.0);
  b.add_variable("free var", -kInf, kInf, 0.0);
  b.add_inequality("line[1]", {{0, 1.0}, {1, -0.5}}, 4.0);
  b.add_equality("bal", {{1, 1.0}}, 0.0);
  std::ostringstream os;
  lp::write_lp_format(b.build(), os);
  const std::string text = os.str();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.find("free") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
  const bool label_sanitized = text.find("gen:up+") == std::string::npos;
  CHECK(label_sanitized);
}

TEST_CASE("inconsistent problems are rejected") {
  lp::LpProblem p;
  p.cost = Eigen::VectorXd::Zero(2);
  p.lower = Eigen::VectorXd::Zero(2);
  p.upper = Eigen::VectorXd::Ones(2);
  p.ineq = Eigen::MatrixXd::Zero(0, 2);
  p.ineq_rhs = Eigen::VectorXd::Zero(0);
  p.eq = Eigen::MatrixXd::Zero(0, 2);
  p.eq_rhs = Eigen::VectorXd::Zero(0);
  p.var_names = {"a", "a"};
  CHECK_THROWS_AS(lp::solve_lp(p), std::invalid_argument);
  p.var_names = {"a", "b"};
  p.lower(0) = 2.0;  // above upper
  CHECK_THROWS_AS(lp::solve_lp(p), std::invalid_argument);
}

TEST_CASE("degenerate and redundant instances still match the oracle") {
  // Duplicated rows, repeated bounds, and zero-margin constraints produce
  // heavy ties; the stall detector hands over to Bland's rule.
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    auto p = testsupport::random_bounded_lp(seed);
    lp::LpBuilder b;
    for (int j = 0; j < p.num_vars(); ++j)
      b.add_variable(p.var_names[j], p.lower(j), p.upper(j), p.cost(j));
    auto copy_row = [&](int i, const std::string& name) {
      lp::LpBuilder::Terms terms;
      for (int j = 0; j < p.num_vars(); ++j)
        if (p.ineq(i, j) != 0.0) terms.push_back({j, p.ineq(i, j)});
      b.add_inequality(name, terms, p.ineq_rhs(i));
    };
    for (int i = 0; i < p.num_ineq(); ++i) {
      copy_row(i, p.ineq_names[i]);
      copy_row(i, p.ineq_names[i] + ":again");
      copy_row(i, p.ineq_names[i] + ":andagain");
    }
    for (int i = 0; i < p.num_eq(); ++i) {
      lp::LpBuilder::Terms terms;
      for (int j = 0; j < p.num_vars(); ++j)
        if (p.eq(i, j) != 0.0) terms.push_back({j, p.eq(i, j)});
      b.add_equality(p.eq_names[i], terms, p.eq_rhs(i));
      b.add_equality(p.eq_names[i] + ":again", terms, p.eq_rhs(i));
    }
    // Pin the first variable's box to a degenerate corner of itself.
    b.add_inequality("corner", {{0, 1.0}}, p.upper(0));
    const auto degenerate = b.build();
    const auto s = lp::solve_lp(degenerate);
    REQUIRE_MESSAGE(s.status == lp::LpStatus::kOptimal, "seed ", seed);
    CHECK(lp::check_kkt(degenerate, s).ok(1e-7));
    const auto oracle = testsupport::enumerate_optimum(p);  // same feasible set
    REQUIRE(oracle.has_value());
    CHECK_MESSAGE(s.objective ==
                      doctest::Approx(oracle->objective).epsilon(1e-8).scale(1 + std::abs(oracle->objective)),
                  "seed ", seed);
  }
}

TEST_CASE("iteration limit returns the best iterate as a status") {
  const auto p = testsupport::random_bounded_lp(17);
  lp::SimplexOptions opt;
  opt.max_iterations = 1;
  const auto s = lp::solve_lp(p, opt);
  CHECK(s.status == lp::LpStatus::kIterationLimit);
  CHECK(s.x.size() == p.num_vars());
}

TEST_CASE("equalities-only system with free variables") {
  lp::LpBuilder b;
  b.add_variable("x", -lp::kInf, lp::kInf, 1.0);
  b.add_variable("y", -lp::kInf, lp::kInf, -1.0);
  b.add_equality("sum", {{0, 1.0}, {1, 1.0}}, 2.0);
  b.add_equality("diff", {{0, 1.0}, {1, -1.0}}, 0.0);
  const auto s = lp::solve_lp(b.build());
  REQUIRE(s.status == lp::LpStatus::kOptimal);
  CHECK(s.x(0) == doctest::Approx(1.0));
  CHECK(s.x(1) == doctest::Approx(1.0));
  CHECK(s.objective == doctest::Approx(0.0));
}
