#include <flexgame/allocation.hpp>
#include <flexgame/fixtures.hpp>

#include <doctest.h>

#include <cmath>

#include "support/game_oracle.hpp"

using namespace flexgame;
using alloc::Allocation;
using alloc::Axiom;
using alloc::AxiomVerdict;
using game::GameTable;
using testsupport::make_table;
using testsupport::table2;

TEST_CASE("hand-derived values on the (4, 6, 8) table") {
  const GameTable g = table2(4.0, 6.0, 8.0);
  const auto sv = alloc::shapley(g);
  CHECK(sv.costs[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sv.costs[1] == doctest::Approx(5.0).epsilon(1e-12));
  const auto b = alloc::banzhaf(g);
  CHECK(b.costs[0] == doctest::Approx(3.0));
  CHECK(b.costs[1] == doctest::Approx(5.0));
  const auto bs = alloc::banzhaf_normalized(g);
  CHECK(bs.costs[0] == doctest::Approx(3.0));
  CHECK(bs.costs[1] == doctest::Approx(5.0));

  const auto data = alloc::cost_gap_data(g);
  CHECK(data.marginal[0] == doctest::Approx(2.0));
  CHECK(data.marginal[1] == doctest::Approx(4.0));
  CHECK(data.gap[1] == doctest::Approx(2.0));
  CHECK(data.gap[2] == doctest::Approx(2.0));
  CHECK(data.gap[3] == doctest::Approx(2.0));
  CHECK(data.weights[0] == doctest::Approx(2.0));
  CHECK(data.weights[1] == doctest::Approx(2.0));
  const auto cga = alloc::cost_gap(g);
  REQUIRE(cga.applicable);
  CHECK(cga.costs[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(cga.costs[1] == doctest::Approx(5.0).epsilon(1e-12));

  const auto epm = alloc::equal_profit(g);
  CHECK(epm.costs[0] == doctest::Approx(3.2).epsilon(1e-9));
  CHECK(epm.costs[1] == doctest::Approx(4.8).epsilon(1e-9));
  // Equal relative savings of 20 percent.
  CHECK((4.0 - epm.costs[0]) / 4.0 == doctest::Approx(0.2).epsilon(1e-9));
  CHECK((6.0 - epm.costs[1]) / 6.0 == doctest::Approx(0.2).epsilon(1e-9));

  const auto pca = alloc::proportional(g);
  CHECK(pca.costs[0] == doctest::Approx(3.2).epsilon(1e-12));
  CHECK(pca.costs[1] == doctest::Approx(4.8).epsilon(1e-12));
}

TEST_CASE("additive games are fixed points of every mechanism") {
  const GameTable g = make_table({"A", "B", "C"}, {0, 3, 4, 7, 5, 8, 9, 12});
  for (const Allocation& a : {alloc::shapley(g), alloc::banzhaf(g), alloc::banzhaf_normalized(g),
                              alloc::cost_gap(g), alloc::equal_profit(g), alloc::proportional(g)}) {
    REQUIRE(a.applicable);
    CHECK(a.costs[0] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(a.costs[1] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(a.costs[2] == doctest::Approx(5.0).epsilon(1e-9));
  }
}

TEST_CASE("normalized Banzhaf refuses the all-zero game") {
  const GameTable g = table2(0.0, 0.0, 0.0);
  CHECK_THROWS_AS(alloc::banzhaf_normalized(g), alloc::AllocationError);
}

TEST_CASE("cost gap branch and applicability") {
  SUBCASE("zero non-separable cost takes the marginal branch") {
    // g(N) = 0 while g({1}) = 1 > 0.
    const GameTable g = make_table({"A", "B", "C"}, {0, 4, 4, 6, 4, 6, 6, 9});
    const auto data = alloc::cost_gap_data(g);
    CHECK(data.gap[7] == doctest::Approx(0.0));
    CHECK(data.gap[1] == doctest::Approx(1.0));
    const auto a = alloc::cost_gap(g);
    REQUIRE(a.applicable);
    CHECK(a.costs[0] == doctest::Approx(3.0));
    CHECK(a.costs[1] == doctest::Approx(3.0));
    CHECK(a.costs[2] == doctest::Approx(3.0));
  }
  SUBCASE("negative gap reports not-applicable with the condition named") {
    const auto a = alloc::cost_gap(table2(4.0, 6.0, 12.0));
    CHECK_FALSE(a.applicable);
    CHECK(a.na_reason.find("negative") != std::string::npos);
  }
}

TEST_CASE("lagrangian split of the grand-coalition duals") {
  const auto s = fixtures::two_bus_with_feeder();
  const auto g = game::build_game(s, market::PricingScheme::kPayAsBid);
  const auto model = market::build_market(s, market::Coalition::grand(1));
  const auto outcome = market::clear(model);
  const auto a = alloc::lagrangian(s, model, outcome);
  REQUIRE(a.costs.size() == 2);
  CHECK(a.total() == doctest::Approx(g.grand_value()).epsilon(1e-10));
  CHECK(game::in_core(g, a.costs).in_core);

  SUBCASE("needs an optimal outcome") {
    market::MarketOutcome bad;
    bad.status = lp::LpStatus::kInfeasible;
    CHECK_THROWS_AS(alloc::lagrangian(s, model, bad), alloc::AllocationError);
  }
}

TEST_CASE("lagrangian on a single-member grand coalition") {
  const auto s = fixtures::two_bus_congestion();
  const auto model = market::build_market(s, market::Coalition::tso_only());
  const auto outcome = market::clear(model);
  const auto a = alloc::lagrangian(s, model, outcome);
  REQUIRE(a.costs.size() == 1);
  CHECK(a.costs[0] == doctest::Approx(200.0).epsilon(1e-10));
}

TEST_CASE("lagrangian of a zero-need market is the zero vector") {
  auto s = fixtures::two_bus_congestion();
  s.transmission.lines[0].flow_limit = 40.0;
  s.base.tso_injection["B1"] = 15.0;
  const auto model = market::build_market(s, market::Coalition::tso_only());
  const auto outcome = market::clear(model);
  const auto a = alloc::lagrangian(s, model, outcome);
  CHECK(a.costs[0] == doctest::Approx(0.0));
}

TEST_CASE("equal profit method") {
  SUBCASE("symmetric players split evenly") {
    const auto a = alloc::equal_profit(table2(6.0, 6.0, 10.0));
    CHECK(a.costs[0] == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(a.costs[1] == doctest::Approx(5.0).epsilon(1e-9));
  }
  SUBCASE("zero stand-alone SO is pinned to zero with a note") {
    const auto a = alloc::equal_profit(table2(4.0, 0.0, 3.0));
    CHECK(a.costs[1] == doctest::Approx(0.0));
    CHECK(a.costs[0] == doctest::Approx(3.0).epsilon(1e-9));
    REQUIRE_FALSE(a.notes.empty());
    CHECK(a.notes.front().find("zero stand-alone") != std::string::npos);
  }
  SUBCASE("empty core makes the LP infeasible") {
    CHECK_THROWS_AS(alloc::equal_profit(table2(10.0, 10.0, 25.0)), alloc::AllocationError);
  }
}

TEST_CASE("proportional cost allocation") {
  const GameTable g = table2(4.0, 6.0, 8.0);
  SUBCASE("activated-volume weights") {
    const auto a = alloc::proportional(g, alloc::ProportionalMode::kActivatedVolume, {1.0, 3.0});
    CHECK(a.costs[0] == doctest::Approx(2.0));
    CHECK(a.costs[1] == doctest::Approx(6.0));
  }
  SUBCASE("equal volumes split evenly") {
    const auto a = alloc::proportional(g, alloc::ProportionalMode::kActivatedVolume, {2.0, 2.0});
    CHECK(a.costs[0] == doctest::Approx(4.0));
    CHECK(a.costs[1] == doctest::Approx(4.0));
  }
  SUBCASE("zero denominators are rejected") {
    CHECK_THROWS_AS(alloc::proportional(table2(0.0, 0.0, 0.0)), alloc::AllocationError);
    CHECK_THROWS_AS(alloc::proportional(g, alloc::ProportionalMode::kActivatedVolume, {0.0, 0.0}),
                    alloc::AllocationError);
  }
  SUBCASE("stand-alone weights keep submodular two-player games in the core") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto g2 = testsupport::random_table(seed, 2);
      g2.values[3] = std::min(g2.values[3], g2.values[1] + g2.values[2]);  // subadditive
      if (g2.values[1] + g2.values[2] < 1e-6) continue;
      const auto a = alloc::proportional(g2);
      CHECK(game::in_core(g2, a.costs).in_core);
    }
  }
}

TEST_CASE("oracle equivalence: Shapley and Banzhaf on random tables") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int players = 2 + static_cast<int>(seed % 4);  // 2..5
    const GameTable g = testsupport::random_table(seed * 977 + 3, players);
    const auto sv = alloc::shapley(g);
    const auto sv_oracle = testsupport::shapley_by_permutations(g);
    const auto b = alloc::banzhaf_raw(g);
    const auto b_oracle = testsupport::banzhaf_by_masks(g);
    for (int i = 0; i < players; ++i) {
      CHECK(std::abs(sv.costs[i] - sv_oracle[i]) <= 1e-10);
      CHECK(std::abs(b[i] - b_oracle[i]) <= 1e-10);
    }
    // Shapley is efficient by construction.
    CHECK(sv.total() == doctest::Approx(g.grand_value()).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("cost scaling covariance of the table mechanisms") {
  const GameTable g = testsupport::random_table(5, 4);
  GameTable scaled = g;
  for (double& v : scaled.values) v *= 3.0;
  auto approx_scaled = [](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(3.0 * a[i]).epsilon(1e-9));
  };
  approx_scaled(alloc::shapley(g).costs, alloc::shapley(scaled).costs);
  approx_scaled(alloc::banzhaf_raw(g), alloc::banzhaf_raw(scaled));
  approx_scaled(alloc::banzhaf_normalized(g).costs, alloc::banzhaf_normalized(scaled).costs);
  approx_scaled(alloc::proportional(g).costs, alloc::proportional(scaled).costs);
  const auto cga = alloc::cost_gap(g);
  const auto cga_scaled = alloc::cost_gap(scaled);
  if (cga.applicable && cga_scaled.applicable) approx_scaled(cga.costs, cga_scaled.costs);
}

TEST_CASE("anonymity: relabeling permutes the outputs") {
  const GameTable g = testsupport::random_table(42, 3);
  // Swap players 0 and 2.
  GameTable swapped = g;
  swapped.players = {g.players[2], g.players[1], g.players[0]};
  for (std::uint32_t m = 0; m < 8; ++m) {
    std::uint32_t sm = (m & 2u) | ((m & 1u) << 2) | ((m & 4u) >> 2);
    swapped.values[sm] = g.values[m];
  }
  auto check_swap = [&](const std::vector<double>& a, const std::vector<double>& b) {
    CHECK(b[0] == doctest::Approx(a[2]).epsilon(1e-10));
    CHECK(b[1] == doctest::Approx(a[1]).epsilon(1e-10));
    CHECK(b[2] == doctest::Approx(a[0]).epsilon(1e-10));
  };
  check_swap(alloc::shapley(g).costs, alloc::shapley(swapped).costs);
  check_swap(alloc::banzhaf_raw(g), alloc::banzhaf_raw(swapped));
  check_swap(alloc::banzhaf_normalized(g).costs, alloc::banzhaf_normalized(swapped).costs);
  const auto cga = alloc::cost_gap(g);
  const auto cga_swapped = alloc::cost_gap(swapped);
  if (cga.applicable) {
    REQUIRE(cga_swapped.applicable);
    check_swap(cga.costs, cga_swapped.costs);
  }
}

TEST_CASE("additivity over game sums") {
  const GameTable g1 = testsupport::random_table(7, 4);
  const GameTable g2 = testsupport::random_table(8, 4);
  GameTable sum = g1;
  for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += g2.values[i];
  const auto sv1 = alloc::shapley(g1).costs, sv2 = alloc::shapley(g2).costs,
             svs = alloc::shapley(sum).costs;
  const auto b1 = alloc::banzhaf_raw(g1), b2 = alloc::banzhaf_raw(g2),
             bs = alloc::banzhaf_raw(sum);
  for (int i = 0; i < 4; ++i) {
    CHECK(svs[i] == doctest::Approx(sv1[i] + sv2[i]).epsilon(1e-9));
    CHECK(bs[i] == doctest::Approx(b1[i] + b2[i]).epsilon(1e-9));
  }
  // Proportional with fixed exogenous weights is linear in the game.
  const std::vector<double> volumes{1.0, 2.0, 3.0, 4.0};
  const auto p1 = alloc::proportional(g1, alloc::ProportionalMode::kActivatedVolume, volumes).costs;
  const auto p2 = alloc::proportional(g2, alloc::ProportionalMode::kActivatedVolume, volumes).costs;
  const auto ps = alloc::proportional(sum, alloc::ProportionalMode::kActivatedVolume, volumes).costs;
  for (int i = 0; i < 4; ++i) CHECK(ps[i] == doctest::Approx(p1[i] + p2[i]).epsilon(1e-9));
}

TEST_CASE("audit: detection and verdicts") {
  // Player C is a dummy; A and B are equivalent.
  GameTable g = make_table({"A", "B", "C"}, {0, 5, 5, 12, 0, 5, 5, 12});
  CHECK(alloc::detect_dummies(g) == std::vector<int>{2});
  CHECK(alloc::detect_equivalent_pairs(g) == std::vector<std::pair<int, int>>{{0, 1}});

  auto sv = alloc::shapley(g);
  alloc::audit(g, sv);
  CHECK(sv.audit.at(Axiom::kEfficiency) == AxiomVerdict::kPass);
  CHECK(sv.audit.at(Axiom::kDummy) == AxiomVerdict::kPass);
  CHECK(sv.audit.at(Axiom::kSymmetry) == AxiomVerdict::kPass);
  CHECK(sv.audit.at(Axiom::kAdditivity) == AxiomVerdict::kNotApplicable);
  CHECK(sv.audit.at(Axiom::kAnonymity) == AxiomVerdict::kNotApplicable);

  SUBCASE("raw Banzhaf fails efficiency on a three-player table") {
    // Majority-style cost table: B sums to 1.5 against v(N) = 1.
    GameTable maj = make_table({"A", "B", "C"}, {0, 0, 0, 1, 0, 1, 1, 1});
    auto b = alloc::banzhaf(maj);
    CHECK(b.total() == doctest::Approx(1.5));
    alloc::audit(maj, b);
    CHECK(b.audit.at(Axiom::kEfficiency) == AxiomVerdict::kFail);
  }
  SUBCASE("volume-weighted proportional charges a dummy") {
    auto pca = alloc::proportional(g, alloc::ProportionalMode::kActivatedVolume, {1.0, 1.0, 1.0});
    alloc::audit(g, pca);
    CHECK(pca.audit.at(Axiom::kDummy) == AxiomVerdict::kFail);
    CHECK(pca.audit.at(Axiom::kEfficiency) == AxiomVerdict::kPass);
  }
  SUBCASE("stability verdict follows in_core") {
    auto bad = alloc::shapley(g);
    bad.costs = {12.0, 0.0, 0.0};
    alloc::audit(g, bad);
    CHECK(bad.audit.at(Axiom::kStability) == AxiomVerdict::kFail);
  }
}

TEST_CASE("CGA is stable on small concave games") {
  int tested = 0;
  for (std::uint64_t seed = 0; tested < 25 && seed < 400; ++seed) {
    const int players = 2 + static_cast<int>(seed % 2);  // 2..3
    GameTable g = testsupport::random_table(seed * 31 + 1, players);
    if (!game::check_submodular(g).ok()) continue;
    const auto a = alloc::cost_gap(g);
    if (!a.applicable) continue;
    CHECK(game::in_core(g, a.costs).in_core);
    ++tested;
  }
  CHECK(tested >= 10);
}

TEST_CASE("allocation reports serialize") {
  const GameTable g = table2(4.0, 6.0, 8.0);
  auto sv = alloc::shapley(g);
  alloc::audit(g, sv);
  auto cga_na = alloc::cost_gap(table2(4.0, 6.0, 12.0));
  const auto json = alloc::allocations_to_json({sv, cga_na});
  CHECK(json.find("\"mechanism\": \"sv\"") != std::string::npos);
  CHECK(json.find("\"applicable\": false") != std::string::npos);
  const auto csv = alloc::allocations_to_csv({sv, cga_na});
  CHECK(csv.rfind("mechanism,so_id,cost_eur,axioms_passed\n", 0) == 0);
  CHECK(csv.find("sv,P1,3,") != std::string::npos);
  CHECK(csv.find("cga,-,not_applicable") != std::string::npos);
}

TEST_CASE("mechanism tags parse") {
  CHECK(alloc::parse_mechanism("sv") == alloc::Mechanism::kShapley);
  CHECK(alloc::parse_mechanism("bsharp") == alloc::Mechanism::kBanzhafNormalized);
  CHECK(alloc::parse_mechanism("pca") == alloc::Mechanism::kProportional);
  CHECK_THROWS_AS(alloc::parse_mechanism("nucleolus"), alloc::AllocationError);
}
