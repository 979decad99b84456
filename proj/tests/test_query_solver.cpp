#include <gtest/gtest.h>

#include <cmath>

#include "broadbid/baselines.hpp"
#include "broadbid/errors.hpp"
#include "broadbid/generators.hpp"
#include "broadbid/query_solver.hpp"
#include "support/test_support.hpp"

using namespace broadbid;
using namespace broadbid::testing;

namespace {

constexpr double kMicro2 = 1e12;

Instance chain(double ab_value) {
  return InstanceBuilder()
      .add_query("a", units(2), units(1), clicks(1), true)
      .add_query("ab", units(ab_value), units(1), clicks(1), true)
      .add_match("a", "ab")
      .build();
}

// Budgeted LP optimum by enumerating nested closed sets A <= B: A fully
// bought, B \ A bought at the largest fraction the remaining budget allows.
double oracle_budgeted_lp(const Instance& inst, Wide budget) {
  const auto pairs = oracle_dependencies(inst);
  const std::uint32_t full = (1u << inst.size()) - 1;
  std::vector<std::uint32_t> closed;
  for (std::uint32_t m = 0; m <= full; ++m) {
    if (mask_closed(pairs, m)) closed.push_back(m);
  }
  double best = 0.0;
  for (std::uint32_t a : closed) {
    const Wide spend_a = mask_sum(inst, a, 2);
    if (spend_a > budget) continue;
    const double value_a = static_cast<double>(mask_sum(inst, a, 1));
    best = std::max(best, value_a);
    for (std::uint32_t b : closed) {
      if ((a & b) != a || a == b) continue;
      const double extra_spend = static_cast<double>(mask_sum(inst, b & ~a, 2));
      const double extra_value = static_cast<double>(mask_sum(inst, b & ~a, 1));
      const double t = extra_spend <= 0.0 ? 1.0 : std::min(1.0, static_cast<double>(budget - spend_a) / extra_spend);
      best = std::max(best, value_a + t * extra_value);
    }
  }
  return best / kMicro2;
}

Wide total_cost(const Instance& inst) {
  Wide total = 0;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) total += inst.cost_amount(q);
  return total;
}

Instance gap_family(int k) {
  IntegralityGapSpec spec;
  spec.k = k;
  spec.n_chain = 10;
  spec.c = units(1'000'000);
  spec.c_prime = units(1'000);
  spec.M = units(1'000'000);
  return generate(spec);
}

}  // namespace

TEST(QueryMinCut, AllNegativeGivesEmptySet) {
  const Instance inst = InstanceBuilder()
                            .add_query("a", units(1), units(2), clicks(1), true)
                            .add_query("b", units(0), units(1), clicks(3), true)
                            .build();
  const OptimalBidResult r = solve_query_mincut(inst);
  EXPECT_TRUE(r.winning_set.members.empty());
  EXPECT_EQ(r.objective(), 0);
}

TEST(QueryMinCut, ChainExamples) {
  // a (+1) with ab (-0.1): worth taking both; ab at -1.5: neither.
  const OptimalBidResult take = solve_query_mincut(chain(0.9));
  EXPECT_EQ(take.winning_set.members, (std::vector<QueryIndex>{0, 1}));
  EXPECT_EQ(take.objective(), 900'000'000'000);
  const Instance heavy = InstanceBuilder()
                             .add_query("a", units(2), units(1), clicks(1), true)
                             .add_query("ab", units(0), units(1), clicks(1.5), true)
                             .add_match("a", "ab")
                             .build();
  const OptimalBidResult none = solve_query_mincut(heavy);
  EXPECT_TRUE(none.winning_set.members.empty());
  EXPECT_EQ(none.objective(), 0);
}

TEST(QueryMinCut, GreedyTrapTakesEverything) {
  const Instance trap = generate(GreedyTrapSpec{8, false});
  const OptimalBidResult r = solve_query_mincut(trap);
  EXPECT_EQ(r.winning_set.members.size(), 36u);
  EXPECT_EQ(r.objective(), 2'750'000'000'000);
  EXPECT_EQ(solve_query_lp(trap).objective(), r.objective());
}

TEST(QueryMinCut, MatchesOracleAndBidRealizesSet) {
  Rng rng(101);
  for (int trial = 0; trial < 250; ++trial) {
    const Instance inst = random_instance(rng, {1, 12, 3, 0.25, 1.0, true});
    const OptimalBidResult r = solve_query_mincut(inst);
    EXPECT_EQ(r.objective(), oracle_best_utility(inst));
    EXPECT_TRUE(is_closed(derive_dependencies(inst), r.winning_set.members));
    validate_bid(inst, r.bid, BidLanguage::kQuery);
    // Members pulled in only by a zero-bid phrase can drop out, never hurt.
    EXPECT_GE(interpret_bid(inst, r.bid).utility(), r.objective());
  }
}

TEST(QueryMinCut, RequiresBiddableQueries) {
  const Instance inst = InstanceBuilder()
                            .add_query("a", units(2), units(1), clicks(1), false)
                            .build();
  EXPECT_THROW(solve_query_mincut(inst), ValidationError);
}

TEST(QueryLp, NoPairsPicksPositives) {
  const Instance inst = InstanceBuilder()
                            .add_query("a", units(2), units(1), clicks(1), true)
                            .add_query("b", units(1), units(2), clicks(1), true)
                            .add_query("c", units(3), units(1), clicks(2), true)
                            .build();
  EXPECT_EQ(solve_query_lp(inst).winning_set.members, (std::vector<QueryIndex>{0, 2}));
}

TEST(QueryLp, AgreesWithMinCut) {
  Rng rng(103);
  for (int trial = 0; trial < 150; ++trial) {
    const Instance inst = random_instance(rng, {1, 14, 3, 0.2, 1.0, true});
    EXPECT_EQ(solve_query_lp(inst).objective(), solve_query_mincut(inst).objective());
  }
}

TEST(QueryLp, RowsFollowDependencies) {
  const Instance inst = chain(0.9);
  const LinearProgram lp = build_query_lp(inst, derive_dependencies(inst));
  ASSERT_EQ(lp.variable_count(), 2);
  ASSERT_EQ(lp.rows.size(), 1u);
  EXPECT_EQ(lp.rows[0].relation, Relation::kGreaterEqual);
  EXPECT_DOUBLE_EQ(lp.objective[0], 1.0);
}

TEST(Budgeted, SlackBudgetIsIntegral) {
  Rng rng(107);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = random_instance(rng, {1, 10, 3, 0.2, 1.0, true});
    const Money budget = Money::from_micros(static_cast<std::int64_t>(total_cost(inst) / 1'000'000) + 1);
    const BudgetedSolution sol = solve_budgeted_lp(inst, budget);
    EXPECT_TRUE(sol.fractional.empty());
    EXPECT_FALSE(sol.shared_fraction.has_value());
  }
}

TEST(Budgeted, ZeroBudget) {
  const Instance inst = chain(0.9);
  const BudgetedSolution sol = solve_budgeted_lp(inst, Money{});
  for (double x : sol.x) EXPECT_NEAR(x, 0.0, 1e-9);
  EXPECT_NEAR(sol.lp_value, 0.0, 1e-9);
  EXPECT_NEAR(solve_budgeted_lagrangian(inst, Money{}).value, 0.0, 1e-9);
}

TEST(Budgeted, MatchesNestedClosedSetOracle) {
  Rng rng(109);
  for (int trial = 0; trial < 120; ++trial) {
    const Instance inst = random_instance(rng, {1, 7, 3, 0.3, 1.0, true});
    const Wide cost = total_cost(inst);
    const Money budget = Money::from_micros(static_cast<std::int64_t>(cost / 1'000'000) * rng.integer(0, 100) / 100);
    const BudgetedSolution sol = solve_budgeted_lp(inst, budget);
    const double oracle = oracle_budgeted_lp(inst, static_cast<Wide>(budget.micros()) * 1'000'000);
    EXPECT_NEAR(sol.lp_value, oracle, 1e-6 * std::max(1.0, oracle));
    EXPECT_LE(sol.fractional.size() > 0 ? 1 : 0, 1);
    EXPECT_LE(sol.spend, budget.to_double() + 1e-6 * std::max(1.0, budget.to_double()));
    const DependencyGraph dg = derive_dependencies(inst);
    for (const auto& [p, q] : dg.pairs) {
      EXPECT_GE(sol.x[static_cast<std::size_t>(q)], sol.x[static_cast<std::size_t>(p)] - 1e-9);
    }
    // Integral optimum never beats the relaxation.
    const BudgetedIntegral integral = brute_force_budgeted_integral(inst, budget);
    EXPECT_EQ(integral.value, oracle_best_budgeted(inst, static_cast<Wide>(budget.micros()) * 1'000'000));
    EXPECT_LE(static_cast<double>(integral.value) / kMicro2, sol.lp_value + 1e-6);
  }
}

TEST(Budgeted, ValueIsMonotoneInBudget) {
  Rng rng(113);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = random_instance(rng, {2, 10, 3, 0.25, 1.0, true});
    double previous = -1.0;
    for (int b = 0; b <= 12; ++b) {
      const double value = solve_budgeted_lp(inst, units(b * 2)).lp_value;
      EXPECT_GE(value, previous - 1e-7);
      previous = value;
    }
  }
}

TEST(Budgeted, GapFamilySharesOneFraction) {
  // Chains cost less than r_i, so nothing forces them in; the single
  // fractional cluster is the l/r block and spends the whole budget.
  const int k = 3;
  const Instance inst = gap_family(k);
  const Money budget = *inst.budget();
  const BudgetedSolution sol = solve_budgeted_lp(inst, budget);
  ASSERT_TRUE(sol.shared_fraction.has_value());
  const double expected_x = budget.to_double() / ((k + 1) * (1'000'000.0 + 1'000.0));
  EXPECT_NEAR(*sol.shared_fraction, expected_x, 1e-9);
  EXPECT_NEAR(sol.lp_value, expected_x * (k + 1) * (1'000'000.0 + 1.0), 1e-3);
  EXPECT_TRUE(sol.integral_ones.empty());

  const LagrangianEstimate lag = solve_budgeted_lagrangian(inst, budget);
  EXPECT_NEAR(lag.value, sol.lp_value, 1e-5 * sol.lp_value);

  const CampaignPlan plan = plan_two_campaigns(inst, sol, budget);
  EXPECT_TRUE(plan.integral.queries.empty());
  EXPECT_EQ(plan.integral.budget, 0);
  EXPECT_NEAR(plan.predicted_value, sol.lp_value, 1e-6 * sol.lp_value);
}

TEST(Budgeted, SmallGapSurrogateIntegralOptimum) {
  IntegralityGapSpec spec;
  spec.strict = false;  // c = 100, c' = 10, n = 3 do not satisfy c > 10c' > 100n
  const Instance inst = generate(spec);
  const Wide budget = static_cast<Wide>(inst.budget()->micros()) * 1'000'000;
  const BudgetedIntegral integral = brute_force_budgeted_integral(inst, *inst.budget(), inst.size());
  EXPECT_EQ(integral.value, oracle_best_budgeted(inst, budget));
  EXPECT_EQ(integral.value, static_cast<Wide>(53) * 1'000'000'000'000);
  EXPECT_THROW(generate(IntegralityGapSpec{}), ValidationError);
}

TEST(Lagrangian, SlackBudgetReproducesValueOptimum) {
  const Instance inst = chain(0.9);
  const LagrangianEstimate lag = solve_budgeted_lagrangian(inst, units(100));
  EXPECT_DOUBLE_EQ(lag.multiplier, 0.0);
  EXPECT_NEAR(lag.value, 2.9, 1e-9);
}

TEST(Lagrangian, MatchesLpOnRandomInstances) {
  Rng rng(127);
  for (int trial = 0; trial < 80; ++trial) {
    const Instance inst = random_instance(rng, {1, 12, 3, 0.2, 1.0, true});
    const Money budget = units(static_cast<double>(rng.integer(0, 20)));
    const double lp = solve_budgeted_lp(inst, budget).lp_value;
    const double lag = solve_budgeted_lagrangian(inst, budget).value;
    EXPECT_NEAR(lag, lp, 1e-5 * std::max(1.0, lp));
  }
}

TEST(Campaigns, IdentityOnRandomInstances) {
  Rng rng(131);
  for (int trial = 0; trial < 80; ++trial) {
    const Instance inst = random_instance(rng, {1, 12, 3, 0.2, 1.0, true});
    const Money budget = units(static_cast<double>(rng.integer(0, 20)));
    const BudgetedSolution sol = solve_budgeted_lp(inst, budget);
    const CampaignPlan plan = plan_two_campaigns(inst, sol, budget);
    for (QueryIndex q : plan.integral.queries) {
      EXPECT_EQ(std::count(plan.throttled.queries.begin(), plan.throttled.queries.end(), q), 0);
    }
    EXPECT_GE(plan.throttled.budget, 0);
    const double simulated = simulate_campaign(inst, plan.integral) + simulate_campaign(inst, plan.throttled);
    EXPECT_NEAR(simulated, sol.lp_value, 1e-6 * std::max(1.0, sol.lp_value));
    if (!sol.shared_fraction) {
      EXPECT_TRUE(plan.throttled.queries.empty());
    }
  }
}

TEST(Campaigns, ThrottlingIsLinear) {
  const Instance inst = chain(0.9);
  Campaign campaign{{0, 1}, 0};
  const Wide full_spend = inst.cost_amount(0) + inst.cost_amount(1);
  EXPECT_DOUBLE_EQ(simulate_campaign(inst, campaign), 0.0);
  campaign.budget = full_spend;
  EXPECT_DOUBLE_EQ(simulate_campaign(inst, campaign), 2.9);
  campaign.budget = full_spend * 10;
  EXPECT_DOUBLE_EQ(simulate_campaign(inst, campaign), 2.9);
  campaign.budget = full_spend / 2;
  EXPECT_DOUBLE_EQ(simulate_campaign(inst, campaign), 1.45);
}
