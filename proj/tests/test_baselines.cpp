#include <gtest/gtest.h>

#include "broadbid/baselines.hpp"
#include "broadbid/errors.hpp"
#include "broadbid/generators.hpp"
#include "broadbid/instance_io.hpp"
#include "broadbid/keyword_solver.hpp"
#include "broadbid/query_solver.hpp"
#include "support/test_support.hpp"

using namespace broadbid;
using namespace broadbid::testing;

namespace {

constexpr Wide kUnit2 = 1'000'000'000'000;

Instance two_positives() {
  return InstanceBuilder()
      .add_query("a", units(3), units(1), clicks(1), true)
      .add_query("b", units(2), units(1), clicks(2), true)
      .build();
}

}  // namespace

TEST(Greedy, ChainPicksAntecedentWithItsDependent) {
  const Instance inst = InstanceBuilder()
                            .add_query("a", units(2), units(1), clicks(1), true)
                            .add_query("ab", units(0.9), units(1), clicks(1), true)
                            .add_match("a", "ab")
                            .build();
  const OptimalBidResult r = max_margin_greedy(inst);
  EXPECT_EQ(r.winning_set.members, (std::vector<QueryIndex>{0, 1}));
  EXPECT_EQ(r.objective(), 900'000'000'000);
}

TEST(Greedy, IndependentPositives) {
  const Instance inst = two_positives();
  EXPECT_EQ(max_margin_greedy(inst).winning_set.members, (std::vector<QueryIndex>{0, 1}));
  for (RateRule rule : {RateRule::kProfitOverCost, RateRule::kValueOverCost}) {
    EXPECT_EQ(max_rate_greedy(inst, rule).winning_set.members, (std::vector<QueryIndex>{0, 1}));
  }
  const Instance single = InstanceBuilder().add_query("a", units(3), units(1), clicks(1), true).build();
  EXPECT_EQ(max_rate_greedy(single, RateRule::kProfitOverCost).winning_set.members,
            (std::vector<QueryIndex>{0}));
}

TEST(Greedy, TrapDefeatsEveryVariant) {
  for (int n : {4, 6, 8}) {
    const Instance trap = generate(GreedyTrapSpec{n, false});
    EXPECT_EQ(max_margin_greedy(trap).objective(), 0) << n;
    EXPECT_EQ(max_rate_greedy(trap, RateRule::kProfitOverCost).objective(), 0) << n;
    EXPECT_EQ(max_rate_greedy(trap, RateRule::kValueOverCost).objective(), 0) << n;
  }
}

TEST(Greedy, NeverBeatsOracle) {
  Rng rng(307);
  for (int trial = 0; trial < 150; ++trial) {
    const Instance inst = random_instance(rng, {1, 12, 3, 0.25, 1.0, true});
    const Wide best = oracle_best_utility(inst);
    for (const OptimalBidResult& r :
         {max_margin_greedy(inst), max_rate_greedy(inst, RateRule::kProfitOverCost),
          max_rate_greedy(inst, RateRule::kValueOverCost)}) {
      EXPECT_LE(r.objective(), best);
      EXPECT_GE(r.objective(), 0);
      EXPECT_TRUE(is_closed(derive_dependencies(inst), r.winning_set.members));
    }
  }
}

TEST(BruteForce, Examples) {
  EXPECT_EQ(brute_force_query(Instance{}).objective(), 0);
  const Instance chain = InstanceBuilder()
                             .add_query("a", units(2), units(1), clicks(1), true)
                             .add_query("ab", units(0), units(1), clicks(1.5), true)
                             .add_match("a", "ab")
                             .build();
  EXPECT_EQ(brute_force_query(chain).objective(), 0);

  const Instance trap = generate(GreedyTrapSpec{6, false});
  const OptimalBidResult r = brute_force_query(trap, trap.size());
  EXPECT_EQ(r.winning_set.members.size(), trap.size());
  EXPECT_EQ(r.objective(), 2'250'000'000'000);
  EXPECT_EQ(r.objective(), oracle_best_utility(trap));
}

TEST(BruteForce, MatchesBitmaskOracle) {
  Rng rng(311);
  for (int trial = 0; trial < 150; ++trial) {
    const Instance inst = random_instance(rng, {1, 12, 3, 0.25, 1.0, true});
    EXPECT_EQ(brute_force_query(inst).objective(), oracle_best_utility(inst));
  }
}

TEST(BruteForce, SizeLimit) {
  const Instance trap = generate(GreedyTrapSpec{8, false});
  EXPECT_THROW(brute_force_query(trap), SizeLimitError);
  EXPECT_THROW(brute_force_budgeted_integral(trap, units(1)), SizeLimitError);
}

TEST(BruteForce, BudgetedExtremes) {
  const Instance inst = two_positives();
  EXPECT_EQ(brute_force_budgeted_integral(inst, Money{}).value, 0);
  EXPECT_TRUE(brute_force_budgeted_integral(inst, Money{}).members.empty());
  const BudgetedIntegral all = brute_force_budgeted_integral(inst, units(1000));
  EXPECT_EQ(all.value, 7 * kUnit2);
  EXPECT_EQ(all.spend, 3 * kUnit2);
}

TEST(Generators, GreedyTrapShape) {
  EXPECT_EQ(generate(GreedyTrapSpec{4, false}).size(), 10u);
  const Instance trap = generate(GreedyTrapSpec{8, false});
  EXPECT_EQ(trap.size(), 36u);
  EXPECT_TRUE(trap.all_biddable());
  const Instance keywords = generate(GreedyTrapSpec{8, true});
  EXPECT_EQ(keywords.biddable().size(), 8u);
}

TEST(Generators, IndependentSetShape) {
  const Instance inst = generate(IndependentSetSpec{3, {{0, 1}, {1, 2}, {0, 2}}});
  EXPECT_EQ(inst.size(), 6u);
  EXPECT_EQ(inst.biddable().size(), 3u);
  for (QueryIndex s : inst.biddable()) EXPECT_EQ(inst.query(s).cost, units(1));
  EXPECT_EQ(generate(IndependentSetSpec{5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}}).size(), 9u);
}

TEST(Generators, IndependentSetReduction) {
  Rng rng(313);
  for (int trial = 0; trial < 25; ++trial) {
    const int nodes = static_cast<int>(rng.integer(1, 9));
    const auto edges = random_graph(rng, nodes, 0.35);
    const Instance inst = generate(IndependentSetSpec{nodes, edges});
    EXPECT_EQ(solve_keyword_exact(inst).objective(),
              static_cast<Wide>(oracle_max_independent_set(nodes, edges)) * kUnit2);
  }
}

TEST(Generators, MaxCoverageReduction) {
  Rng rng(317);
  for (int trial = 0; trial < 25; ++trial) {
    const int elements = static_cast<int>(rng.integer(1, 6));
    const int set_count = static_cast<int>(rng.integer(1, 4));
    MaxCoverageSpec spec;
    std::vector<std::int64_t> weights;
    for (int e = 0; e < elements; ++e) {
      weights.push_back(rng.integer(1, 9));
      spec.element_weights.push_back(units(static_cast<double>(weights.back())));
    }
    for (int s = 0; s < set_count; ++s) {
      std::vector<int> members;
      for (int e = 0; e < elements; ++e) {
        if (rng.bernoulli(0.4)) members.push_back(e);
      }
      spec.sets.push_back(members);
    }
    spec.k = static_cast<int>(rng.integer(1, set_count));
    const Instance inst = generate(spec);
    const KeywordBudgeted best = brute_force_keyword_budgeted(inst, *inst.budget());
    EXPECT_EQ(best.value, static_cast<Wide>(oracle_max_coverage(spec.sets, weights, spec.k)) * kUnit2);
  }
}

TEST(Generators, SimulationShapeAndDeterminism) {
  const Instance a = generate(SimulationSpec{30, 5});
  EXPECT_EQ(a.size(), 465u);
  EXPECT_EQ(a.biddable().size(), 30u);
  for (const Query& q : a.queries()) EXPECT_EQ(q.cost, units(5));
  EXPECT_EQ(instance_to_json(a), instance_to_json(generate(SimulationSpec{30, 5})));
  EXPECT_NE(instance_to_json(a), instance_to_json(generate(SimulationSpec{30, 6})));
}

TEST(Generators, RejectsBadParameters) {
  EXPECT_THROW(generate(GreedyTrapSpec{1, false}), ValidationError);
  EXPECT_THROW(generate(IndependentSetSpec{2, {{0, 2}}}), ValidationError);
  EXPECT_THROW(generate(SimulationSpec{0, 1}), ValidationError);
  MaxCoverageSpec coverage;
  coverage.sets = {{0}};
  coverage.element_weights = {units(1)};
  coverage.k = -1;
  EXPECT_THROW(generate(coverage), ValidationError);
}

TEST(Generators, ParseEdgeList) {
  const IndependentSetSpec spec = parse_edgelist("# triangle plus isolated nodes\n0 1\n1 2\n2 0\n6\n");
  EXPECT_EQ(spec.nodes, 6);
  EXPECT_EQ(spec.edges.size(), 3u);
  EXPECT_THROW(parse_edgelist("0 x\n"), ParseError);
  EXPECT_THROW(generate(IndependentSetSpec{3, {{1, 1}}}), ValidationError);
  EXPECT_THROW(parse_edgelist("-1 2\n"), ParseError);
}

TEST(Generators, ParseSetSystem) {
  const auto sets = parse_set_system("0 1 2\n\n2 3\n");
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[1], (std::vector<int>{2, 3}));
  EXPECT_THROW(parse_set_system("1 a\n"), ParseError);
}
