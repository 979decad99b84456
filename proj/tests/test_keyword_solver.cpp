#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "broadbid/errors.hpp"
#include "broadbid/generators.hpp"
#include "broadbid/keyword_solver.hpp"
#include "support/test_support.hpp"

using namespace broadbid;
using namespace broadbid::testing;

namespace {

// Best keyword-language utility by trying every bid: none, exact, or broad at
// each distinct cost, per keyword.
Wide oracle_keyword_best(const Instance& inst, bool allow_exact = true) {
  std::vector<Money> costs;
  for (const Query& q : inst.queries()) costs.push_back(q.cost);
  std::sort(costs.begin(), costs.end());
  costs.erase(std::unique(costs.begin(), costs.end()), costs.end());
  const std::vector<QueryIndex> keywords = inst.biddable();
  const std::size_t options = 1 + (allow_exact ? 1 : 0) + costs.size();
  BidVector bid(inst.size());
  Wide best = 0;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == keywords.size()) {
      best = std::max(best, interpret_bid(inst, bid).utility());
      return;
    }
    const QueryIndex s = keywords[i];
    for (std::size_t o = 0; o < options; ++o) {
      bid[s] = Bid{};
      if (o == 0) {
      } else if (allow_exact && o == 1) {
        bid[s].exact = inst.query(s).cost;
      } else {
        bid[s].broad = costs[o - (allow_exact ? 2 : 1)];
      }
      go(i + 1);
    }
    bid[s] = Bid{};
  };
  go(0);
  return best;
}

// s (w = +1) broadly matching q (w = -2), both at cost 1.
Instance keyword_with_dependent() {
  return InstanceBuilder()
      .add_query("s", units(2), units(1), clicks(1), true)
      .add_query("sq", units(0), units(1), clicks(2), false)
      .add_match("s", "sq")
      .build();
}

// Two keywords s, r at one cost level, both matching q.
Instance shared_dependent() {
  return InstanceBuilder()
      .add_query("q", units(3), units(1), clicks(1), false)
      .add_query("r", units(1), units(1), clicks(1), true)
      .add_query("s", units(1), units(1), clicks(1), true)
      .add_match("r", "q")
      .add_match("s", "q")
      .build();
}

void set_broad(const Instance& inst, KeywordFractional& frac, const std::string& id, double mass) {
  const int slot = frac.slot[static_cast<std::size_t>(inst.index_of(id))];
  frac.R[static_cast<std::size_t>(slot)] = 0.0;
  frac.W[static_cast<std::size_t>(slot)].assign(frac.levels.size(), 0.0);
  frac.Z[static_cast<std::size_t>(slot)].assign(frac.levels.size(), 0.0);
  frac.W[static_cast<std::size_t>(slot)][0] = mass;
  frac.Z[static_cast<std::size_t>(slot)][0] = mass;
}

double wide_units(Wide w) { return static_cast<double>(w) / 1e12; }

}  // namespace

TEST(KeywordLp, DecoupledWithoutDependents) {
  const Instance inst = InstanceBuilder()
                            .add_query("a", units(3), units(1), clicks(1), true)
                            .add_query("b", units(1), units(2), clicks(1), true)
                            .add_query("c", units(2), units(1), clicks(2), true)
                            .build();
  const KeywordFractional frac = solve_relaxation(inst);
  EXPECT_NEAR(frac.objective, 4.0, 1e-9);
  const OptimalBidResult exact = solve_keyword_exact(inst);
  EXPECT_EQ(exact.winning_set.members, (std::vector<QueryIndex>{0, 2}));
  EXPECT_EQ(exact.objective(), units(4).micros() * static_cast<Wide>(1'000'000));
}

TEST(KeywordLp, ExactBidAvoidsNegativeDependent) {
  const Instance inst = keyword_with_dependent();
  const KeywordFractional frac = solve_relaxation(inst);
  const int s = frac.slot[0];
  EXPECT_NEAR(frac.objective, 1.0, 1e-9);
  EXPECT_NEAR(frac.R[static_cast<std::size_t>(s)], 1.0, 1e-9);
  for (double z : frac.Z[static_cast<std::size_t>(s)]) EXPECT_NEAR(z, 0.0, 1e-9);
  EXPECT_NEAR(frac.Y[1], 0.0, 1e-9);

  const OptimalBidResult exact = solve_keyword_exact(inst);
  EXPECT_EQ(exact.objective(), oracle_keyword_best(inst));
  EXPECT_EQ(wide_units(exact.objective()), 1.0);
  ASSERT_TRUE(exact.bid[0].exact.has_value());
  EXPECT_FALSE(exact.bid[0].broad.has_value());
}

TEST(KeywordLp, TriangleRelaxationBoundsIntegerOptimum) {
  const Instance inst = generate(IndependentSetSpec{3, {{0, 1}, {1, 2}, {0, 2}}});
  const KeywordFractional frac = solve_relaxation(inst);
  EXPECT_GE(frac.objective, 1.0 - 1e-9);
  EXPECT_EQ(solve_keyword_exact(inst).objective(), oracle_keyword_best(inst));
  EXPECT_EQ(wide_units(solve_keyword_exact(inst).objective()), 1.0);
}

TEST(KeywordLp, FractionalInvariants) {
  Rng rng(211);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = random_keyword_instance(rng, static_cast<int>(rng.integer(1, 5)),
                                                  static_cast<int>(rng.integer(0, 6)));
    const KeywordFractional frac = solve_relaxation(inst);
    EXPECT_LE(max_violation(build_ilp_approx(inst), frac.vertex.values), 1e-7);
    EXPECT_NEAR(frac.objective, frac.V_frac - frac.C_frac, 1e-7);
    for (std::size_t k = 0; k < frac.keywords.size(); ++k) {
      double above = 0.0;
      for (std::size_t p = frac.levels.size(); p-- > 0;) {
        above += frac.W[k][p];
        EXPECT_NEAR(frac.Z[k][p], above, 1e-9);
        EXPECT_LE(frac.Z[k][p] + frac.R[k], 1.0 + 1e-9);
        if (p + 1 < frac.levels.size()) EXPECT_GE(frac.Z[k][p] + 1e-12, frac.Z[k][p + 1]);
      }
    }
    // Y_q sits between the largest single reach and the summed reach.
    const DependencyGraph dg = derive_dependencies(inst);
    for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
      if (inst.query(q).biddable) continue;
      const std::size_t level = frac.levels.index_of(inst.query(q).cost);
      double largest = 0.0;
      double sum = 0.0;
      for (QueryIndex s : inst.matchers(q)) {
        const double z = frac.Z[static_cast<std::size_t>(frac.slot[static_cast<std::size_t>(s)])][level];
        largest = std::max(largest, z);
        sum += z;
      }
      EXPECT_GE(frac.Y[static_cast<std::size_t>(q)], largest - 1e-9);
      EXPECT_LE(frac.Y[static_cast<std::size_t>(q)], sum + 1e-9);
    }
  }
}

TEST(Rounding, CertainExactAndEmpty) {
  const Instance inst = keyword_with_dependent();
  KeywordFractional frac = solve_relaxation(inst);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RoundedBid r = round_bid(inst, frac, 0.5, seed);
    ASSERT_TRUE(r.bid[0].exact.has_value());
    EXPECT_FALSE(r.bid[0].broad.has_value());
  }
  frac.R.assign(frac.R.size(), 0.0);
  for (auto& w : frac.W) w.assign(w.size(), 0.0);
  for (auto& z : frac.Z) z.assign(z.size(), 0.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RoundedBid r = round_bid(inst, frac, 0.0, seed);
    for (const Bid& b : r.bid.bids()) EXPECT_TRUE(b.empty());
  }
}

TEST(Rounding, HalvedBroadFrequency) {
  const Instance inst = keyword_with_dependent();
  KeywordFractional frac = solve_relaxation(inst);
  set_broad(inst, frac, "s", 1.0);
  const int n = 10'000;
  int broad = 0;
  for (int i = 0; i < n; ++i) {
    const RoundedBid r = round_bid(inst, frac, 0.5, derive_seed(7, static_cast<std::uint64_t>(i)));
    EXPECT_FALSE(r.bid[0].exact.has_value());
    if (r.bid[0].broad) {
      EXPECT_EQ(*r.bid[0].broad, units(1));
      ++broad;
    }
  }
  const double sigma = std::sqrt(0.25 / n);
  EXPECT_NEAR(static_cast<double>(broad) / n, 0.5, 3 * sigma);
}

TEST(Rounding, NeverExactAndBroadTogether) {
  Rng rng(223);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = random_keyword_instance(rng, 4, 5);
    const KeywordFractional frac = solve_relaxation(inst);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const RoundedBid r = round_bid(inst, frac, 0.5, seed);
      for (const Bid& b : r.bid.bids()) EXPECT_FALSE(b.exact && b.broad);
      validate_bid(inst, r.bid, BidLanguage::kKeyword);
    }
  }
}

TEST(Rounding, SameSeedSameBid) {
  Rng rng(227);
  const Instance inst = random_keyword_instance(rng, 5, 6);
  const KeywordFractional frac = solve_relaxation(inst);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RoundedBid a = round_bid(inst, frac, 0.5, seed);
    const RoundedBid b = round_bid(inst, frac, 0.5, seed);
    for (std::size_t q = 0; q < inst.size(); ++q) {
      EXPECT_EQ(a.bid[static_cast<QueryIndex>(q)].exact, b.bid[static_cast<QueryIndex>(q)].exact);
      EXPECT_EQ(a.bid[static_cast<QueryIndex>(q)].broad, b.bid[static_cast<QueryIndex>(q)].broad);
    }
  }
}

TEST(SelectionProbability, HandExamples) {
  const Instance inst = shared_dependent();
  KeywordFractional frac = solve_relaxation(inst);
  const QueryIndex q = inst.index_of("q");
  set_broad(inst, frac, "r", 0.0);
  set_broad(inst, frac, "s", 0.0);
  EXPECT_DOUBLE_EQ(selection_probability(inst, frac, 0.0, q), 0.0);
  set_broad(inst, frac, "s", 1.0);
  EXPECT_DOUBLE_EQ(selection_probability(inst, frac, 0.0, q), 1.0);
  set_broad(inst, frac, "r", 0.5);
  set_broad(inst, frac, "s", 0.5);
  EXPECT_DOUBLE_EQ(selection_probability(inst, frac, 0.0, q), 0.75);
}

TEST(SelectionProbability, SandwichAroundY) {
  Rng rng(229);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = random_keyword_instance(rng, 4, 6);
    const KeywordFractional frac = solve_relaxation(inst);
    for (double eps : {0.0, 0.5}) {
      for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
        if (inst.query(q).biddable || inst.matchers(q).size() != 2) continue;
        const double y = frac.Y[static_cast<std::size_t>(q)];
        const double p = selection_probability(inst, frac, eps, q);
        EXPECT_GE(p, y * (1 - eps) * (1 - (1 - eps) / 2) - 1e-9);
        EXPECT_LE(p, 2 * (1 - eps) * y + 1e-9);
      }
    }
  }
}

TEST(SelectionProbability, MatchesMonteCarlo) {
  Rng rng(233);
  const Instance inst = random_keyword_instance(rng, 4, 6);
  KeywordFractional frac = solve_relaxation(inst);
  // Spread mass so no probability is pinned at 0 or 1.
  for (std::size_t k = 0; k < frac.keywords.size(); ++k) {
    frac.R[k] = 0.2;
    double above = 0.0;
    for (std::size_t p = frac.levels.size(); p-- > 0;) {
      frac.W[k][p] = 0.6 / static_cast<double>(frac.levels.size());
      above += frac.W[k][p];
      frac.Z[k][p] = above;
    }
  }
  const int n = 100'000;
  const RoundingSummary summary = run_rounding_trials(inst, frac, 0.5, n, 99);
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    const double empirical = static_cast<double>(summary.wins[static_cast<std::size_t>(q)]) / n;
    EXPECT_NEAR(empirical, selection_probability(inst, frac, 0.5, q), 4 * std::sqrt(0.25 / n))
        << inst.query(q).id;
  }
}

TEST(UtilityBound, Examples) {
  EXPECT_DOUBLE_EQ(utility_bound(4.0, 1.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(utility_bound(8.0, 1.0, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(utility_bound(6.0, 1.0, 0.0), 1.0);
}

TEST(UtilityBound, RoundingMeetsBound) {
  Rng rng(239);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 8; ++trial) {
    const Instance inst = random_keyword_instance(rng, 5, 8);
    const KeywordFractional frac = solve_relaxation(inst);
    if (frac.C_frac > frac.V_frac / 4) continue;
    ++checked;
    const RoundingSummary summary = run_rounding_trials(inst, frac, 0.5, 10'000, 5);
    EXPECT_GE(summary.mean, utility_bound(frac, 0.5) - 3 * summary.std / std::sqrt(10'000.0));
    EXPECT_TRUE(summary.bound_satisfied);
  }
  EXPECT_GT(checked, 0);
}

TEST(UtilityBound, RejectsBadEpsilon) {
  const Instance inst = keyword_with_dependent();
  const KeywordFractional frac = solve_relaxation(inst);
  EXPECT_THROW(round_bid(inst, frac, 1.0, 0), ValidationError);
  EXPECT_THROW(round_bid(inst, frac, -0.1, 0), ValidationError);
}

TEST(KeywordExact, FiveCycle) {
  const Instance inst = generate(IndependentSetSpec{5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}}});
  const OptimalBidResult r = solve_keyword_exact(inst);
  EXPECT_EQ(wide_units(r.objective()), 2.0);
  EXPECT_EQ(r.objective(), oracle_keyword_best(inst));
}

TEST(KeywordExact, GreedyTrapKeywordsOnly) {
  const Instance inst = generate(GreedyTrapSpec{5, true});
  EXPECT_EQ(solve_keyword_exact(inst).objective(), oracle_keyword_best(inst));
}

TEST(KeywordExact, MethodsAgreeAndStayBelowRelaxation) {
  Rng rng(241);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = random_keyword_instance(rng, static_cast<int>(rng.integer(1, 5)),
                                                  static_cast<int>(rng.integer(0, 7)));
    KeywordExactOptions enumerate;
    enumerate.method = KeywordExactMethod::kEnumerate;
    KeywordExactOptions bb;
    bb.method = KeywordExactMethod::kBranchAndBound;
    const OptimalBidResult a = solve_keyword_exact(inst, enumerate);
    const OptimalBidResult b = solve_keyword_exact(inst, bb);
    EXPECT_EQ(a.objective(), b.objective());
    EXPECT_EQ(a.objective(), oracle_keyword_best(inst));
    EXPECT_LE(wide_units(a.objective()), solve_relaxation(inst).objective + 1e-6);
    EXPECT_EQ(interpret_bid(inst, b.bid).utility(), b.objective());
  }
}

TEST(KeywordExact, BroadOnly) {
  Rng rng(251);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = random_keyword_instance(rng, 4, 5);
    KeywordExactOptions options;
    options.allow_exact = false;
    const OptimalBidResult r = solve_keyword_exact(inst, options);
    EXPECT_EQ(r.objective(), oracle_keyword_best(inst, false));
    for (const Bid& b : r.bid.bids()) EXPECT_FALSE(b.exact.has_value());
  }
}

TEST(KeywordExact, NodeLimit) {
  Rng rng(257);
  const Instance inst = random_keyword_instance(rng, 8, 10);
  KeywordExactOptions options;
  options.method = KeywordExactMethod::kEnumerate;
  options.max_nodes = 10;
  EXPECT_THROW(solve_keyword_exact(inst, options), SizeLimitError);
}
