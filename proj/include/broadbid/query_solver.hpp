#pragma once

#include <optional>
#include <string>
#include <vector>

#include "broadbid/instance.hpp"
#include "broadbid/simplex.hpp"

namespace broadbid {

enum class SolveMethod {
  kMinCut,
  kLp,
  kGreedyMargin,
  kGreedyRate,
  kOracle,
  kKeywordExact,
};

const char* to_string(SolveMethod method);

struct OptimalBidResult {
  WinningSet winning_set;
  BidVector bid;
  SolveMethod method = SolveMethod::kMinCut;

  Wide objective() const { return winning_set.utility(); }
};

// Optimal query-language winning set by minimum cut. Requires every query to
// be biddable.
OptimalBidResult solve_query_mincut(const Instance& inst);

// Same optimum from the LP relaxation of the closure program, whose
// constraint matrix is totally unimodular. Throws SolverError if the vertex
// is not integral within 1e-7.
OptimalBidResult solve_query_lp(const Instance& inst);

// Exposed for tests: the relaxation built by solve_query_lp, one variable per
// query in index order.
LinearProgram build_query_lp(const Instance& inst, const DependencyGraph& dg);

struct BudgetedSolution {
  std::vector<double> x;                 // per query, in [0, 1]
  std::vector<QueryIndex> integral_ones;  // S1
  std::vector<QueryIndex> integral_zeros; // S0
  std::vector<QueryIndex> fractional;     // Q \ (S0 u S1)
  std::optional<double> shared_fraction;
  double lp_value = 0.0;  // sum x v n, currency units
  double spend = 0.0;     // sum x c n, currency units
};

inline constexpr double kClusterTolerance = 1e-6;

// Optimal vertex of the budgeted LP (maximize value subject to the
// dependency rows and total spend <= budget), clustered into {0, 1, X}.
// Throws StructureError if more than one fractional value survives.
BudgetedSolution solve_budgeted_lp(const Instance& inst, Money budget);

LinearProgram build_budgeted_lp(const Instance& inst, const DependencyGraph& dg, Money budget);

struct LagrangianEstimate {
  double value = 0.0;       // concave envelope of (spend, value) at the budget
  double multiplier = 0.0;  // final bracketing lambda
  int cuts = 0;             // min-cut solves performed
};

// Independent estimate of the budgeted LP optimum: bisection on a spend
// multiplier, each step a min-cut on weights (v - lambda c) n.
LagrangianEstimate solve_budgeted_lagrangian(const Instance& inst, Money budget);

struct Campaign {
  std::vector<QueryIndex> queries;
  Wide budget = 0;  // micro2 units
};

struct CampaignPlan {
  Campaign integral;   // S1 with B1 = sum_{S1} c n
  Campaign throttled;  // Q \ (S0 u S1) with B - B1
  double predicted_value = 0.0;
};

// Throws SolverError if B1 exceeds the budget or the predicted value departs
// from the LP value by more than 1e-6 relative.
CampaignPlan plan_two_campaigns(const Instance& inst, const BudgetedSolution& solution,
                                Money budget);

// Uniform-rate throttling: full value when the campaign's spend fits the
// budget, otherwise value scaled by budget / spend.
double simulate_campaign(const Instance& inst, const Campaign& campaign);

}  // namespace broadbid
