#include "broadbid/query_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "broadbid/errors.hpp"
#include "broadbid/maxflow.hpp"

namespace broadbid {

const char* to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::kMinCut: return "mincut";
    case SolveMethod::kLp: return "lp";
    case SolveMethod::kGreedyMargin: return "greedy-margin";
    case SolveMethod::kGreedyRate: return "greedy-rate";
    case SolveMethod::kOracle: return "oracle";
    case SolveMethod::kKeywordExact: return "keyword-exact";
  }
  return "unknown";
}

namespace {

void require_query_language(const Instance& inst) {
  if (!inst.all_biddable()) {
    throw ValidationError("query-language solvers require every query to be biddable");
  }
}

std::vector<QueryIndex> sink_members(const CutResult& cut, std::size_t query_count) {
  std::vector<QueryIndex> members;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(query_count); ++q) {
    if (!cut.on_source_side(FlowNetwork::query_node(q))) members.push_back(q);
  }
  return members;
}

void add_dependency_rows(LinearProgram& lp, const DependencyGraph& dg) {
  for (const auto& [p, q] : dg.pairs) {
    if (p == q) continue;
    lp.add_row({{q, 1.0}, {p, -1.0}}, Relation::kGreaterEqual, 0.0);
  }
}

}  // namespace

OptimalBidResult solve_query_mincut(const Instance& inst) {
  require_query_language(inst);
  const DependencyGraph dg = derive_dependencies(inst);
  const FlowNetwork net = build_flow_graph(inst, dg);
  const CutResult cut = max_flow(net);

  OptimalBidResult result;
  result.method = SolveMethod::kMinCut;
  result.winning_set = make_winning_set(inst, sink_members(cut, inst.size()));
  Wide positive_total = 0;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    if (inst.weight(q) > 0) positive_total += inst.weight(q);
  }
  if (result.winning_set.utility() != positive_total - cut.flow_value) {
    throw std::logic_error("min-cut winning set violates u(T) = sum_{Q+} w - cut");
  }
  result.bid = bid_from_winning_set(inst, dg, result.winning_set.members, BidLanguage::kQuery);
  return result;
}

LinearProgram build_query_lp(const Instance& inst, const DependencyGraph& dg) {
  LinearProgram lp;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    lp.add_variable(micro2_to_double(inst.weight(q)), 0.0, 1.0, "X_" + inst.query(q).id);
  }
  add_dependency_rows(lp, dg);
  return lp;
}

OptimalBidResult solve_query_lp(const Instance& inst) {
  require_query_language(inst);
  const DependencyGraph dg = derive_dependencies(inst);
  const LinearProgram lp = build_query_lp(inst, dg);
  const VertexSolution vertex = solve(lp);
  if (vertex.status != LpStatus::kOptimal) {
    throw SolverError(std::string("query LP ended ") + to_string(vertex.status));
  }
  std::vector<QueryIndex> members;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    const double x = vertex.values[static_cast<std::size_t>(q)];
    if (std::abs(x - std::round(x)) > 1e-7) {
      throw SolverError("query LP vertex is not integral at '" + inst.query(q).id + "'");
    }
    if (x >= 0.5) members.push_back(q);
  }
  OptimalBidResult result;
  result.method = SolveMethod::kLp;
  result.winning_set = make_winning_set(inst, std::move(members));
  result.bid = bid_from_winning_set(inst, dg, result.winning_set.members, BidLanguage::kQuery);
  return result;
}

LinearProgram build_budgeted_lp(const Instance& inst, const DependencyGraph& dg, Money budget) {
  LinearProgram lp;
  std::vector<std::pair<int, double>> spend;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    lp.add_variable(micro2_to_double(inst.value_amount(q)), 0.0, 1.0, "X_" + inst.query(q).id);
    const double c = micro2_to_double(inst.cost_amount(q));
    if (c != 0.0) spend.emplace_back(q, c);
  }
  add_dependency_rows(lp, dg);
  lp.add_row(std::move(spend), Relation::kLessEqual, budget.to_double());
  return lp;
}

BudgetedSolution solve_budgeted_lp(const Instance& inst, Money budget) {
  if (budget.micros() < 0) throw ValidationError("negative budget");
  const DependencyGraph dg = derive_dependencies(inst);
  const LinearProgram lp = build_budgeted_lp(inst, dg, budget);
  const VertexSolution vertex = solve(lp);
  if (vertex.status != LpStatus::kOptimal) {
    throw SolverError(std::string("budgeted LP ended ") + to_string(vertex.status));
  }

  BudgetedSolution sol;
  sol.x = vertex.values;
  double lo = 1.0;
  double hi = 0.0;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    const double x = sol.x[static_cast<std::size_t>(q)];
    sol.lp_value += x * micro2_to_double(inst.value_amount(q));
    sol.spend += x * micro2_to_double(inst.cost_amount(q));
    if (x <= kClusterTolerance) {
      sol.integral_zeros.push_back(q);
    } else if (x >= 1.0 - kClusterTolerance) {
      sol.integral_ones.push_back(q);
    } else {
      sol.fractional.push_back(q);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!sol.fractional.empty()) {
    if (hi - lo > kClusterTolerance) {
      throw StructureError("budgeted LP vertex has more than one fractional value (" +
                           std::to_string(lo) + " .. " + std::to_string(hi) + ")");
    }
    double sum = 0.0;
    for (QueryIndex q : sol.fractional) sum += sol.x[static_cast<std::size_t>(q)];
    sol.shared_fraction = sum / static_cast<double>(sol.fractional.size());
  }
  const double limit = budget.to_double();
  if (sol.spend > limit + 1e-6 * std::max(1.0, limit)) {
    throw SolverError("budgeted LP solution overspends the budget");
  }
  return sol;
}

LagrangianEstimate solve_budgeted_lagrangian(const Instance& inst, Money budget) {
  if (budget.micros() < 0) throw ValidationError("negative budget");
  const DependencyGraph dg = derive_dependencies(inst);
  const std::size_t size = inst.size();
  const Wide budget_amount = money_to_micro2(budget);

  std::vector<double> value(size), cost(size);
  double lambda_max = 0.0;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(size); ++q) {
    value[static_cast<std::size_t>(q)] = micro2_to_double(inst.value_amount(q));
    cost[static_cast<std::size_t>(q)] = micro2_to_double(inst.cost_amount(q));
    if (cost[static_cast<std::size_t>(q)] > 0.0) {
      lambda_max = std::max(lambda_max, value[static_cast<std::size_t>(q)] / cost[static_cast<std::size_t>(q)]);
    }
  }
  const double lambda_top = 2.0 * lambda_max + 1.0;
  double scale = 0.0;
  for (std::size_t q = 0; q < size; ++q) {
    scale = std::max(scale, std::abs(value[q]) + lambda_top * cost[q]);
  }
  if (scale == 0.0) scale = 1.0;

  struct Point {
    Wide value = 0;
    Wide spend = 0;
  };
  LagrangianEstimate estimate;
  auto best_set = [&](double lambda) {
    std::vector<Wide> weights(size);
    for (std::size_t q = 0; q < size; ++q) {
      const long double w = (static_cast<long double>(value[q]) - lambda * static_cast<long double>(cost[q])) /
                            scale * 0x1p50L;
      weights[q] = static_cast<Wide>(std::llround(w));
    }
    const CutResult cut = max_flow(build_flow_graph(dg, weights));
    ++estimate.cuts;
    Point point;
    for (QueryIndex q : sink_members(cut, size)) {
      point.value += inst.value_amount(q);
      point.spend += inst.cost_amount(q);
    }
    return point;
  };

  Point low = best_set(0.0);
  if (low.spend <= budget_amount) {
    estimate.value = micro2_to_double(low.value);
    return estimate;
  }
  double lambda_low = 0.0;
  double lambda_high = lambda_top;
  Point high = best_set(lambda_high);
  if (high.spend > budget_amount) {
    throw std::logic_error("Lagrangian upper multiplier still overspends");
  }
  for (int iter = 0; iter < 200 && lambda_high - lambda_low > 1e-15 * lambda_high; ++iter) {
    const double mid = 0.5 * (lambda_low + lambda_high);
    const Point point = best_set(mid);
    if (point.spend > budget_amount) {
      lambda_low = mid;
      low = point;
    } else {
      lambda_high = mid;
      high = point;
    }
  }
  const long double t = static_cast<long double>(budget_amount - high.spend) /
                        static_cast<long double>(low.spend - high.spend);
  const long double interpolated =
      static_cast<long double>(high.value) + t * static_cast<long double>(low.value - high.value);
  estimate.value = static_cast<double>(std::max(interpolated, static_cast<long double>(high.value)) /
                                       static_cast<long double>(kMicro2PerUnit));
  estimate.multiplier = lambda_high;
  return estimate;
}

CampaignPlan plan_two_campaigns(const Instance& inst, const BudgetedSolution& solution,
                                Money budget) {
  const Wide budget_amount = money_to_micro2(budget);
  CampaignPlan plan;
  plan.integral.queries = solution.integral_ones;
  for (QueryIndex q : solution.integral_ones) plan.integral.budget += inst.cost_amount(q);
  const Wide slack = budget_amount - plan.integral.budget;
  if (slack < 0) {
    const double over = micro2_to_double(-slack);
    if (over > 1e-6 * std::max(1.0, budget.to_double())) {
      throw SolverError("integral campaign spend exceeds the budget");
    }
  }
  plan.throttled.queries = solution.fractional;
  plan.throttled.budget = std::max<Wide>(slack, 0);

  double integral_value = 0.0;
  for (QueryIndex q : plan.integral.queries) integral_value += micro2_to_double(inst.value_amount(q));
  Wide rest_spend = 0;
  double rest_value = 0.0;
  for (QueryIndex q : plan.throttled.queries) {
    rest_spend += inst.cost_amount(q);
    rest_value += micro2_to_double(inst.value_amount(q));
  }
  double fraction = 1.0;
  if (rest_spend > 0) {
    fraction = std::min(1.0, static_cast<double>(static_cast<long double>(plan.throttled.budget) /
                                                 static_cast<long double>(rest_spend)));
  }
  plan.predicted_value = integral_value + fraction * rest_value;
  const double gap = std::abs(plan.predicted_value - solution.lp_value);
  if (gap > 1e-6 * std::max(std::abs(solution.lp_value), 1e-3)) {
    throw SolverError("two-campaign value " + std::to_string(plan.predicted_value) +
                      " departs from the LP value " + std::to_string(solution.lp_value));
  }
  return plan;
}

double simulate_campaign(const Instance& inst, const Campaign& campaign) {
  Wide spend = 0;
  Wide value = 0;
  for (QueryIndex q : campaign.queries) {
    spend += inst.cost_amount(q);
    value += inst.value_amount(q);
  }
  if (spend <= campaign.budget) return micro2_to_double(value);
  return static_cast<double>(static_cast<long double>(value) * static_cast<long double>(campaign.budget) /
                             static_cast<long double>(spend) / static_cast<long double>(kMicro2PerUnit));
}

}  // namespace broadbid
