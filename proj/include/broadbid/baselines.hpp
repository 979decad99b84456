#pragma once

#include <cstdint>
#include <vector>

#include "broadbid/instance.hpp"
#include "broadbid/query_solver.hpp"

namespace broadbid {

// One-step greedy in the query language. Adding q means adding its whole
// closure; the loop stops once no candidate has positive marginal utility.
OptimalBidResult max_margin_greedy(const Instance& inst);

enum class RateRule { kProfitOverCost, kValueOverCost };

const char* to_string(RateRule rule);

// Among candidates with positive marginal utility, picks the best ratio of
// marginal profit (or value) to marginal cost. Zero marginal cost ranks
// first; ties go to the smaller id.
OptimalBidResult max_rate_greedy(const Instance& inst, RateRule rule);

inline constexpr std::size_t kOracleQueryLimit = 20;

// Exhaustive maximum of u over closed sets. Throws SizeLimitError above
// max_queries.
OptimalBidResult brute_force_query(const Instance& inst, std::size_t max_queries = kOracleQueryLimit);

struct BudgetedIntegral {
  std::vector<QueryIndex> members;
  Wide value = 0;  // sum v n, micro2
  Wide spend = 0;  // sum c n, micro2
};

// Maximum value over closed sets whose spend fits the budget.
BudgetedIntegral brute_force_budgeted_integral(const Instance& inst, Money budget,
                                               std::size_t max_queries = kOracleQueryLimit);

struct KeywordBudgeted {
  BidVector bid;
  WinningSet winning_set;
  Wide value = 0;
  Wide spend = 0;
};

// Maximum value over keyword-language bids whose winning set fits the
// budget. Every keyword takes no bid, an exact bid or a broad bid at a cost
// level it can reach. Throws SizeLimitError past max_combinations.
KeywordBudgeted brute_force_keyword_budgeted(const Instance& inst, Money budget,
                                             std::int64_t max_combinations = 10'000'000);

}  // namespace broadbid
