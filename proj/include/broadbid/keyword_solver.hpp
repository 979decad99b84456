#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "broadbid/instance.hpp"
#include "broadbid/query_solver.hpp"
#include "broadbid/simplex.hpp"

namespace broadbid {

// Distinct query costs, ascending.
class PriceLevels {
 public:
  PriceLevels() = default;
  explicit PriceLevels(const Instance& inst);

  std::size_t size() const { return levels_.size(); }
  const std::vector<Money>& levels() const { return levels_; }
  Money operator[](std::size_t i) const { return levels_[i]; }
  // Index of an existing level; throws std::out_of_range otherwise.
  std::size_t index_of(Money cost) const;

 private:
  std::vector<Money> levels_;
};

// Fractional solution of the keyword-language relaxation. Per-keyword arrays
// are indexed by slot (position in `keywords`) and price level.
//
// Z[s][p] is the broad mass at level p or above, i.e. the probability that
// a broad bid on s reaches a query of cost E[p].
struct KeywordFractional {
  PriceLevels levels;
  std::vector<QueryIndex> keywords;   // S, ascending
  std::vector<int> slot;              // per query: index into keywords, or -1
  std::vector<std::vector<double>> W;
  std::vector<std::vector<double>> Z;
  std::vector<double> R;
  // Selection mass per query: Y_q for queries outside S, Z + R (or the own
  // Y variable when other phrases also match it) for keywords.
  std::vector<double> Y;
  double V_frac = 0.0;
  double C_frac = 0.0;
  double objective = 0.0;
  VertexSolution vertex;
};

struct KeywordLpOptions {
  bool allow_exact = true;
};

LinearProgram build_ilp_approx(const Instance& inst, const KeywordLpOptions& options = {});

KeywordFractional solve_relaxation(const Instance& inst, const KeywordLpOptions& options = {});

struct RoundedBid {
  BidVector bid;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
};

// One uniform draw per keyword: exact with probability R, broad at level p
// with probability (1 - epsilon) W[p], otherwise no bid.
RoundedBid round_bid(const Instance& inst, const KeywordFractional& frac, double epsilon,
                     std::uint64_t seed);

// Exact win probability of q under round_bid, assuming independent keywords:
// 1 - prod over matching keywords of the probability that none reaches c(q).
double selection_probability(const Instance& inst, const KeywordFractional& frac, double epsilon,
                             QueryIndex q);

double utility_bound(double v_frac, double c_frac, double epsilon);
inline double utility_bound(const KeywordFractional& frac, double epsilon) {
  return utility_bound(frac.V_frac, frac.C_frac, epsilon);
}

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  double utility = 0.0;
  double spend = 0.0;
  double value = 0.0;
};

struct RoundingSummary {
  std::vector<TrialRecord> trials;  // empty unless keep_trials
  std::vector<std::int64_t> wins;   // per query, number of trials that won it
  int trial_count = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  double bound = 0.0;
  bool bound_satisfied = false;  // mean >= bound - 3 std / sqrt(trials)
};

// Runs `trials` roundings with seeds derive_seed(seed, i).
RoundingSummary run_rounding_trials(const Instance& inst, const KeywordFractional& frac,
                                    double epsilon, int trials, std::uint64_t seed,
                                    bool keep_trials = false);

enum class KeywordExactMethod { kAuto, kEnumerate, kBranchAndBound };

struct KeywordExactOptions {
  bool allow_exact = true;  // false restricts every keyword to broad bids
  std::int64_t max_nodes = 1'000'000;
  KeywordExactMethod method = KeywordExactMethod::kAuto;
};

// Exact keyword-language optimum. Enumerates every combination of per-keyword
// choices (none, exact, broad at a cost level the keyword can reach) when
// there are at most max_nodes of them; otherwise branch and bound with the
// relaxation as the bound. Throws SizeLimitError past max_nodes nodes (or,
// for kEnumerate, when the enumeration itself is larger).
OptimalBidResult solve_keyword_exact(const Instance& inst, const KeywordExactOptions& options = {});

}  // namespace broadbid
