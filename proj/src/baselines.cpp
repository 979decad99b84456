#include "broadbid/baselines.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <string>

#include "broadbid/errors.hpp"

namespace broadbid {

const char* to_string(RateRule rule) {
  switch (rule) {
    case RateRule::kProfitOverCost: return "profit_over_cost";
    case RateRule::kValueOverCost: return "value_over_cost";
  }
  return "unknown";
}

namespace {

void require_query_language(const Instance& inst, const char* what) {
  if (!inst.all_biddable()) {
    throw ValidationError(std::string(what) + " needs every query to be biddable");
  }
}

void require_size(const Instance& inst, std::size_t limit) {
  if (inst.size() > limit) {
    throw SizeLimitError("oracle limited to " + std::to_string(limit) + " queries, instance has " +
                         std::to_string(inst.size()));
  }
}

OptimalBidResult finish(const Instance& inst, const DependencyGraph& dg,
                        std::vector<QueryIndex> members, SolveMethod method) {
  OptimalBidResult result;
  result.method = method;
  result.winning_set = make_winning_set(inst, std::move(members));
  result.bid = bid_from_winning_set(inst, dg, result.winning_set.members, BidLanguage::kQuery);
  return result;
}

struct Candidate {
  QueryIndex query = -1;
  std::vector<QueryIndex> grown;
  UtilityParts gain;  // marginal utility, value and cost
};

// Calls `pick` with every candidate whose closure adds positive utility.
template <typename Pick>
std::vector<QueryIndex> greedy_loop(const Instance& inst, const DependencyGraph& dg, Pick pick) {
  std::vector<QueryIndex> current;
  UtilityParts parts;
  while (true) {
    std::vector<char> in(inst.size(), 0);
    for (QueryIndex q : current) in[static_cast<std::size_t>(q)] = 1;
    std::vector<Candidate> candidates;
    for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
      if (in[static_cast<std::size_t>(q)]) continue;
      std::vector<QueryIndex> seed = current;
      seed.push_back(q);
      Candidate c;
      c.query = q;
      c.grown = closure(dg, seed);
      const UtilityParts next = utility(inst, c.grown);
      c.gain = {next.utility - parts.utility, next.value_part - parts.value_part,
                next.cost_part - parts.cost_part};
      if (c.gain.utility > 0) candidates.push_back(std::move(c));
    }
    if (candidates.empty()) return current;
    const Candidate& chosen = pick(candidates);
    current = chosen.grown;
    parts = utility(inst, current);
  }
}

// a / b > c / d for non-negative denominators, with x / 0 = +inf.
bool better_ratio(Wide a, Wide b, Wide c, Wide d) {
  if (b == 0 || d == 0) return b == 0 && d != 0;
  return static_cast<long double>(a) * static_cast<long double>(d) >
         static_cast<long double>(c) * static_cast<long double>(b);
}

// Depth-first enumeration of closed sets in index order. A query can be
// taken only if no already rejected query depends on it, and rejected only
// if no already taken query forces it. `keep_going` prunes partial sets.
class ClosedSetSearch {
 public:
  explicit ClosedSetSearch(const DependencyGraph& dg) : dg_(dg), state_(dg.antecedents.size(), 0) {}

  void run(const std::function<bool(QueryIndex, bool)>& enter,
           const std::function<void(QueryIndex, bool)>& leave,
           const std::function<void()>& leaf) {
    enter_ = &enter;
    leave_ = &leave;
    leaf_ = &leaf;
    visit(0);
  }

 private:
  static constexpr char kUndecided = 0;
  static constexpr char kIn = 1;
  static constexpr char kOut = 2;

  bool can_take(QueryIndex q) const {
    for (QueryIndex next : dg_.consequents[static_cast<std::size_t>(q)]) {
      if (state_[static_cast<std::size_t>(next)] == kOut) return false;
    }
    return true;
  }

  bool can_reject(QueryIndex q) const {
    for (QueryIndex prev : dg_.antecedents[static_cast<std::size_t>(q)]) {
      if (prev != q && state_[static_cast<std::size_t>(prev)] == kIn) return false;
    }
    return true;
  }

  void visit(QueryIndex q) {
    if (q == static_cast<QueryIndex>(state_.size())) {
      (*leaf_)();
      return;
    }
    for (bool take : {true, false}) {
      if (take ? !can_take(q) : !can_reject(q)) continue;
      state_[static_cast<std::size_t>(q)] = take ? kIn : kOut;
      if ((*enter_)(q, take)) visit(q + 1);
      (*leave_)(q, take);
      state_[static_cast<std::size_t>(q)] = kUndecided;
    }
  }

  const DependencyGraph& dg_;
  std::vector<char> state_;
  const std::function<bool(QueryIndex, bool)>* enter_ = nullptr;
  const std::function<void(QueryIndex, bool)>* leave_ = nullptr;
  const std::function<void()>* leaf_ = nullptr;
};

}  // namespace

OptimalBidResult max_margin_greedy(const Instance& inst) {
  require_query_language(inst, "max-margin greedy");
  const DependencyGraph dg = derive_dependencies(inst);
  auto members = greedy_loop(inst, dg, [](const std::vector<Candidate>& candidates) -> const Candidate& {
    const Candidate* best = &candidates.front();
    for (const Candidate& c : candidates) {
      if (c.gain.utility > best->gain.utility) best = &c;
    }
    return *best;
  });
  return finish(inst, dg, std::move(members), SolveMethod::kGreedyMargin);
}

OptimalBidResult max_rate_greedy(const Instance& inst, RateRule rule) {
  require_query_language(inst, "max-rate greedy");
  const DependencyGraph dg = derive_dependencies(inst);
  auto numerator = [rule](const Candidate& c) {
    return rule == RateRule::kProfitOverCost ? c.gain.utility : c.gain.value_part;
  };
  auto members = greedy_loop(inst, dg, [&](const std::vector<Candidate>& candidates) -> const Candidate& {
    const Candidate* best = &candidates.front();
    for (const Candidate& c : candidates) {
      if (better_ratio(numerator(c), c.gain.cost_part, numerator(*best), best->gain.cost_part)) best = &c;
    }
    return *best;
  });
  return finish(inst, dg, std::move(members), SolveMethod::kGreedyRate);
}

OptimalBidResult brute_force_query(const Instance& inst, std::size_t max_queries) {
  require_query_language(inst, "query oracle");
  require_size(inst, max_queries);
  const DependencyGraph dg = derive_dependencies(inst);
  const std::size_t n = inst.size();

  // Sum of positive weights from q onward, for pruning.
  std::vector<Wide> upside(n + 1, 0);
  for (std::size_t q = n; q-- > 0;) {
    upside[q] = upside[q + 1] + std::max<Wide>(inst.weight(static_cast<QueryIndex>(q)), 0);
  }
  Wide current = 0;
  Wide best = 0;
  std::vector<QueryIndex> members;
  std::vector<QueryIndex> best_members;
  ClosedSetSearch search(dg);
  search.run(
      [&](QueryIndex q, bool take) {
        if (take) {
          current += inst.weight(q);
          members.push_back(q);
        }
        return current + upside[static_cast<std::size_t>(q) + 1] > best;
      },
      [&](QueryIndex q, bool take) {
        if (take) {
          current -= inst.weight(q);
          members.pop_back();
        }
      },
      [&] {
        if (current > best) {
          best = current;
          best_members = members;
        }
      });
  return finish(inst, dg, std::move(best_members), SolveMethod::kOracle);
}

BudgetedIntegral brute_force_budgeted_integral(const Instance& inst, Money budget,
                                               std::size_t max_queries) {
  require_size(inst, max_queries);
  if (budget.micros() < 0) throw ValidationError("negative budget");
  const DependencyGraph dg = derive_dependencies(inst);
  const Wide limit = money_to_micro2(budget);
  const std::size_t n = inst.size();
  std::vector<Wide> upside(n + 1, 0);
  for (std::size_t q = n; q-- > 0;) {
    upside[q] = upside[q + 1] + std::max<Wide>(inst.value_amount(static_cast<QueryIndex>(q)), 0);
  }

  BudgetedIntegral best;
  BudgetedIntegral current;
  bool found = false;
  ClosedSetSearch search(dg);
  search.run(
      [&](QueryIndex q, bool take) {
        if (take) {
          current.value += inst.value_amount(q);
          current.spend += inst.cost_amount(q);
          current.members.push_back(q);
        }
        if (current.spend > limit) return false;
        return !found || current.value + upside[static_cast<std::size_t>(q) + 1] > best.value;
      },
      [&](QueryIndex q, bool take) {
        if (take) {
          current.value -= inst.value_amount(q);
          current.spend -= inst.cost_amount(q);
          current.members.pop_back();
        }
      },
      [&] {
        if (!found || current.value > best.value) {
          best = current;
          found = true;
        }
      });
  return best;
}

KeywordBudgeted brute_force_keyword_budgeted(const Instance& inst, Money budget,
                                             std::int64_t max_combinations) {
  if (budget.micros() < 0) throw ValidationError("negative budget");
  const Wide limit = money_to_micro2(budget);
  const std::vector<QueryIndex> keywords = inst.biddable();

  // Per keyword: the bids worth trying. Broad bids at each distinct cost of
  // a query it matches; anything in between wins the same set.
  std::vector<std::vector<Bid>> options(keywords.size());
  double combinations = 1.0;
  for (std::size_t k = 0; k < keywords.size(); ++k) {
    const QueryIndex s = keywords[k];
    options[k].push_back(Bid{});
    options[k].push_back(Bid{inst.query(s).cost, std::nullopt});
    std::vector<Money> levels;
    for (QueryIndex q : inst.matched_by(s)) levels.push_back(inst.query(q).cost);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (Money p : levels) options[k].push_back(Bid{std::nullopt, p});
    combinations *= static_cast<double>(options[k].size());
  }
  if (combinations > static_cast<double>(max_combinations)) {
    throw SizeLimitError("keyword oracle needs " + std::to_string(combinations) + " combinations");
  }

  KeywordBudgeted best;
  bool found = false;
  BidVector bid(inst.size());
  std::function<void(std::size_t)> visit = [&](std::size_t k) {
    if (k == keywords.size()) {
      WinningSet won = interpret_bid(inst, bid);
      if (won.parts.cost_part > limit) return;
      if (!found || won.parts.value_part > best.value) {
        found = true;
        best.value = won.parts.value_part;
        best.spend = won.parts.cost_part;
        best.bid = bid;
        best.winning_set = std::move(won);
      }
      return;
    }
    for (const Bid& option : options[k]) {
      bid[keywords[k]] = option;
      visit(k + 1);
    }
    bid[keywords[k]] = Bid{};
  };
  visit(0);
  return best;
}

}  // namespace broadbid
