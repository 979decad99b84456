#include "broadbid/instance.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "broadbid/errors.hpp"

namespace broadbid {

std::optional<QueryIndex> Instance::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

QueryIndex Instance::index_of(std::string_view id) const {
  if (auto q = find(id)) return *q;
  throw ValidationError("unknown query id '" + std::string(id) + "'");
}

std::vector<QueryIndex> Instance::biddable() const {
  std::vector<QueryIndex> out;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(size()); ++q) {
    if (query(q).biddable) out.push_back(q);
  }
  return out;
}

bool Instance::all_biddable() const {
  return std::all_of(queries_.begin(), queries_.end(),
                     [](const Query& q) { return q.biddable; });
}

Wide Instance::weight(QueryIndex q) const {
  const Query& query = this->query(q);
  return static_cast<Wide>(query.value.micros() - query.cost.micros()) * query.clicks.micros();
}

Instance Instance::with_budget(std::optional<Money> budget) const {
  if (budget && budget->micros() < 0) throw ValidationError("negative budget");
  Instance copy = *this;
  copy.budget_ = budget;
  return copy;
}

InstanceBuilder& InstanceBuilder::add_query(Query query) {
  queries_.push_back(std::move(query));
  return *this;
}

InstanceBuilder& InstanceBuilder::add_query(std::string id, Money value, Money cost,
                                            Clicks clicks, bool biddable) {
  return add_query(Query{std::move(id), value, cost, clicks, biddable});
}

InstanceBuilder& InstanceBuilder::add_match(std::string phrase, std::string query) {
  matches_.emplace_back(std::move(phrase), std::move(query));
  return *this;
}

InstanceBuilder& InstanceBuilder::set_budget(std::optional<Money> budget) {
  budget_ = budget;
  return *this;
}

Instance InstanceBuilder::build() const {
  Instance inst;
  inst.queries_ = queries_;
  std::sort(inst.queries_.begin(), inst.queries_.end(),
            [](const Query& a, const Query& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < inst.queries_.size(); ++i) {
    const Query& q = inst.queries_[i];
    if (q.id.empty()) throw ValidationError("empty query id");
    if (i > 0 && inst.queries_[i - 1].id == q.id) {
      throw ValidationError("duplicate query id '" + q.id + "'");
    }
    if (q.cost.micros() < 0) throw ValidationError("negative cost for '" + q.id + "'");
    if (q.clicks.micros() < 0) throw ValidationError("negative clicks for '" + q.id + "'");
    inst.index_.emplace(q.id, static_cast<QueryIndex>(i));
  }
  if (budget_ && budget_->micros() < 0) throw ValidationError("negative budget");
  inst.budget_ = budget_;

  std::set<MatchPair> pairs;
  for (const auto& [phrase, query] : matches_) {
    const auto s = inst.find(phrase);
    const auto q = inst.find(query);
    if (!s) throw ValidationError("broad_match references unknown id '" + phrase + "'");
    if (!q) throw ValidationError("broad_match references unknown id '" + query + "'");
    if (!inst.query(*s).biddable) {
      throw ValidationError("broad_match phrase '" + phrase + "' is not biddable");
    }
    pairs.emplace(*s, *q);
  }
  for (QueryIndex s = 0; s < static_cast<QueryIndex>(inst.size()); ++s) {
    if (inst.query(s).biddable) pairs.emplace(s, s);
  }
  inst.broad_match_.assign(pairs.begin(), pairs.end());
  inst.matchers_.assign(inst.size(), {});
  inst.matched_by_.assign(inst.size(), {});
  for (const auto& [s, q] : inst.broad_match_) {
    inst.matchers_[static_cast<std::size_t>(q)].push_back(s);
    inst.matched_by_[static_cast<std::size_t>(s)].push_back(q);
  }
  return inst;
}

DependencyGraph derive_dependencies(const Instance& inst) {
  DependencyGraph dg;
  dg.antecedents.assign(inst.size(), {});
  dg.consequents.assign(inst.size(), {});
  for (const auto& [s, q] : inst.broad_match()) {
    if (inst.query(s).cost < inst.query(q).cost) continue;
    dg.pairs.emplace_back(s, q);
    dg.antecedents[static_cast<std::size_t>(q)].push_back(s);
    dg.consequents[static_cast<std::size_t>(s)].push_back(q);
  }
  return dg;
}

void validate_bid(const Instance& inst, const BidVector& bid, BidLanguage language) {
  if (bid.size() != inst.size()) throw ValidationError("bid vector size mismatch");
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    const Bid& b = bid[q];
    if (b.empty()) continue;
    const Query& query = inst.query(q);
    if (!query.biddable) throw ValidationError("bid on non-biddable query '" + query.id + "'");
    if ((b.exact && b.exact->micros() < 0) || (b.broad && b.broad->micros() < 0)) {
      throw ValidationError("negative bid on '" + query.id + "'");
    }
    if (language == BidLanguage::kQuery && b.exact) {
      throw ValidationError("exact bid on '" + query.id + "' in the query language");
    }
  }
}

UtilityParts utility(const Instance& inst, std::span<const QueryIndex> members) {
  UtilityParts parts;
  for (QueryIndex q : members) {
    parts.value_part += inst.value_amount(q);
    parts.cost_part += inst.cost_amount(q);
  }
  parts.utility = parts.value_part - parts.cost_part;
  return parts;
}

WinningSet make_winning_set(const Instance& inst, std::vector<QueryIndex> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  WinningSet set;
  set.parts = utility(inst, members);
  set.members = std::move(members);
  return set;
}

WinningSet interpret_bid(const Instance& inst, const BidVector& bid) {
  if (bid.size() != inst.size()) throw ValidationError("bid vector size mismatch");
  std::vector<QueryIndex> won;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    const Money price = inst.query(q).cost;
    bool wins = bid[q].exact && *bid[q].exact >= price;
    for (QueryIndex s : inst.matchers(q)) {
      if (wins) break;
      wins = bid[s].broad && *bid[s].broad >= price;
    }
    if (wins) won.push_back(q);
  }
  return make_winning_set(inst, std::move(won));
}

std::vector<QueryIndex> closure(const DependencyGraph& dg, std::span<const QueryIndex> seed) {
  std::vector<char> in(dg.consequents.size(), 0);
  std::vector<QueryIndex> stack(seed.begin(), seed.end());
  std::vector<QueryIndex> out;
  while (!stack.empty()) {
    const QueryIndex q = stack.back();
    stack.pop_back();
    if (in[static_cast<std::size_t>(q)]) continue;
    in[static_cast<std::size_t>(q)] = 1;
    out.push_back(q);
    for (QueryIndex next : dg.consequents[static_cast<std::size_t>(q)]) {
      if (!in[static_cast<std::size_t>(next)]) stack.push_back(next);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_closed(const DependencyGraph& dg, std::span<const QueryIndex> members) {
  std::vector<char> in(dg.consequents.size(), 0);
  for (QueryIndex q : members) in[static_cast<std::size_t>(q)] = 1;
  for (const auto& [s, q] : dg.pairs) {
    if (in[static_cast<std::size_t>(s)] && !in[static_cast<std::size_t>(q)]) return false;
  }
  return true;
}

BidVector bid_from_winning_set(const Instance& inst, const DependencyGraph& dg,
                               std::span<const QueryIndex> members, BidLanguage language) {
  if (!is_closed(dg, members)) {
    throw InfeasibleSetError("winning set is not closed under the dependency relation");
  }
  BidVector bid(inst.size());
  std::vector<char> in(inst.size(), 0);
  for (QueryIndex q : members) in[static_cast<std::size_t>(q)] = 1;

  if (language == BidLanguage::kQuery) {
    for (QueryIndex q : members) {
      if (inst.weight(q) <= 0) continue;
      if (!inst.query(q).biddable) {
        throw InfeasibleSetError("query '" + inst.query(q).id + "' is not biddable");
      }
      bid[q].broad = inst.query(q).cost;
    }
    return bid;
  }

  // Keyword language: reach every positive non-biddable member through a
  // broad bid on some antecedent inside T.
  for (QueryIndex q : members) {
    if (inst.weight(q) <= 0 || inst.query(q).biddable) continue;
    const auto& ante = dg.antecedents[static_cast<std::size_t>(q)];
    auto covered = std::find_if(ante.begin(), ante.end(), [&](QueryIndex s) {
      return in[static_cast<std::size_t>(s)] && bid[s].broad.has_value();
    });
    if (covered != ante.end()) continue;
    auto pick = std::find_if(ante.begin(), ante.end(),
                             [&](QueryIndex s) { return in[static_cast<std::size_t>(s)] != 0; });
    if (pick == ante.end()) {
      throw InfeasibleSetError("query '" + inst.query(q).id +
                               "' has no biddable antecedent in the winning set");
    }
    bid[*pick].broad = inst.query(*pick).cost;
  }
  for (QueryIndex q : members) {
    if (inst.weight(q) <= 0 || !inst.query(q).biddable || bid[q].broad) continue;
    bid[q].exact = inst.query(q).cost;
  }
  return bid;
}

}  // namespace broadbid
