#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "broadbid/fixed_point.hpp"

namespace broadbid {

using QueryIndex = int;

struct Query {
  std::string id;
  Money value;   // v(q), per click
  Money cost;    // c(q), per click
  Clicks clicks; // n(q)
  bool biddable = false;
};

// (phrase, query): `query` matches `phrase` broadly.
using MatchPair = std::pair<QueryIndex, QueryIndex>;

// Immutable problem statement. Queries are ordered by id; the broad-match
// relation is reflexive on biddable queries.
class Instance {
 public:
  Instance() = default;

  std::size_t size() const { return queries_.size(); }
  const std::vector<Query>& queries() const { return queries_; }
  const Query& query(QueryIndex q) const { return queries_[static_cast<std::size_t>(q)]; }
  const std::vector<MatchPair>& broad_match() const { return broad_match_; }
  const std::optional<Money>& budget() const { return budget_; }

  std::optional<QueryIndex> find(std::string_view id) const;
  QueryIndex index_of(std::string_view id) const;  // throws ValidationError

  // Biddable phrases s with (s, q) in broad_match, ascending.
  const std::vector<QueryIndex>& matchers(QueryIndex q) const {
    return matchers_[static_cast<std::size_t>(q)];
  }
  // Queries q with (s, q) in broad_match, ascending.
  const std::vector<QueryIndex>& matched_by(QueryIndex s) const {
    return matched_by_[static_cast<std::size_t>(s)];
  }

  std::vector<QueryIndex> biddable() const;
  bool all_biddable() const;

  // w(q) = (v(q) - c(q)) n(q), exact.
  Wide weight(QueryIndex q) const;
  Wide value_amount(QueryIndex q) const { return times(query(q).value, query(q).clicks); }
  Wide cost_amount(QueryIndex q) const { return times(query(q).cost, query(q).clicks); }

  Instance with_budget(std::optional<Money> budget) const;

 private:
  friend class InstanceBuilder;

  std::vector<Query> queries_;
  std::vector<MatchPair> broad_match_;
  std::optional<Money> budget_;
  std::unordered_map<std::string, QueryIndex> index_;
  std::vector<std::vector<QueryIndex>> matchers_;
  std::vector<std::vector<QueryIndex>> matched_by_;
};

// Collects queries and match pairs by id, then validates and freezes them.
class InstanceBuilder {
 public:
  InstanceBuilder& add_query(Query query);
  InstanceBuilder& add_query(std::string id, Money value, Money cost, Clicks clicks,
                             bool biddable);
  InstanceBuilder& add_match(std::string phrase, std::string query);
  InstanceBuilder& set_budget(std::optional<Money> budget);

  // Throws ValidationError on duplicate ids, dangling or non-biddable match
  // phrases, negative cost or negative budget.
  Instance build() const;

 private:
  std::vector<Query> queries_;
  std::vector<std::pair<std::string, std::string>> matches_;
  std::optional<Money> budget_;
};

// The implication relation C: (s, q) with (s, q) in broad_match and
// c(s) >= c(q). Reflexive pairs are included.
struct DependencyGraph {
  std::vector<MatchPair> pairs;
  std::vector<std::vector<QueryIndex>> antecedents;  // D(q)
  std::vector<std::vector<QueryIndex>> consequents;  // N(s)

  std::size_t size() const { return pairs.size(); }
};

DependencyGraph derive_dependencies(const Instance& inst);

enum class BidLanguage { kQuery, kKeyword };

struct Bid {
  std::optional<Money> exact;
  std::optional<Money> broad;

  bool empty() const { return !exact && !broad; }
  friend bool operator==(const Bid&, const Bid&) = default;
};

// One entry per query (index-aligned with the instance); entries for
// non-biddable queries stay empty.
class BidVector {
 public:
  BidVector() = default;
  explicit BidVector(std::size_t size) : bids_(size) {}

  std::size_t size() const { return bids_.size(); }
  const Bid& operator[](QueryIndex q) const { return bids_[static_cast<std::size_t>(q)]; }
  Bid& operator[](QueryIndex q) { return bids_[static_cast<std::size_t>(q)]; }
  const std::vector<Bid>& bids() const { return bids_; }

  friend bool operator==(const BidVector&, const BidVector&) = default;

 private:
  std::vector<Bid> bids_;
};

// Throws ValidationError when the bid is not expressible in `language`.
void validate_bid(const Instance& inst, const BidVector& bid, BidLanguage language);

struct UtilityParts {
  Wide utility = 0;
  Wide value_part = 0;  // sum v n
  Wide cost_part = 0;   // sum c n

  friend bool operator==(const UtilityParts&, const UtilityParts&) = default;
};

struct WinningSet {
  std::vector<QueryIndex> members;  // ascending
  UtilityParts parts;

  Wide utility() const { return parts.utility; }
};

UtilityParts utility(const Instance& inst, std::span<const QueryIndex> members);

WinningSet make_winning_set(const Instance& inst, std::vector<QueryIndex> members);

// Max-aggregation semantics: the interpreted broad bid at q is the largest
// broad bid present on a phrase that q matches; q is won when that bid, or an
// exact bid on q itself, is at least c(q). A bid of zero wins only zero-cost
// queries.
WinningSet interpret_bid(const Instance& inst, const BidVector& bid);

std::vector<QueryIndex> closure(const DependencyGraph& dg, std::span<const QueryIndex> seed);

bool is_closed(const DependencyGraph& dg, std::span<const QueryIndex> members);

// Bids c(q) on every positive-weight member. In the query language the bid
// is a broad bid on q itself; in the keyword language a positive biddable
// member gets an exact bid unless it already carries a broad bid, and a
// positive non-biddable member is reached through a broad bid c(s) on a
// biddable antecedent s in T. Throws InfeasibleSetError if T is not closed or
// cannot be realized in the language.
BidVector bid_from_winning_set(const Instance& inst, const DependencyGraph& dg,
                               std::span<const QueryIndex> members, BidLanguage language);

}  // namespace broadbid
