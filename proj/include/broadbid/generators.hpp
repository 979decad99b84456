#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "broadbid/instance.hpp"

namespace broadbid {

// n keywords worth 2 at cost 1, plus every pair of keywords worth 1 - 1.5/n
// at cost 1, each pair broadly matching both of its keywords.
struct GreedyTrapSpec {
  int n = 8;
  bool keywords_only = false;  // pairs not biddable
};

// Queries l_i (cost c, value M), r_i (cost c', value 1) for i = 1..k+1 and
// chains t_i1..t_in (cost 1, value 0). Winning l_j forces every r_i with
// i != j; the budget is c + k c' + n_chain.
struct IntegralityGapSpec {
  int k = 3;
  int n_chain = 3;
  Money c = Money::from_micros(100 * kMicrosPerUnit);
  Money c_prime = Money::from_micros(10 * kMicrosPerUnit);
  Money M = Money::from_micros(50 * kMicrosPerUnit);
  // Enforce c > 10 c' > 100 n_chain.
  bool strict = true;
};

struct IndependentSetSpec {
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;
};

// Sets become keywords, elements become queries; picking at most k sets is
// the only way to stay within the budget.
struct MaxCoverageSpec {
  std::vector<std::vector<int>> sets;
  std::vector<Money> element_weights;
  int k = 1;
};

// Random keywords with standard normal net value and every pair of keywords
// as a non-biddable query whose net value is the average, maximum or minimum
// of its two keywords. All costs are 5.
struct SimulationSpec {
  int keywords = 30;
  std::uint64_t seed = 0;
};

using GeneratorSpec =
    std::variant<GreedyTrapSpec, IntegralityGapSpec, IndependentSetSpec, MaxCoverageSpec, SimulationSpec>;

// Throws ValidationError on invalid parameters.
Instance generate(const GeneratorSpec& spec);

// Edge list: one "u v" pair of non-negative node numbers per line. A line
// with a single number sets the node count (for isolated nodes); '#' starts
// a comment. Throws ParseError.
IndependentSetSpec parse_edgelist(std::string_view text);

// "1 2 3" per line per set.
std::vector<std::vector<int>> parse_set_system(std::string_view text);

}  // namespace broadbid
