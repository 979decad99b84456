#include "broadbid/generators.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "broadbid/errors.hpp"
#include "broadbid/random.hpp"

namespace broadbid {
namespace {

std::string padded(const char* prefix, int index, int count) {
  int width = 1;
  for (int limit = 10; limit <= count - 1; limit *= 10) ++width;
  width = std::max(width, 2);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, index);
  return buf;
}

Money units(std::int64_t n) { return Money::from_micros(n * kMicrosPerUnit); }

const Clicks kOneClick = Clicks::from_micros(kMicrosPerUnit);

Instance greedy_trap(const GreedyTrapSpec& spec) {
  if (spec.n < 2) throw ValidationError("greedy-trap needs n >= 2");
  InstanceBuilder b;
  const Money pair_value = Money::from_double(1.0 - 1.5 / spec.n);
  std::vector<std::string> ids;
  for (int i = 0; i < spec.n; ++i) {
    ids.push_back(padded("k", i, spec.n));
    b.add_query(ids.back(), units(2), units(1), kOneClick, true);
  }
  for (int i = 0; i < spec.n; ++i) {
    for (int j = i + 1; j < spec.n; ++j) {
      const std::string pair = ids[static_cast<std::size_t>(i)] + "_" + ids[static_cast<std::size_t>(j)];
      b.add_query(pair, pair_value, units(1), kOneClick, !spec.keywords_only);
      b.add_match(ids[static_cast<std::size_t>(i)], pair);
      b.add_match(ids[static_cast<std::size_t>(j)], pair);
    }
  }
  return b.build();
}

Instance integrality_gap(const IntegralityGapSpec& spec) {
  if (spec.k < 1 || spec.n_chain < 1) throw ValidationError("integrality-gap needs k >= 1 and n_chain >= 1");
  if (spec.c_prime.micros() <= 0 || spec.M.micros() <= 0) {
    throw ValidationError("integrality-gap needs positive c' and M");
  }
  const std::int64_t chain = static_cast<std::int64_t>(spec.n_chain) * kMicrosPerUnit;
  if (spec.strict) {
    if (!(spec.c.micros() > 10 * spec.c_prime.micros() && 10 * spec.c_prime.micros() > 100 * chain)) {
      throw ValidationError("integrality-gap needs c > 10 c' > 100 n_chain");
    }
  } else if (!(spec.c > spec.c_prime && spec.c_prime.micros() > chain)) {
    throw ValidationError("integrality-gap needs c > c' > n_chain");
  }
  const int count = spec.k + 1;
  InstanceBuilder b;
  for (int i = 1; i <= count; ++i) {
    b.add_query(padded("l", i, count + 1), spec.M, spec.c, kOneClick, true);
    b.add_query(padded("r", i, count + 1), units(1), spec.c_prime, kOneClick, true);
    for (int j = 1; j <= spec.n_chain; ++j) {
      b.add_query(padded("t", i, count + 1) + padded("_", j, spec.n_chain + 1), units(0), units(1),
                  kOneClick, true);
    }
  }
  for (int i = 1; i <= count; ++i) {
    const std::string r = padded("r", i, count + 1);
    for (int j = 1; j <= count; ++j) {
      if (i != j) b.add_match(padded("l", j, count + 1), r);
    }
    // Cheaper than r_i, so this pair never becomes a dependency.
    const std::string t = padded("t", i, count + 1);
    b.add_match(t + padded("_", 1, spec.n_chain + 1), r);
    for (int j = 1; j < spec.n_chain; ++j) {
      b.add_match(t + padded("_", j + 1, spec.n_chain + 1), t + padded("_", j, spec.n_chain + 1));
    }
  }
  b.set_budget(spec.c + Money::from_micros(spec.k * spec.c_prime.micros()) + units(spec.n_chain));
  return b.build();
}

Instance independent_set(const IndependentSetSpec& spec) {
  if (spec.nodes < 0) throw ValidationError("negative node count");
  std::vector<int> degree(static_cast<std::size_t>(spec.nodes), 0);
  std::set<std::pair<int, int>> edges;
  for (auto [u, v] : spec.edges) {
    if (u < 0 || v < 0 || u >= spec.nodes || v >= spec.nodes) throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("self-loop in graph");
    if (u > v) std::swap(u, v);
    if (!edges.insert({u, v}).second) continue;
    ++degree[static_cast<std::size_t>(u)];
    ++degree[static_cast<std::size_t>(v)];
  }
  int max_degree = 0;
  for (int d : degree) max_degree = std::max(max_degree, d);
  // A common cost keeps every edge query dependent on both endpoints.
  const std::int64_t base = std::max(max_degree - 1, 1);
  InstanceBuilder b;
  for (int v = 0; v < spec.nodes; ++v) {
    b.add_query(padded("v", v, spec.nodes), units(base - (degree[static_cast<std::size_t>(v)] - 1)),
                units(base), kOneClick, true);
  }
  for (auto [u, v] : edges) {
    const std::string a = padded("v", u, spec.nodes);
    const std::string c = padded("v", v, spec.nodes);
    b.add_query(a + "_" + c, units(base + 1), units(base), kOneClick, false);
    b.add_match(a, a + "_" + c);
    b.add_match(c, a + "_" + c);
  }
  return b.build();
}

Instance max_coverage(const MaxCoverageSpec& spec) {
  if (spec.k < 0) throw ValidationError("negative k");
  const int elements = static_cast<int>(spec.element_weights.size());
  // Each set keyword is heavier than all elements together, so the budget
  // admits at most k of them.
  const Clicks heavy = Clicks::from_micros((elements + 1) * kMicrosPerUnit);
  InstanceBuilder b;
  for (int e = 0; e < elements; ++e) {
    if (spec.element_weights[static_cast<std::size_t>(e)].micros() < 0) {
      throw ValidationError("negative element weight");
    }
    b.add_query(padded("e", e, elements), spec.element_weights[static_cast<std::size_t>(e)], units(1),
                kOneClick, false);
  }
  const int sets = static_cast<int>(spec.sets.size());
  for (int s = 0; s < sets; ++s) {
    const std::string id = padded("s", s, sets);
    b.add_query(id, units(0), units(1), heavy, true);
    for (int e : spec.sets[static_cast<std::size_t>(s)]) {
      if (e < 0 || e >= elements) throw ValidationError("set element out of range");
      b.add_match(id, padded("e", e, elements));
    }
  }
  b.set_budget(Money::from_micros((static_cast<std::int64_t>(spec.k) * (elements + 1) + elements) * kMicrosPerUnit));
  return b.build();
}

Instance simulation(const SimulationSpec& spec) {
  if (spec.keywords < 1) throw ValidationError("simulation needs at least one keyword");
  Rng rng(spec.seed);
  const Money cost = units(5);
  std::vector<double> net(static_cast<std::size_t>(spec.keywords));
  for (double& x : net) x = rng.normal();
  InstanceBuilder b;
  std::vector<std::string> ids;
  for (int i = 0; i < spec.keywords; ++i) {
    ids.push_back(padded("kw", i, spec.keywords));
    b.add_query(ids.back(), cost + Money::from_double(net[static_cast<std::size_t>(i)]), cost, kOneClick, true);
  }
  for (int i = 0; i < spec.keywords; ++i) {
    for (int j = i + 1; j < spec.keywords; ++j) {
      const double a = net[static_cast<std::size_t>(i)];
      const double c = net[static_cast<std::size_t>(j)];
      double pair_net = 0.0;
      switch (rng.integer(0, 2)) {
        case 0: pair_net = 0.5 * (a + c); break;
        case 1: pair_net = std::max(a, c); break;
        default: pair_net = std::min(a, c); break;
      }
      const std::string id = ids[static_cast<std::size_t>(i)] + "_" + ids[static_cast<std::size_t>(j)];
      b.add_query(id, cost + Money::from_double(pair_net), cost, kOneClick, false);
      b.add_match(ids[static_cast<std::size_t>(i)], id);
      b.add_match(ids[static_cast<std::size_t>(j)], id);
    }
  }
  return b.build();
}

}  // namespace

Instance generate(const GeneratorSpec& spec) {
  return std::visit(
      [](const auto& s) -> Instance {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GreedyTrapSpec>) return greedy_trap(s);
        if constexpr (std::is_same_v<T, IntegralityGapSpec>) return integrality_gap(s);
        if constexpr (std::is_same_v<T, IndependentSetSpec>) return independent_set(s);
        if constexpr (std::is_same_v<T, MaxCoverageSpec>) return max_coverage(s);
        if constexpr (std::is_same_v<T, SimulationSpec>) return simulation(s);
      },
      spec);
}

namespace {

std::vector<std::vector<long long>> numeric_lines(std::string_view text, const char* what) {
  std::vector<std::vector<long long>> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<long long> values;
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      long long v = -1;
      try {
        v = std::stoll(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || v < 0) {
        throw ParseError(std::string(what) + " line " + std::to_string(number) + ": bad number '" + token + "'");
      }
      values.push_back(v);
    }
    if (!values.empty()) lines.push_back(std::move(values));
  }
  return lines;
}

}  // namespace

IndependentSetSpec parse_edgelist(std::string_view text) {
  IndependentSetSpec spec;
  long long declared = 0;
  long long seen = 0;
  for (const auto& values : numeric_lines(text, "edge list")) {
    if (values.size() == 1) {
      declared = std::max(declared, values[0]);
    } else if (values.size() == 2) {
      if (values[0] > 1'000'000 || values[1] > 1'000'000) throw ParseError("edge list: node number too large");
      spec.edges.emplace_back(static_cast<int>(values[0]), static_cast<int>(values[1]));
      seen = std::max({seen, values[0] + 1, values[1] + 1});
    } else {
      throw ParseError("edge list: expected 'u v' per line");
    }
  }
  if (declared > 1'000'000) throw ParseError("edge list: node count too large");
  spec.nodes = static_cast<int>(std::max(declared, seen));
  return spec;
}

std::vector<std::vector<int>> parse_set_system(std::string_view text) {
  std::vector<std::vector<int>> sets;
  for (const auto& values : numeric_lines(text, "set system")) {
    std::vector<int> set;
    for (long long v : values) {
      if (v > 1'000'000) throw ParseError("set system: element number too large");
      set.push_back(static_cast<int>(v));
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

}  // namespace broadbid
