#pragma once

#include <string>
#include <vector>

#include "broadbid/fixed_point.hpp"
#include "broadbid/instance.hpp"

namespace broadbid {

struct FlowArc {
  int from = 0;
  int to = 0;
  Wide capacity = 0;
};

// Node 0 is the source, node 1 the sink, node 2 + q the query q.
struct FlowNetwork {
  static constexpr int kSource = 0;
  static constexpr int kSink = 1;
  static constexpr int query_node(QueryIndex q) { return q + 2; }

  int node_count = 2;
  std::vector<FlowArc> arcs;
  // Exceeds every finite cut; used in place of infinite capacities.
  Wide inf_surrogate = 1;
};

struct CutResult {
  Wide flow_value = 0;
  std::vector<char> source_side;  // indexed by node
  std::vector<Wide> arc_flow;     // index-aligned with FlowNetwork::arcs

  bool on_source_side(int node) const { return source_side[static_cast<std::size_t>(node)] != 0; }
};

// Closure network: s->q with |w(q)| for w(q) <= 0, q->t with w(q) for
// w(q) > 0, and q->p with inf_surrogate for every non-reflexive (p, q) in C.
// The sink side of any finite cut is closed under C and has utility
// sum_{Q+} w - cut.
FlowNetwork build_flow_graph(const Instance& inst, const DependencyGraph& dg);

// Same construction over caller-supplied weights (one per query).
FlowNetwork build_flow_graph(const DependencyGraph& dg, const std::vector<Wide>& weights);

// Dinic. The returned source side is the set of nodes reachable from the
// source in the final residual graph. Throws OverflowError when capacity sums
// leave the 128-bit range.
CutResult max_flow(const FlowNetwork& net);

Wide cut_capacity(const FlowNetwork& net, const std::vector<char>& source_side);

// DIMACS max-flow text ("p max", "n", "a" lines; nodes 1-based).
std::string to_dimacs(const FlowNetwork& net);

}  // namespace broadbid
