#include "broadbid/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "broadbid/errors.hpp"

namespace broadbid {
namespace {

constexpr Wide kWideMax = static_cast<Wide>(~static_cast<unsigned __int128>(0) >> 1);

Wide checked_add(Wide a, Wide b) {
  Wide out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("flow network capacities exceed the 128-bit range");
  }
  return out;
}

struct ResidualEdge {
  int to;
  int reverse;  // index of the paired edge in adjacency[to]
  Wide residual;
  int arc;      // index into FlowNetwork::arcs, -1 for reverse edges
};

class Dinic {
 public:
  explicit Dinic(const FlowNetwork& net)
      : adjacency_(static_cast<std::size_t>(net.node_count)),
        level_(static_cast<std::size_t>(net.node_count)),
        next_(static_cast<std::size_t>(net.node_count)) {
    for (std::size_t a = 0; a < net.arcs.size(); ++a) {
      const FlowArc& arc = net.arcs[a];
      auto& out = adjacency_[static_cast<std::size_t>(arc.from)];
      auto& in = adjacency_[static_cast<std::size_t>(arc.to)];
      const int forward_slot = static_cast<int>(out.size());
      const int reverse_slot = static_cast<int>(in.size()) + (arc.from == arc.to ? 1 : 0);
      out.push_back({arc.to, reverse_slot, arc.capacity, static_cast<int>(a)});
      in.push_back({arc.from, forward_slot, 0, -1});
    }
  }

  Wide run(int source, int sink) {
    Wide total = 0;
    while (build_levels(source, sink)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (true) {
        const Wide pushed = augment(source, sink, kWideMax);
        if (pushed == 0) break;
        total = checked_add(total, pushed);
      }
    }
    return total;
  }

  std::vector<char> reachable_from(int source) const {
    std::vector<char> seen(adjacency_.size(), 0);
    std::vector<int> stack{source};
    seen[static_cast<std::size_t>(source)] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const ResidualEdge& e : adjacency_[static_cast<std::size_t>(u)]) {
        if (e.residual > 0 && !seen[static_cast<std::size_t>(e.to)]) {
          seen[static_cast<std::size_t>(e.to)] = 1;
          stack.push_back(e.to);
        }
      }
    }
    return seen;
  }

  std::vector<Wide> arc_flows(const FlowNetwork& net) const {
    std::vector<Wide> flow(net.arcs.size(), 0);
    for (const auto& edges : adjacency_) {
      for (const ResidualEdge& e : edges) {
        if (e.arc >= 0) {
          flow[static_cast<std::size_t>(e.arc)] =
              net.arcs[static_cast<std::size_t>(e.arc)].capacity - e.residual;
        }
      }
    }
    return flow;
  }

 private:
  bool build_levels(int source, int sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> frontier;
    level_[static_cast<std::size_t>(source)] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (const ResidualEdge& e : adjacency_[static_cast<std::size_t>(u)]) {
        if (e.residual > 0 && level_[static_cast<std::size_t>(e.to)] < 0) {
          level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(u)] + 1;
          frontier.push(e.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(sink)] >= 0;
  }

  Wide augment(int u, int sink, Wide limit) {
    if (u == sink) return limit;
    auto& edges = adjacency_[static_cast<std::size_t>(u)];
    for (int& i = next_[static_cast<std::size_t>(u)]; i < static_cast<int>(edges.size()); ++i) {
      ResidualEdge& e = edges[static_cast<std::size_t>(i)];
      if (e.residual <= 0 ||
          level_[static_cast<std::size_t>(e.to)] != level_[static_cast<std::size_t>(u)] + 1) {
        continue;
      }
      const Wide pushed = augment(e.to, sink, std::min(limit, e.residual));
      if (pushed > 0) {
        e.residual -= pushed;
        ResidualEdge& back =
            adjacency_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.reverse)];
        back.residual = checked_add(back.residual, pushed);
        return pushed;
      }
    }
    return 0;
  }

  std::vector<std::vector<ResidualEdge>> adjacency_;
  std::vector<int> level_;
  std::vector<int> next_;
};

}  // namespace

FlowNetwork build_flow_graph(const DependencyGraph& dg, const std::vector<Wide>& weights) {
  FlowNetwork net;
  net.node_count = static_cast<int>(weights.size()) + 2;
  Wide positive_total = 0;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(weights.size()); ++q) {
    const Wide w = weights[static_cast<std::size_t>(q)];
    if (w > 0) {
      positive_total = checked_add(positive_total, w);
      net.arcs.push_back({FlowNetwork::query_node(q), FlowNetwork::kSink, w});
    } else {
      net.arcs.push_back({FlowNetwork::kSource, FlowNetwork::query_node(q), -w});
    }
  }
  net.inf_surrogate = checked_add(positive_total, 1);
  for (const auto& [p, q] : dg.pairs) {
    if (p == q) continue;
    net.arcs.push_back({FlowNetwork::query_node(q), FlowNetwork::query_node(p), net.inf_surrogate});
  }
  Wide all = 0;
  for (const FlowArc& arc : net.arcs) all = checked_add(all, arc.capacity);
  return net;
}

FlowNetwork build_flow_graph(const Instance& inst, const DependencyGraph& dg) {
  std::vector<Wide> weights(inst.size());
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    weights[static_cast<std::size_t>(q)] = inst.weight(q);
  }
  return build_flow_graph(dg, weights);
}

Wide cut_capacity(const FlowNetwork& net, const std::vector<char>& source_side) {
  Wide total = 0;
  for (const FlowArc& arc : net.arcs) {
    if (source_side[static_cast<std::size_t>(arc.from)] &&
        !source_side[static_cast<std::size_t>(arc.to)]) {
      total = checked_add(total, arc.capacity);
    }
  }
  return total;
}

CutResult max_flow(const FlowNetwork& net) {
  for (const FlowArc& arc : net.arcs) {
    if (arc.capacity < 0) throw std::invalid_argument("negative arc capacity");
  }
  Dinic dinic(net);
  CutResult result;
  result.flow_value = dinic.run(FlowNetwork::kSource, FlowNetwork::kSink);
  result.source_side = dinic.reachable_from(FlowNetwork::kSource);
  result.arc_flow = dinic.arc_flows(net);
  if (cut_capacity(net, result.source_side) != result.flow_value) {
    throw std::logic_error("max-flow value differs from the recovered cut capacity");
  }
  return result;
}

std::string to_dimacs(const FlowNetwork& net) {
  std::ostringstream out;
  out << "c closure network\n";
  out << "p max " << net.node_count << ' ' << net.arcs.size() << '\n';
  out << "n " << FlowNetwork::kSource + 1 << " s\n";
  out << "n " << FlowNetwork::kSink + 1 << " t\n";
  for (const FlowArc& arc : net.arcs) {
    out << "a " << arc.from + 1 << ' ' << arc.to + 1 << ' ' << wide_to_string(arc.capacity) << '\n';
  }
  return out.str();
}

}  // namespace broadbid
