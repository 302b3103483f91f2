#pragma once

#include <algorithm>
#include <vector>

#include "tradex/trade_graph.hpp"

namespace tradex {

namespace detail {

// Tarjan's algorithm; components come out in reverse topological order.
inline void tarjan_dfs(const std::vector<std::vector<int>>& adj, int vertex,
                       std::vector<int>& index, std::vector<int>& lowlink,
                       std::vector<int>& stack_pos, std::vector<int>& stack, int& next_index,
                       std::vector<std::vector<int>>& components) {
  const int my_index = next_index++;
  index[vertex] = lowlink[vertex] = my_index;
  stack_pos[vertex] = static_cast<int>(stack.size());
  stack.push_back(vertex);

  for (int succ : adj[vertex]) {
    if (index[succ] == -1) {
      tarjan_dfs(adj, succ, index, lowlink, stack_pos, stack, next_index, components);
      lowlink[vertex] = std::min(lowlink[vertex], lowlink[succ]);
    } else if (stack_pos[succ] != -1) {
      lowlink[vertex] = std::min(lowlink[vertex], index[succ]);
    }
  }

  if (lowlink[vertex] == index[vertex]) {
    const std::size_t base = static_cast<std::size_t>(stack_pos[vertex]);
    std::vector<int> component;
    for (std::size_t i = base; i < stack.size(); ++i) {
      component.push_back(stack[i]);
      stack_pos[stack[i]] = -1;
    }
    stack.resize(base);
    components.push_back(std::move(component));
  }
}

inline std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), lowlink(n, -1), stack_pos(n, -1), stack;
  int next_index = 0;
  std::vector<std::vector<int>> components;
  for (int v = 0; v < n; ++v) {
    if (index[v] == -1) {
      tarjan_dfs(adj, v, index, lowlink, stack_pos, stack, next_index, components);
    }
  }
  return components;
}

}  // namespace detail

// The node sets that actually trade at a step (blocks) and the leftover set
// of nodes that trade nothing (residual). A block has no positive-weight
// path leaving it and is mutually reachable inside; computationally these
// are the sink strongly connected components of the positive-weight digraph.
// A single node can never form a block: self-loops are forbidden, so a
// one-node sink component has no internal edge and trades nothing.
struct AbsorbingPartition {
  std::vector<std::vector<int>> blocks;  // each sorted ascending; blocks ordered by first node
  std::vector<int> residual;             // sorted ascending

  bool in_residual(int v) const {
    return std::binary_search(residual.begin(), residual.end(), v);
  }
};

inline AbsorbingPartition absorbing_sets(const TradeGraph& g) {
  const auto adj = g.positive_adjacency();
  const auto components = detail::strongly_connected_components(adj);

  std::vector<int> component_of(g.size(), -1);
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (int v : components[c]) component_of[v] = static_cast<int>(c);
  }

  AbsorbingPartition partition;
  for (const auto& component : components) {
    bool sink = true;
    for (int v : component) {
      for (int succ : adj[v]) {
        if (component_of[succ] != component_of[v]) {
          sink = false;
          break;
        }
      }
      if (!sink) break;
    }
    if (sink && component.size() >= 2) {
      auto block = component;
      std::sort(block.begin(), block.end());
      partition.blocks.push_back(std::move(block));
    } else {
      for (int v : component) partition.residual.push_back(v);
    }
  }
  std::sort(partition.blocks.begin(), partition.blocks.end());
  std::sort(partition.residual.begin(), partition.residual.end());
  return partition;
}

}  // namespace tradex
