#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tradex/errors.hpp"
#include "tradex/market.hpp"
#include "tradex/properties.hpp"
#include "tradex/solver.hpp"
#include "tradex/trace.hpp"
#include "tradex/trade_graph.hpp"

namespace tradex {

class NotExAnteStableError : public std::runtime_error {
 public:
  explicit NotExAnteStableError(const std::string& what) : std::runtime_error(what) {}
};

// Envy structure over holdings: one node per positive assignment entry.
// Node (i,o) envies (j,o') when i != j and i strictly prefers o' to o; the
// edge exists only for enviers whose agent has weakly highest priority at
// o' among all enviers, so equal-priority enviers all point.
struct EnvyGraph {
  std::vector<std::pair<int, int>> nodes;  // (agent, object)
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> in;

  int size() const { return static_cast<int>(nodes.size()); }
  bool empty() const { return nodes.empty(); }
};

inline EnvyGraph build_envy_graph(const Assignment& p, const WeakPriorities& priorities,
                                  const StrictPreferences& prefs) {
  EnvyGraph g;
  for (int i = 0; i < p.num_agents(); ++i) {
    for (int o = 0; o < p.num_objects(); ++o) {
      if (p.at(i, o).is_positive()) g.nodes.emplace_back(i, o);
    }
  }
  g.out.resize(g.nodes.size());
  g.in.resize(g.nodes.size());

  for (int target = 0; target < g.size(); ++target) {
    const auto [holder, held] = g.nodes[target];
    // Enviers of (holder, held) and the best agent priority class among them.
    std::vector<int> enviers;
    int best_rank = -1;
    for (int source = 0; source < g.size(); ++source) {
      const auto [agent, object] = g.nodes[source];
      if (agent == holder || !prefs.prefers(agent, held, object)) continue;
      enviers.push_back(source);
      const int rank = priorities.rank_of[held][agent];
      if (best_rank == -1 || rank < best_rank) best_rank = rank;
    }
    for (int source : enviers) {
      if (priorities.rank_of[held][g.nodes[source].first] == best_rank) {
        g.out[source].push_back(target);
        g.in[target].push_back(source);
      }
    }
  }
  return g;
}

// Iteratively deletes nodes lacking an outgoing or incoming edge; what
// survives is the subgraph in which every node lies on a cycle.
inline EnvyGraph trim_to_cyclic_core(const EnvyGraph& g) {
  std::vector<bool> alive(g.nodes.size(), true);
  std::vector<int> out_degree(g.nodes.size()), in_degree(g.nodes.size());
  std::vector<int> queue;
  for (int v = 0; v < g.size(); ++v) {
    out_degree[v] = static_cast<int>(g.out[v].size());
    in_degree[v] = static_cast<int>(g.in[v].size());
    if (out_degree[v] == 0 || in_degree[v] == 0) queue.push_back(v);
  }
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    if (!alive[v]) continue;
    alive[v] = false;
    for (int succ : g.out[v]) {
      if (alive[succ] && --in_degree[succ] == 0) queue.push_back(succ);
    }
    for (int pred : g.in[v]) {
      if (alive[pred] && --out_degree[pred] == 0) queue.push_back(pred);
    }
  }

  EnvyGraph core;
  std::vector<int> new_index(g.nodes.size(), -1);
  for (int v = 0; v < g.size(); ++v) {
    if (alive[v]) {
      new_index[v] = core.size();
      core.nodes.push_back(g.nodes[v]);
    }
  }
  core.out.resize(core.nodes.size());
  core.in.resize(core.nodes.size());
  for (int v = 0; v < g.size(); ++v) {
    if (!alive[v]) continue;
    for (int succ : g.out[v]) {
      if (alive[succ]) {
        core.out[new_index[v]].push_back(new_index[succ]);
        core.in[new_index[succ]].push_back(new_index[v]);
      }
    }
  }
  return core;
}

struct FdatResult {
  Assignment assignment;
  StepTrace trace;
};

// Trading stage over an ex-ante stable assignment: rebuild the envy graph,
// trim to its cyclic core, trade the maximum solution with every node
// splitting its demand equally over the nodes it points to, and repeat
// until the core is empty. An empty final core certifies constrained
// efficiency among ex-ante stable assignments.
inline FdatResult run_fdat_trading(const FdatInput& input) {
  const auto stability = check_ex_ante_stability(input.assignment, input.priorities, input.prefs);
  if (!stability.stable) {
    std::string msg = "run_fdat_trading: input assignment is not ex-ante stable:";
    for (const auto& w : stability.witnesses) {
      msg += " [agent '" + input.agents[w.agent] + "' beats '" + input.agents[w.other] +
             "' at '" + input.objects[w.object] + "' while consuming '" +
             input.objects[w.worse_object] + "']";
    }
    throw NotExAnteStableError(msg);
  }

  Assignment p = input.assignment;
  StepTrace trace;
  const int step_bound = input.num_agents() * input.num_objects();
  for (int step = 1;; ++step) {
    const EnvyGraph core = trim_to_cyclic_core(build_envy_graph(p, input.priorities, input.prefs));
    if (core.empty()) break;
    if (step > step_bound) {
      throw NonTerminationError("run_fdat_trading: exceeded " + std::to_string(step_bound) +
                                " steps");
    }

    std::vector<std::string> node_names;
    node_names.reserve(core.nodes.size());
    for (const auto& [agent, object] : core.nodes) {
      node_names.push_back(input.agents[agent] + ":" + input.objects[object]);
    }
    TradeGraph graph(std::move(node_names));
    for (int v = 0; v < core.size(); ++v) {
      const Rational share(1, static_cast<long>(core.out[v].size()));
      for (int succ : core.out[v]) graph.add_edge(v, succ, share);
      graph.set_quota(v, p.at(core.nodes[v].first, core.nodes[v].second));
    }

    const MaxSolution solution = max_solution(graph);

    TraceStep record;
    record.step = step;
    record.kind = "solve";
    for (int v = 0; v < core.size(); ++v) {
      record.agents.push_back(input.agents[core.nodes[v].first]);
      record.objects.push_back(input.objects[core.nodes[v].second]);
    }
    for (int v = 0; v < core.size(); ++v) {
      const Rational share(1, static_cast<long>(core.out[v].size()));
      for (int succ : core.out[v]) {
        record.split_entries.emplace_back(graph.name(succ), graph.name(v));
        record.split_values.push_back(share);
      }
    }
    for (int v = 0; v < graph.size(); ++v) record.quotas.emplace_back(graph.name(v), graph.quota(v));
    for (int v = 0; v < graph.size(); ++v) record.solution.emplace_back(graph.name(v), solution.x[v]);
    for (const auto& block : solution.partition.blocks) {
      std::vector<std::string> names;
      for (int v : block) names.push_back(graph.name(v));
      record.blocks.push_back(std::move(names));
    }
    for (int v : solution.partition.residual) record.residual.push_back(graph.name(v));
    for (const auto& block : solution.blocks) {
      for (int v : block.binding) record.binding.push_back(graph.name(v));
    }

    // An agent's gain at an object aggregates the equal splits of all his
    // nodes pointing at holders of that object; his loss at an object is
    // that node's own traded amount.
    RationalMatrix delta(p.num_agents(), RationalVector(p.num_objects(), Rational(0)));
    for (int v = 0; v < core.size(); ++v) {
      if (solution.x[v].is_zero()) continue;
      const auto [agent, object] = core.nodes[v];
      const Rational share = solution.x[v] / Rational(static_cast<long>(core.out[v].size()));
      for (int succ : core.out[v]) delta[agent][core.nodes[succ].second] += share;
      delta[agent][object] -= solution.x[v];
    }
    for (int i = 0; i < p.num_agents(); ++i) {
      for (int o = 0; o < p.num_objects(); ++o) {
        if (delta[i][o].is_zero()) continue;
        p.at(i, o) += delta[i][o];
        record.updates.push_back({input.agents[i], input.objects[o], delta[i][o]});
      }
    }

    trace.steps.push_back(std::move(record));
  }
  return {std::move(p), std::move(trace)};
}

}  // namespace tradex
