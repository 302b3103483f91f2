#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "tradex/errors.hpp"
#include "tradex/market.hpp"
#include "tradex/solver.hpp"
#include "tradex/trace.hpp"
#include "tradex/trade_graph.hpp"

namespace tradex {

struct PtaResult {
  Assignment assignment;
  StepTrace trace;
};

// Priority trading: at every step each remaining object is traded by its
// highest-priority remaining agents in equal shares, while agents point at
// their favorite remaining object. Satisfied agents drop out and the next
// indifference class takes over their objects.
inline PtaResult run_pta(const PbaProblem& problem) {
  ensure_valid(problem.validate(), "run_pta");
  const int n = problem.num_agents(), k = problem.num_objects();

  Assignment assignment(n, k);
  RationalVector consumed_agent(n, Rational(0));
  RationalVector consumed_object(k, Rational(0));
  StepTrace trace;

  const int step_bound = n * k;
  for (int step = 1;; ++step) {
    std::vector<int> agents, objects;
    for (int i = 0; i < n; ++i) {
      if (consumed_agent[i] < Rational(1)) agents.push_back(i);
    }
    for (int o = 0; o < k; ++o) {
      if (consumed_object[o] < Rational(problem.copies[o])) objects.push_back(o);
    }
    if (agents.empty() || objects.empty()) break;
    if (step > step_bound) {
      throw NonTerminationError("run_pta: exceeded " + std::to_string(step_bound) + " steps");
    }

    std::vector<int> favorite(n, -1);
    for (int i : agents) {
      for (int o : problem.prefs.order[i]) {
        if (std::find(objects.begin(), objects.end(), o) != objects.end()) {
          favorite[i] = o;
          break;
        }
      }
    }

    // Highest remaining indifference class per object.
    std::vector<std::vector<int>> top_class(k);
    for (int o : objects) {
      for (const auto& cls : problem.priorities.classes[o]) {
        for (int i : cls) {
          if (consumed_agent[i] < Rational(1)) top_class[o].push_back(i);
        }
        if (!top_class[o].empty()) break;
      }
    }

    const int num_agent_nodes = static_cast<int>(agents.size());
    std::vector<std::string> node_names;
    for (int i : agents) node_names.push_back(problem.agents[i]);
    for (int o : objects) node_names.push_back(problem.objects[o]);
    TradeGraph graph(std::move(node_names));

    std::vector<int> agent_node(n, -1), object_node(k, -1);
    for (int idx = 0; idx < num_agent_nodes; ++idx) agent_node[agents[idx]] = idx;
    for (std::size_t idx = 0; idx < objects.size(); ++idx) {
      object_node[objects[idx]] = num_agent_nodes + static_cast<int>(idx);
    }

    for (int i : agents) {
      graph.add_edge(agent_node[i], object_node[favorite[i]], Rational(1));
      graph.set_quota(agent_node[i], Rational(1) - consumed_agent[i]);
    }
    for (int o : objects) {
      const Rational share(1, static_cast<long>(top_class[o].size()));
      for (int i : top_class[o]) graph.add_edge(object_node[o], agent_node[i], share);
      graph.set_quota(object_node[o], Rational(problem.copies[o]) - consumed_object[o]);
    }

    const MaxSolution solution = max_solution(graph);

    TraceStep record;
    record.step = step;
    record.kind = "solve";
    for (int i : agents) record.agents.push_back(problem.agents[i]);
    for (int o : objects) record.objects.push_back(problem.objects[o]);
    for (int i : agents) record.favorites.emplace_back(problem.agents[i], problem.objects[favorite[i]]);
    for (int o : objects) {
      const Rational share(1, static_cast<long>(top_class[o].size()));
      for (int i : top_class[o]) {
        record.split_entries.emplace_back(problem.agents[i], problem.objects[o]);
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

    for (int i : agents) {
      const Rational& gained = solution.x[agent_node[i]];
      if (!gained.is_zero()) {
        assignment.at(i, favorite[i]) += gained;
        consumed_agent[i] += gained;
        record.updates.push_back({problem.agents[i], problem.objects[favorite[i]], gained});
      }
    }
    for (int o : objects) consumed_object[o] += solution.x[object_node[o]];

    trace.steps.push_back(std::move(record));
  }
  return {std::move(assignment), std::move(trace)};
}

}  // namespace tradex
