#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tradex/errors.hpp"
#include "tradex/market.hpp"
#include "tradex/solver.hpp"
#include "tradex/trace.hpp"
#include "tradex/trade_graph.hpp"

namespace tradex {

// Snapshot handed to a split rule at the beginning of a step. `remaining`
// holds the tradable endowment amounts; for the time-exchange variant the
// reserved amounts are already subtracted out.
struct BtaState {
  int step = 1;
  std::vector<int> agents;   // remaining agents, ascending
  std::vector<int> objects;  // remaining objects, ascending
  RationalMatrix remaining;  // full matrix, zero outside the remaining sets
  Assignment partial;
  std::vector<int> favorite;  // per agent: pointed object, or -1
  const FeeProblem* problem = nullptr;
};

// Produces the per-step matrix split[agent][object]: the fraction of each
// remaining object's traded amount that its owner gives up. Must be
// column-stochastic over the remaining agents and supported on positive
// remaining ownership.
using LambdaRule = std::function<RationalMatrix(const BtaState&)>;

// Remaining owners of an object give up equal amounts of it.
inline RationalMatrix lambda_equal(const BtaState& state) {
  const int n = state.problem->num_agents(), k = state.problem->num_objects();
  RationalMatrix split(n, RationalVector(k, Rational(0)));
  for (int o : state.objects) {
    long owners = 0;
    for (int i : state.agents) {
      if (state.remaining[i][o].is_positive()) ++owners;
    }
    if (owners == 0) continue;
    const Rational share(1, owners);
    for (int i : state.agents) {
      if (state.remaining[i][o].is_positive()) split[i][o] = share;
    }
  }
  return split;
}

// Remaining owners give up amounts in proportion to their remaining holdings.
inline RationalMatrix lambda_proportional(const BtaState& state) {
  const int n = state.problem->num_agents(), k = state.problem->num_objects();
  RationalMatrix split(n, RationalVector(k, Rational(0)));
  for (int o : state.objects) {
    Rational total(0);
    for (int i : state.agents) total += state.remaining[i][o];
    if (!total.is_positive()) continue;
    for (int i : state.agents) {
      if (state.remaining[i][o].is_positive()) split[i][o] = state.remaining[i][o] / total;
    }
  }
  return split;
}

struct BtaResult {
  Assignment assignment;
  StepTrace trace;
};

namespace detail {

inline void check_split_matrix(const BtaState& state, const RationalMatrix& split) {
  const auto& problem = *state.problem;
  const int n = problem.num_agents(), k = problem.num_objects();
  if (static_cast<int>(split.size()) != n) {
    throw InvalidLambdaError("split rule: wrong number of rows at step " +
                             std::to_string(state.step));
  }
  std::vector<bool> agent_remaining(n, false), object_remaining(k, false);
  for (int i : state.agents) agent_remaining[i] = true;
  for (int o : state.objects) object_remaining[o] = true;

  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(split[i].size()) != k) {
      throw InvalidLambdaError("split rule: wrong row length at step " + std::to_string(state.step));
    }
    for (int o = 0; o < k; ++o) {
      const Rational& w = split[i][o];
      if (w.is_zero()) continue;
      if (w.is_negative() || w > Rational(1)) {
        throw InvalidLambdaError("split rule: weight outside [0,1] at ('" + problem.agents[i] +
                                 "', '" + problem.objects[o] + "'), step " +
                                 std::to_string(state.step));
      }
      if (!agent_remaining[i] || !object_remaining[o] || !state.remaining[i][o].is_positive()) {
        throw InvalidLambdaError("split rule: support outside positive remaining ownership at ('" +
                                 problem.agents[i] + "', '" + problem.objects[o] + "'), step " +
                                 std::to_string(state.step));
      }
    }
  }
  for (int o : state.objects) {
    Rational column_sum(0);
    for (int i : state.agents) column_sum += split[i][o];
    if (column_sum != Rational(1)) {
      throw InvalidLambdaError("split rule: column of '" + problem.objects[o] + "' sums to " +
                               column_sum.str() + " at step " + std::to_string(state.step));
    }
  }
}

struct StepOutcome {
  RationalVector agent_amount;   // indexed by agent
  RationalVector object_amount;  // indexed by object
};

// Builds the step's node system (agents then objects), solves it, applies
// the updates to `state`, and appends a trace record. Object quotas fold
// the per-pair constraints: an object may trade at most
// min_i remaining(i,o) / split(i,o) over its contributing owners.
inline StepOutcome run_step(BtaState& state, const RationalMatrix& split,
                            const RationalVector& agent_quota, StepTrace& trace) {
  const auto& problem = *state.problem;
  const int num_agents = static_cast<int>(state.agents.size());
  const int num_objects = static_cast<int>(state.objects.size());

  std::vector<std::string> node_names;
  node_names.reserve(num_agents + num_objects);
  for (int i : state.agents) node_names.push_back(problem.agents[i]);
  for (int o : state.objects) node_names.push_back(problem.objects[o]);
  TradeGraph graph(std::move(node_names));

  std::vector<int> agent_node(problem.num_agents(), -1), object_node(problem.num_objects(), -1);
  for (int idx = 0; idx < num_agents; ++idx) agent_node[state.agents[idx]] = idx;
  for (int idx = 0; idx < num_objects; ++idx) object_node[state.objects[idx]] = num_agents + idx;

  for (int i : state.agents) {
    if (state.favorite[i] >= 0) {
      graph.add_edge(agent_node[i], object_node[state.favorite[i]], Rational(1));
    }
    graph.set_quota(agent_node[i], agent_quota[i]);
  }
  for (int o : state.objects) {
    Rational quota(0);
    bool have_quota = false;
    for (int i : state.agents) {
      if (!state.remaining[i][o].is_positive()) continue;
      graph.add_edge(object_node[o], agent_node[i], split[i][o]);
      if (split[i][o].is_positive()) {
        const Rational bound = state.remaining[i][o] / split[i][o];
        if (!have_quota || bound < quota) {
          quota = bound;
          have_quota = true;
        }
      }
    }
    graph.set_quota(object_node[o], quota);
  }

  const MaxSolution solution = max_solution(graph);

  StepOutcome outcome;
  outcome.agent_amount.assign(problem.num_agents(), Rational(0));
  outcome.object_amount.assign(problem.num_objects(), Rational(0));

  TraceStep record;
  record.step = state.step;
  record.kind = "solve";
  for (int i : state.agents) record.agents.push_back(problem.agents[i]);
  for (int o : state.objects) record.objects.push_back(problem.objects[o]);
  for (int i : state.agents) {
    if (state.favorite[i] >= 0) {
      record.favorites.emplace_back(problem.agents[i], problem.objects[state.favorite[i]]);
    }
  }
  for (int o : state.objects) {
    for (int i : state.agents) {
      if (!split[i][o].is_zero()) {
        record.split_entries.emplace_back(problem.agents[i], problem.objects[o]);
        record.split_values.push_back(split[i][o]);
      }
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

  for (int i : state.agents) {
    const Rational& gained = solution.x[agent_node[i]];
    outcome.agent_amount[i] = gained;
    if (state.favorite[i] >= 0 && !gained.is_zero()) {
      state.partial.at(i, state.favorite[i]) += gained;
      record.updates.push_back({problem.agents[i], problem.objects[state.favorite[i]], gained});
    }
  }
  for (int o : state.objects) {
    const Rational& traded = solution.x[object_node[o]];
    outcome.object_amount[o] = traded;
    if (traded.is_zero()) continue;
    for (int i : state.agents) {
      if (split[i][o].is_positive()) state.remaining[i][o] -= split[i][o] * traded;
    }
  }

  trace.steps.push_back(std::move(record));
  return outcome;
}

inline std::vector<int> remaining_agents(const RationalMatrix& remaining) {
  std::vector<int> agents;
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    for (const auto& v : remaining[i]) {
      if (v.is_positive()) {
        agents.push_back(static_cast<int>(i));
        break;
      }
    }
  }
  return agents;
}

inline std::vector<int> remaining_objects(const RationalMatrix& remaining,
                                          const std::vector<int>& agents, int num_objects) {
  std::vector<int> objects;
  for (int o = 0; o < num_objects; ++o) {
    for (int i : agents) {
      if (remaining[i][o].is_positive()) {
        objects.push_back(o);
        break;
      }
    }
  }
  return objects;
}

}  // namespace detail

// Balanced trading on fractional endowments: at every step each remaining
// agent points at his favorite remaining object, the split rule says how
// owners share each object's outflow, and the step trades the maximum
// solution of the induced node system. Stops once no object remains.
inline BtaResult run_bta(const FeeProblem& problem, const LambdaRule& rule) {
  ensure_valid(problem.validate(), "run_bta");

  BtaState state;
  state.problem = &problem;
  state.remaining = problem.endowments;
  state.partial = Assignment(problem.num_agents(), problem.num_objects());

  StepTrace trace;
  const int step_bound = problem.num_agents() * problem.num_objects();
  for (int step = 1;; ++step) {
    state.step = step;
    state.agents = detail::remaining_agents(state.remaining);
    state.objects =
        detail::remaining_objects(state.remaining, state.agents, problem.num_objects());
    if (state.objects.empty()) break;
    if (step > step_bound) {
      throw NonTerminationError("run_bta: exceeded " + std::to_string(step_bound) + " steps");
    }

    state.favorite.assign(problem.num_agents(), -1);
    for (int i : state.agents) {
      for (int o : problem.prefs.order[i]) {
        if (std::find(state.objects.begin(), state.objects.end(), o) != state.objects.end()) {
          state.favorite[i] = o;
          break;
        }
      }
    }

    const RationalMatrix split = rule(state);
    detail::check_split_matrix(state, split);

    RationalVector agent_quota(problem.num_agents(), Rational(0));
    for (int i : state.agents) agent_quota[i] = Rational(1) - state.partial.row_sum(i);

    detail::run_step(state, split, agent_quota, trace);
  }
  return {std::move(state.partial), std::move(trace)};
}

// Time-exchange variant: reserved amounts never trade, demand caps restrict
// which service an agent may point at and how much of it he may still
// obtain. Untraded supply (including every reservation) stays with its
// owner in the returned assignment.
inline BtaResult run_time_exchange(const TimeExchangeProblem& problem, const LambdaRule& rule) {
  ensure_valid(problem.validate(), "run_time_exchange");
  const FeeProblem& fee = problem.fee;

  BtaState state;
  state.problem = &fee;
  state.remaining.assign(fee.num_agents(), RationalVector(fee.num_objects(), Rational(0)));
  for (int i = 0; i < fee.num_agents(); ++i) {
    for (int o = 0; o < fee.num_objects(); ++o) {
      state.remaining[i][o] = fee.endowments[i][o] - problem.lower[i][o];
    }
  }
  state.partial = Assignment(fee.num_agents(), fee.num_objects());

  StepTrace trace;
  const int step_bound = 2 * fee.num_agents() * fee.num_objects() + fee.num_agents() +
                         fee.num_objects() + 1;
  for (int step = 1;; ++step) {
    state.step = step;
    state.agents = detail::remaining_agents(state.remaining);
    state.objects = detail::remaining_objects(state.remaining, state.agents, fee.num_objects());
    if (state.objects.empty()) break;
    if (step > step_bound) {
      throw NonTerminationError("run_time_exchange: exceeded " + std::to_string(step_bound) +
                                " steps");
    }

    state.favorite.assign(fee.num_agents(), -1);
    for (int i : state.agents) {
      for (int o : fee.prefs.order[i]) {
        if (state.partial.at(i, o) >= problem.upper[i][o]) continue;
        if (std::find(state.objects.begin(), state.objects.end(), o) != state.objects.end()) {
          state.favorite[i] = o;
          break;
        }
      }
    }

    const RationalMatrix split = rule(state);
    detail::check_split_matrix(state, split);

    RationalVector agent_quota(fee.num_agents(), Rational(0));
    for (int i : state.agents) {
      if (state.favorite[i] >= 0) {
        agent_quota[i] = problem.upper[i][state.favorite[i]] -
                         state.partial.at(i, state.favorite[i]);
      }
    }

    const auto prev_agents = state.agents;
    const auto prev_objects = state.objects;
    const auto outcome = detail::run_step(state, split, agent_quota, trace);

    // Capped demands can leave the step without trades; stop once nothing
    // traded and the removal rules no longer shrink the market.
    bool traded = false;
    for (const auto& v : outcome.object_amount) {
      if (v.is_positive()) traded = true;
    }
    if (!traded) {
      const auto next_agents = detail::remaining_agents(state.remaining);
      const auto next_objects =
          detail::remaining_objects(state.remaining, next_agents, fee.num_objects());
      if (next_agents == prev_agents && next_objects == prev_objects) break;
    }
  }

  // Reserved and untraded services remain with their owners.
  for (int i = 0; i < fee.num_agents(); ++i) {
    for (int o = 0; o < fee.num_objects(); ++o) {
      state.partial.at(i, o) += state.remaining[i][o] + problem.lower[i][o];
    }
  }
  return {std::move(state.partial), std::move(trace)};
}

}  // namespace tradex
