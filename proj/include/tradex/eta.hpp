#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tradex/errors.hpp"
#include "tradex/market.hpp"
#include "tradex/trace.hpp"

namespace tradex {

// Eating-phase rate computation was asked for while a tenant cycle exists;
// cycles must be cleared first.
class CyclePresentError : public std::runtime_error {
 public:
  explicit CyclePresentError(const std::string& what) : std::runtime_error(what) {}
};

// Step snapshot for house allocation with existing tenants. The pointing
// structure is functional: each remaining agent points at his favorite
// remaining object, each remaining privately-owned object points at its
// owner while the owner remains.
struct EtaState {
  int step = 1;
  std::vector<int> agents;   // I(d), ascending
  std::vector<int> objects;  // O(d), ascending
  RationalVector agent_residual;
  RationalVector object_residual;
  std::vector<int> favorite;  // per agent: pointed object, or -1 if removed
  const HetProblem* problem = nullptr;

  bool object_remaining(int o) const {
    return std::binary_search(objects.begin(), objects.end(), o);
  }
  bool agent_remaining(int i) const {
    return std::binary_search(agents.begin(), agents.end(), i);
  }
};

// A trading cycle alternates agents and objects: agents[j] points at
// objects[j], which is privately owned by agents[(j+1) % size]. A tenant
// demanding his own house forms the one-agent cycle (i, o_i).
struct EtaCycle {
  std::vector<int> agents;
  std::vector<int> objects;
};

inline std::vector<EtaCycle> detect_tenant_cycles(const EtaState& state) {
  const auto& problem = *state.problem;
  const int n = problem.num_agents();

  // next[i]: the agent reached by following i's favorite to its live owner.
  std::vector<int> next(n, -1);
  for (int i : state.agents) {
    const int o = state.favorite[i];
    if (o < 0) continue;
    const int owner = problem.owner_of[o];
    if (owner >= 0 && state.agent_remaining(owner)) next[i] = owner;
  }

  std::vector<EtaCycle> cycles;
  std::vector<int> color(n, 0);  // 0 unvisited, 1 in progress, 2 done
  for (int start : state.agents) {
    if (color[start] != 0) continue;
    std::vector<int> path;
    int v = start;
    while (v != -1 && color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = next[v];
    }
    if (v != -1 && color[v] == 1) {
      EtaCycle cycle;
      const auto it = std::find(path.begin(), path.end(), v);
      for (auto p = it; p != path.end(); ++p) {
        cycle.agents.push_back(*p);
        cycle.objects.push_back(state.favorite[*p]);
      }
      cycles.push_back(std::move(cycle));
    }
    for (int u : path) color[u] = 2;
  }
  return cycles;
}

// Consumption rates for an eating phase: newcomers eat at rate one, a
// tenant eats at one plus the total rate currently eating his house.
// Requires a cycle-free pointing structure.
inline RationalVector eating_rates(const EtaState& state) {
  const auto& problem = *state.problem;
  const int n = problem.num_agents();

  std::vector<std::vector<int>> eaters_of_house(n);  // tenant -> agents eating his house
  for (int i : state.agents) {
    const int o = state.favorite[i];
    if (o < 0) continue;
    const int owner = problem.owner_of[o];
    if (owner >= 0 && state.agent_remaining(owner)) eaters_of_house[owner].push_back(i);
  }

  RationalVector rate(n, Rational(0));
  std::vector<int> color(n, 0);
  auto compute = [&](auto&& self, int i) -> const Rational& {
    if (color[i] == 1) {
      throw CyclePresentError("eating_rates: tenant cycle through '" + problem.agents[i] + "'");
    }
    if (color[i] == 2) return rate[i];
    color[i] = 1;
    Rational r(1);
    for (int eater : eaters_of_house[i]) r += self(self, eater);
    rate[i] = r;
    color[i] = 2;
    return rate[i];
  };
  for (int i : state.agents) compute(compute, i);
  return rate;
}

struct EtaResult {
  Assignment assignment;
  StepTrace trace;
};

// Instant trading among tenant cycles, rate-based simultaneous eating in
// between. A step is one cycle-clearing batch or one maximal eating
// interval; ties between stopping events resolve simultaneously.
inline EtaResult run_eta(const HetProblem& problem) {
  ensure_valid(problem.validate(), "run_eta");
  const int n = problem.num_agents(), k = problem.num_objects();

  EtaState state;
  state.problem = &problem;
  state.agent_residual.assign(n, Rational(1));
  state.object_residual.assign(k, Rational(1));

  Assignment assignment(n, k);
  StepTrace trace;

  const int step_bound = std::max(n * k, n + k) + 1;
  for (int step = 1;; ++step) {
    state.step = step;
    state.agents.clear();
    state.objects.clear();
    for (int i = 0; i < n; ++i) {
      if (state.agent_residual[i].is_positive()) state.agents.push_back(i);
    }
    for (int o = 0; o < k; ++o) {
      if (state.object_residual[o].is_positive()) state.objects.push_back(o);
    }
    if (state.agents.empty() || state.objects.empty()) break;
    if (step > step_bound) {
      throw NonTerminationError("run_eta: exceeded " + std::to_string(step_bound) + " phases");
    }

    state.favorite.assign(n, -1);
    for (int i : state.agents) {
      for (int o : problem.prefs.order[i]) {
        if (state.object_remaining(o)) {
          state.favorite[i] = o;
          break;
        }
      }
    }

    TraceStep record;
    record.step = step;
    for (int i : state.agents) record.agents.push_back(problem.agents[i]);
    for (int o : state.objects) record.objects.push_back(problem.objects[o]);
    for (int i : state.agents) {
      record.favorites.emplace_back(problem.agents[i], problem.objects[state.favorite[i]]);
    }
    for (int i : state.agents) {
      record.quotas.emplace_back(problem.agents[i], state.agent_residual[i]);
    }
    for (int o : state.objects) {
      record.quotas.emplace_back(problem.objects[o], state.object_residual[o]);
    }

    const auto cycles = detect_tenant_cycles(state);
    if (!cycles.empty()) {
      record.kind = "cycles";
      for (const auto& cycle : cycles) {
        Rational amount = state.agent_residual[cycle.agents.front()];
        for (int i : cycle.agents) amount = min(amount, state.agent_residual[i]);
        for (int o : cycle.objects) amount = min(amount, state.object_residual[o]);

        std::vector<std::string> names;
        for (std::size_t j = 0; j < cycle.agents.size(); ++j) {
          names.push_back(problem.agents[cycle.agents[j]]);
          names.push_back(problem.objects[cycle.objects[j]]);
        }
        record.blocks.push_back(std::move(names));

        for (std::size_t j = 0; j < cycle.agents.size(); ++j) {
          const int i = cycle.agents[j], o = cycle.objects[j];
          assignment.at(i, o) += amount;
          state.agent_residual[i] -= amount;
          state.object_residual[o] -= amount;
          record.updates.push_back({problem.agents[i], problem.objects[o], amount});
          record.solution.emplace_back(problem.agents[i], amount);
        }
      }
    } else {
      record.kind = "eating";
      const RationalVector rate = eating_rates(state);
      RationalVector object_rate(k, Rational(0));
      for (int i : state.agents) object_rate[state.favorite[i]] += rate[i];

      bool have_duration = false;
      Rational duration(0);
      for (int i : state.agents) {
        const Rational stop = state.agent_residual[i] / rate[i];
        if (!have_duration || stop < duration) {
          duration = stop;
          have_duration = true;
        }
      }
      for (int o : state.objects) {
        if (!object_rate[o].is_positive()) continue;
        const Rational stop = state.object_residual[o] / object_rate[o];
        if (!have_duration || stop < duration) {
          duration = stop;
          have_duration = true;
        }
      }
      record.duration = duration;

      for (int i : state.agents) {
        record.split_entries.emplace_back(problem.agents[i], problem.objects[state.favorite[i]]);
        record.split_values.push_back(rate[i]);
        const Rational eaten = rate[i] * duration;
        assignment.at(i, state.favorite[i]) += eaten;
        state.agent_residual[i] -= eaten;
        record.updates.push_back({problem.agents[i], problem.objects[state.favorite[i]], eaten});
        record.solution.emplace_back(problem.agents[i], eaten);
      }
      for (int o : state.objects) {
        if (object_rate[o].is_positive()) {
          state.object_residual[o] -= object_rate[o] * duration;
          record.solution.emplace_back(problem.objects[o], object_rate[o] * duration);
        }
      }
    }

    trace.steps.push_back(std::move(record));
  }
  return {std::move(assignment), std::move(trace)};
}

}  // namespace tradex
