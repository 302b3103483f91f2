#pragma once

// Independent reference implementations used to cross-check the solver and
// the mechanisms. Nothing here may share algorithmic code with the solver
// or mechanism headers; only the numeric and instance types are common.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tradex/market.hpp"
#include "tradex/rational.hpp"
#include "tradex/trade_graph.hpp"

namespace tradex::oracles {

class TiesPresentError : public std::runtime_error {
 public:
  explicit TiesPresentError(const std::string& what) : std::runtime_error(what) {}
};

class TooManyObjectsError : public std::runtime_error {
 public:
  explicit TooManyObjectsError(const std::string& what) : std::runtime_error(what) {}
};

// Textbook probabilistic serial: agents eat their favorite available object
// at unit rate; phases end when an object runs out or an agent is full.
inline Assignment run_ps(const HouseAllocationProblem& problem) {
  const int n = problem.num_agents(), k = problem.num_objects();
  Assignment assignment(n, k);
  RationalVector supply(k, Rational(1));
  RationalVector hunger(n, Rational(1));

  while (true) {
    std::vector<int> eaters_of(k);
    std::vector<int> favorite(n, -1);
    bool anyone_eating = false;
    for (int i = 0; i < n; ++i) {
      if (!hunger[i].is_positive()) continue;
      for (int o : problem.prefs.order[i]) {
        if (supply[o].is_positive()) {
          favorite[i] = o;
          ++eaters_of[o];
          anyone_eating = true;
          break;
        }
      }
    }
    if (!anyone_eating) break;

    bool have_duration = false;
    Rational duration(0);
    for (int i = 0; i < n; ++i) {
      if (favorite[i] == -1) continue;
      if (!have_duration || hunger[i] < duration) {
        duration = hunger[i];
        have_duration = true;
      }
    }
    for (int o = 0; o < k; ++o) {
      if (eaters_of[o] == 0) continue;
      const Rational stop = supply[o] / Rational(eaters_of[o]);
      if (!have_duration || stop < duration) {
        duration = stop;
        have_duration = true;
      }
    }

    for (int i = 0; i < n; ++i) {
      if (favorite[i] == -1) continue;
      assignment.at(i, favorite[i]) += duration;
      hunger[i] -= duration;
    }
    for (int o = 0; o < k; ++o) {
      if (eaters_of[o] > 0) supply[o] -= Rational(eaters_of[o]) * duration;
    }
  }
  return assignment;
}

// Classic top trading cycles for strict priorities with copy counters.
// Objects point at their highest-priority remaining agent, agents at their
// favorite remaining object; the functional graph always contains cycles,
// which clear one whole copy per member agent.
inline Assignment run_ttc(const PbaProblem& problem) {
  for (int o = 0; o < problem.num_objects(); ++o) {
    for (const auto& cls : problem.priorities.classes[o]) {
      if (cls.size() > 1) {
        throw TiesPresentError("run_ttc: priority ties at object '" + problem.objects[o] + "'");
      }
    }
  }
  const int n = problem.num_agents(), k = problem.num_objects();
  Assignment assignment(n, k);
  std::vector<long> copies_left = problem.copies;
  std::vector<bool> agent_done(n, false);

  while (true) {
    std::vector<int> favorite(n, -1), pointed_agent(k, -1);
    bool agents_left = false, objects_left = false;
    for (int o = 0; o < k; ++o) {
      if (copies_left[o] <= 0) continue;
      objects_left = true;
      for (const auto& cls : problem.priorities.classes[o]) {
        if (!agent_done[cls.front()]) {
          pointed_agent[o] = cls.front();
          break;
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      if (agent_done[i]) continue;
      agents_left = true;
      for (int o : problem.prefs.order[i]) {
        if (copies_left[o] > 0) {
          favorite[i] = o;
          break;
        }
      }
    }
    if (!agents_left || !objects_left) break;

    // Walk the functional graph agent -> favorite -> pointed agent to find
    // a cycle, then clear every cycle found this round.
    std::vector<int> color(n, 0);
    bool cleared = false;
    for (int start = 0; start < n; ++start) {
      if (agent_done[start] || color[start] != 0) continue;
      std::vector<int> path;
      int v = start;
      while (v != -1 && !agent_done[v] && color[v] == 0) {
        color[v] = 1;
        path.push_back(v);
        v = pointed_agent[favorite[v]];
      }
      if (v != -1 && !agent_done[v] && color[v] == 1) {
        for (auto it = std::find(path.begin(), path.end(), v); it != path.end(); ++it) {
          assignment.at(*it, favorite[*it]) += Rational(1);
          --copies_left[favorite[*it]];
          agent_done[*it] = true;
        }
        cleared = true;
      }
      for (int u : path) color[u] = 2;
    }
    if (!cleared) {
      throw std::logic_error("run_ttc: no cycle in a total functional graph");
    }
  }
  return assignment;
}

inline Assignment run_ttc(const HousingMarketProblem& problem) {
  ensure_valid(problem.validate(), "run_ttc");
  PbaProblem pba{problem.agents, problem.objects, std::vector<long>(problem.objects.size(), 1),
                 {}, problem.prefs};
  // Owner first, everyone else in index order below.
  std::vector<std::vector<std::vector<int>>> classes(problem.num_objects());
  std::vector<int> owner(problem.num_objects(), -1);
  for (int i = 0; i < problem.num_agents(); ++i) owner[problem.owned_object[i]] = i;
  for (int o = 0; o < problem.num_objects(); ++o) {
    classes[o].push_back({owner[o]});
    for (int i = 0; i < problem.num_agents(); ++i) {
      if (i != owner[o]) classes[o].push_back({i});
    }
  }
  pba.priorities = WeakPriorities::from_classes(std::move(classes), problem.num_agents());
  return run_ttc(pba);
}

struct MaxSolutionCheck {
  bool ok = true;
  std::vector<std::string> reasons;
};

// Accepts a vector iff it is the maximum fixed point of the graph's split
// matrix within the quota box. Blocks are recomputed from scratch by
// all-pairs transitive closure, deliberately avoiding the solver's
// component machinery.
inline MaxSolutionCheck verify_max_solution(const TradeGraph& g, const RationalVector& x) {
  MaxSolutionCheck check;
  auto fail = [&check](std::string why) {
    check.ok = false;
    check.reasons.push_back(std::move(why));
  };
  const int n = g.size();
  if (static_cast<int>(x.size()) != n) {
    fail("dimension mismatch");
    return check;
  }

  for (int v = 0; v < n; ++v) {
    Rational inflow(0);
    for (int u = 0; u < n; ++u) inflow += g.lambda(v, u) * x[u];
    if (inflow != x[v]) fail("not a fixed point at '" + g.name(v) + "'");
    if (x[v].is_negative()) fail("negative amount at '" + g.name(v) + "'");
    if (x[v] > g.quota(v)) fail("quota exceeded at '" + g.name(v) + "'");
  }

  // reach[u][v]: directed path of positive split weights from u to v.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) reach[u][v] = g.lambda(v, u).is_positive();
  }
  for (int mid = 0; mid < n; ++mid) {
    for (int u = 0; u < n; ++u) {
      if (!reach[u][mid]) continue;
      for (int v = 0; v < n; ++v) {
        if (reach[mid][v]) reach[u][v] = true;
      }
    }
  }

  std::vector<bool> in_some_block(n, false);
  std::vector<std::vector<int>> blocks;
  std::vector<bool> claimed(n, false);
  for (int v = 0; v < n; ++v) {
    if (claimed[v] || !reach[v][v]) continue;
    std::vector<int> candidate;
    for (int u = 0; u < n; ++u) {
      if (u == v || (reach[v][u] && reach[u][v])) candidate.push_back(u);
    }
    bool escapes = false;
    for (int u : candidate) {
      for (int w = 0; w < n; ++w) {
        if (reach[u][w] && !std::binary_search(candidate.begin(), candidate.end(), w)) {
          escapes = true;
        }
      }
    }
    if (!escapes && candidate.size() >= 2) {
      for (int u : candidate) {
        claimed[u] = true;
        in_some_block[u] = true;
      }
      blocks.push_back(std::move(candidate));
    } else {
      claimed[v] = true;
    }
  }

  for (const auto& block : blocks) {
    bool binding = false;
    for (int v : block) {
      if (x[v] == g.quota(v)) binding = true;
    }
    if (!binding) {
      fail("no binding quota inside block containing '" + g.name(block.front()) + "'");
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!in_some_block[v] && !x[v].is_zero()) {
      fail("nonzero amount outside every block at '" + g.name(v) + "'");
    }
  }
  return check;
}

struct ReplicationSpec {
  FeeProblem base;
  int factor = 1;
};

// n disjoint copies of every agent; object supplies scale with n while the
// set of endowment types stays fixed.
inline FeeProblem replicate_market(const FeeProblem& base, int factor) {
  if (factor <= 1) return base;
  FeeProblem out;
  out.objects = base.objects;
  std::vector<std::vector<int>> order;
  for (int i = 0; i < base.num_agents(); ++i) {
    for (int c = 1; c <= factor; ++c) {
      out.agents.push_back(base.agents[i] + "#" + std::to_string(c));
      out.endowments.push_back(base.endowments[i]);
      order.push_back(base.prefs.order[i]);
    }
  }
  out.prefs = StrictPreferences::from_order(std::move(order), base.num_objects());
  return out;
}

inline FeeProblem replicate_market(const ReplicationSpec& spec) {
  return replicate_market(spec.base, spec.factor);
}

struct ManipulationResult {
  int agent = -1;
  Lottery truthful;
  Lottery best_deviation;
  std::vector<int> best_report;  // preference order achieving the gain
  Rational epsilon{0};           // largest prefix gain over truth, floored at zero
};

// Exhaustive deviation search for one agent: every strict order over the
// objects is tried as his report while everyone else stays truthful. The
// gain of a report is the largest prefix advantage over the truthful
// lottery measured in the agent's true preference order.
template <typename Mechanism>
ManipulationResult manipulation_gain(const FeeProblem& problem, const Mechanism& mechanism,
                                     int agent) {
  if (problem.num_objects() > 6) {
    throw TooManyObjectsError("manipulation_gain: report enumeration capped at 6 objects");
  }
  ManipulationResult result;
  result.agent = agent;
  result.truthful = mechanism(problem).row(agent);
  result.best_deviation = result.truthful;
  result.best_report = problem.prefs.order[agent];

  std::vector<int> report(problem.num_objects());
  for (int o = 0; o < problem.num_objects(); ++o) report[o] = o;
  const auto& truth_order = problem.prefs.order[agent];

  do {
    if (report == truth_order) continue;
    FeeProblem misreported = problem;
    auto order = misreported.prefs.order;
    order[agent] = report;
    misreported.prefs = StrictPreferences::from_order(std::move(order), problem.num_objects());

    const Lottery deviation = mechanism(misreported).row(agent);
    Rational gain(0), prefix_dev(0), prefix_truth(0);
    for (int o : truth_order) {
      prefix_dev += deviation[o];
      prefix_truth += result.truthful[o];
      gain = max(gain, prefix_dev - prefix_truth);
    }
    if (gain > result.epsilon) {
      result.epsilon = gain;
      result.best_deviation = deviation;
      result.best_report = report;
    }
  } while (std::next_permutation(report.begin(), report.end()));
  return result;
}

// Worst case over all agents; the replication harness reports this per
// market size.
template <typename Mechanism>
ManipulationResult max_manipulation_gain(const FeeProblem& problem, const Mechanism& mechanism) {
  ManipulationResult worst;
  for (int agent = 0; agent < problem.num_agents(); ++agent) {
    auto candidate = manipulation_gain(problem, mechanism, agent);
    if (worst.agent == -1 || candidate.epsilon > worst.epsilon) worst = std::move(candidate);
  }
  return worst;
}

}  // namespace tradex::oracles
