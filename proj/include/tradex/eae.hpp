#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tradex/bta.hpp"
#include "tradex/market.hpp"

namespace tradex {

class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

struct FeasibilityResult {
  bool feasible = true;
  std::vector<std::string> violations;
};

// Exact feasibility check: every regional interval, every hospital
// capacity, and unit demand per doctor.
inline FeasibilityResult check_feasible(const Assignment& p,
                                        const ConstrainedMatchProblem& problem) {
  if (p.num_agents() != problem.num_doctors() || p.num_objects() != problem.num_hospitals()) {
    throw std::invalid_argument("check_feasible: assignment dimensions do not match problem");
  }
  FeasibilityResult result;
  auto fail = [&result](std::string msg) {
    result.feasible = false;
    result.violations.push_back(std::move(msg));
  };

  for (int i = 0; i < p.num_agents(); ++i) {
    for (int h = 0; h < p.num_objects(); ++h) {
      if (p.at(i, h).is_negative()) {
        fail("negative entry at ('" + problem.doctors[i] + "', '" + problem.hospitals[h] + "')");
      }
    }
    if (p.row_sum(i) > Rational(1)) {
      fail("doctor '" + problem.doctors[i] + "' assigned more than one position");
    }
  }
  for (int h = 0; h < problem.num_hospitals(); ++h) {
    if (p.column_sum(h) > Rational(problem.capacities[h])) {
      fail("hospital '" + problem.hospitals[h] + "' over capacity");
    }
  }
  for (const auto& c : problem.constraints) {
    Rational count(0);
    for (int h : c.hospitals) count += p.column_sum(h);
    if (count < Rational(c.floor) || count > Rational(c.ceiling)) {
      std::string region;
      for (int h : c.hospitals) region += (region.empty() ? "" : ",") + problem.hospitals[h];
      fail("region {" + region + "} count " + count.str() + " outside [" +
           std::to_string(c.floor) + ", " + std::to_string(c.ceiling) + "]");
    }
  }
  return result;
}

namespace detail {

struct LaminarNode {
  std::vector<int> hospitals;  // sorted
  long floor = 0;
  long ceiling = 0;
  std::vector<int> children;
  long min_sum = 0;
  long max_sum = 0;
};

// Tree over the constraint family plus implicit singleton capacity nodes
// and an implicit root covering all hospitals capped at the doctor count.
inline std::vector<LaminarNode> build_laminar_tree(const ConstrainedMatchProblem& problem) {
  std::map<std::vector<int>, LaminarNode> by_set;
  for (int h = 0; h < problem.num_hospitals(); ++h) {
    LaminarNode leaf;
    leaf.hospitals = {h};
    leaf.floor = 0;
    leaf.ceiling = problem.capacities[h];
    by_set[leaf.hospitals] = leaf;
  }
  std::vector<int> all(problem.num_hospitals());
  for (int h = 0; h < problem.num_hospitals(); ++h) all[h] = h;
  if (!by_set.count(all)) {
    LaminarNode root;
    root.hospitals = all;
    root.floor = 0;
    root.ceiling = problem.num_doctors();
    by_set[all] = root;
  }
  for (const auto& c : problem.constraints) {
    auto it = by_set.find(c.hospitals);
    if (it == by_set.end()) {
      LaminarNode node;
      node.hospitals = c.hospitals;
      node.floor = c.floor;
      node.ceiling = c.ceiling;
      by_set[c.hospitals] = node;
    } else {
      it->second.floor = std::max(it->second.floor, c.floor);
      it->second.ceiling = std::min(it->second.ceiling, c.ceiling);
    }
  }
  // Doctors demand at most one position each.
  by_set[all].ceiling = std::min(by_set[all].ceiling, static_cast<long>(problem.num_doctors()));

  std::vector<LaminarNode> nodes;
  nodes.reserve(by_set.size());
  for (auto& [set, node] : by_set) nodes.push_back(std::move(node));
  // Parent = smallest strict superset; children attach there.
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    int parent = -1;
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      if (a == b || nodes[b].hospitals.size() <= nodes[a].hospitals.size()) continue;
      if (!std::includes(nodes[b].hospitals.begin(), nodes[b].hospitals.end(),
                         nodes[a].hospitals.begin(), nodes[a].hospitals.end())) {
        continue;
      }
      if (parent == -1 || nodes[b].hospitals.size() < nodes[parent].hospitals.size()) {
        parent = static_cast<int>(b);
      }
    }
    if (parent != -1) nodes[parent].children.push_back(static_cast<int>(a));
  }
  for (auto& node : nodes) {
    std::sort(node.children.begin(), node.children.end(), [&nodes](int x, int y) {
      return nodes[x].hospitals.front() < nodes[y].hospitals.front();
    });
  }
  return nodes;
}

inline void laminar_ranges(std::vector<LaminarNode>& nodes, int v) {
  auto& node = nodes[v];
  if (node.children.empty()) {
    node.min_sum = node.floor;
    node.max_sum = node.ceiling;
  } else {
    long child_min = 0, child_max = 0;
    for (int c : node.children) {
      laminar_ranges(nodes, c);
      child_min += nodes[c].min_sum;
      child_max += nodes[c].max_sum;
    }
    node.min_sum = std::max(node.floor, child_min);
    node.max_sum = std::min(node.ceiling, child_max);
  }
  if (node.min_sum > node.max_sum) {
    throw InfeasibleError("no feasible assignment satisfies the constraint family");
  }
}

inline void laminar_fill(std::vector<LaminarNode>& nodes, int v, long target,
                         std::vector<long>& counts) {
  const auto& node = nodes[v];
  if (node.children.empty()) {
    counts[node.hospitals.front()] = target;
    return;
  }
  long spare = target;
  for (int c : node.children) spare -= nodes[c].min_sum;
  for (int c : node.children) {
    const long extra = std::min(spare, nodes[c].max_sum - nodes[c].min_sum);
    laminar_fill(nodes, c, nodes[c].min_sum + extra, counts);
    spare -= extra;
  }
}

}  // namespace detail

// Feasible hospital counts with maximum total assigned mass, computed by a
// greedy pass over the laminar tree (floors first, then fill toward
// ceilings in hospital order). Any total-mass maximizer is undominated:
// a pointwise-larger feasible count vector would have a larger total.
inline std::vector<long> undominated_hospital_counts(const ConstrainedMatchProblem& problem) {
  ensure_valid(problem.validate(), "undominated_hospital_counts");
  if (problem.num_doctors() == 0 || problem.num_hospitals() == 0) {
    throw std::invalid_argument("undominated_hospital_counts: empty market");
  }
  auto nodes = detail::build_laminar_tree(problem);
  int root = -1;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (static_cast<int>(nodes[v].hospitals.size()) == problem.num_hospitals()) {
      root = static_cast<int>(v);
    }
  }
  detail::laminar_ranges(nodes, root);
  std::vector<long> counts(problem.num_hospitals(), 0);
  detail::laminar_fill(nodes, root, nodes[root].max_sum, counts);
  return counts;
}

// The equal-access endowment: every doctor holds an identical row, hospital
// totals are the undominated counts above.
inline RationalMatrix efficient_equal_endowment(const ConstrainedMatchProblem& problem) {
  const auto counts = undominated_hospital_counts(problem);
  RationalVector row(problem.num_hospitals(), Rational(0));
  for (int h = 0; h < problem.num_hospitals(); ++h) {
    row[h] = Rational(counts[h], problem.num_doctors());
  }
  return RationalMatrix(problem.num_doctors(), row);
}

struct EaeResult {
  Assignment assignment;
  StepTrace trace;
  RationalMatrix endowment;
};

// Equal access exchange: give every doctor the same feasible endowment row,
// then let them trade with the equal split rule. Trading preserves hospital
// counts, so the outcome stays feasible.
inline EaeResult run_eae(const ConstrainedMatchProblem& problem) {
  RationalMatrix endowment = efficient_equal_endowment(problem);
  FeeProblem fee{problem.doctors, problem.hospitals, endowment, problem.prefs};
  auto bta = run_bta(fee, lambda_equal);
  return {std::move(bta.assignment), std::move(bta.trace), std::move(endowment)};
}

}  // namespace tradex
