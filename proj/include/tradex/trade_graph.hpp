#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tradex/rational.hpp"

namespace tradex {

// One step of a trading procedure as a node system: every node may trade up
// to its quota, and the column-stochastic split matrix says how each node
// divides its demand among the nodes it points to.
//
// add_edge(u, v, w) declares that u points to v and that a fraction w of u's
// demand is satisfied by consuming v, i.e. lambda(v, u) = w. Split weights
// may only be nonzero on declared edges, and a column with any positive
// entry must sum to exactly one.
class TradeGraph {
 public:
  explicit TradeGraph(std::vector<std::string> node_names)
      : names_(std::move(node_names)),
        quotas_(names_.size(), Rational(0)),
        lambda_(names_.size(), RationalVector(names_.size(), Rational(0))),
        declared_(names_.size(), std::vector<bool>(names_.size(), false)),
        out_(names_.size()) {}

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }

  void set_quota(int v, Rational q) { quotas_.at(v) = std::move(q); }
  const Rational& quota(int v) const { return quotas_.at(v); }
  const RationalVector& quotas() const { return quotas_; }

  void add_edge(int from, int to, Rational weight) {
    declared_.at(from).at(to) = true;
    lambda_.at(to).at(from) = std::move(weight);
    out_.at(from).push_back(to);
  }

  bool has_edge(int from, int to) const { return declared_.at(from).at(to); }
  const std::vector<int>& pointed_by(int from) const { return out_.at(from); }

  // lambda(v, u): share of u's demand routed to node v.
  const Rational& lambda(int row, int col) const { return lambda_.at(row).at(col); }

  // Adjacency of the digraph that matters for trading: u -> v iff lambda(v, u) > 0.
  // Declared edges carrying zero weight are ignored here.
  std::vector<std::vector<int>> positive_adjacency() const {
    std::vector<std::vector<int>> adj(size());
    for (int u = 0; u < size(); ++u) {
      for (int v : out_[u]) {
        if (lambda_[v][u].is_positive()) adj[u].push_back(v);
      }
    }
    return adj;
  }

 private:
  std::vector<std::string> names_;
  RationalVector quotas_;
  RationalMatrix lambda_;  // lambda_[row][col]
  std::vector<std::vector<bool>> declared_;
  std::vector<std::vector<int>> out_;
};

enum class GraphViolationKind {
  column_sum_not_one,
  negative_entry,
  self_loop,
  support_outside_edges,
  negative_quota,
};

struct GraphViolation {
  GraphViolationKind kind;
  int node_u = -1;  // column / offending node
  int node_v = -1;  // row, where applicable

  std::string describe(const TradeGraph& g) const {
    switch (kind) {
      case GraphViolationKind::column_sum_not_one:
        return "column of '" + g.name(node_u) + "' does not sum to one";
      case GraphViolationKind::negative_entry:
        return "negative split weight at ('" + g.name(node_v) + "', '" + g.name(node_u) + "')";
      case GraphViolationKind::self_loop:
        return "node '" + g.name(node_u) + "' points to itself";
      case GraphViolationKind::support_outside_edges:
        return "split weight outside declared edges at ('" + g.name(node_v) + "', '" +
               g.name(node_u) + "')";
      case GraphViolationKind::negative_quota:
        return "negative quota at '" + g.name(node_u) + "'";
    }
    return "unknown violation";
  }
};

struct ValidationResult {
  std::vector<GraphViolation> violations;
  bool ok() const { return violations.empty(); }
};

inline ValidationResult validate_parameter_matrix(const TradeGraph& g) {
  ValidationResult result;
  const int n = g.size();
  for (int u = 0; u < n; ++u) {
    if (g.quota(u).is_negative()) {
      result.violations.push_back({GraphViolationKind::negative_quota, u, -1});
    }
    if (g.has_edge(u, u) || !g.lambda(u, u).is_zero()) {
      result.violations.push_back({GraphViolationKind::self_loop, u, -1});
    }
    Rational column_sum(0);
    bool any_positive = false;
    for (int v = 0; v < n; ++v) {
      const Rational& w = g.lambda(v, u);
      if (w.is_negative()) {
        result.violations.push_back({GraphViolationKind::negative_entry, u, v});
      }
      if (!w.is_zero() && !g.has_edge(u, v)) {
        result.violations.push_back({GraphViolationKind::support_outside_edges, u, v});
      }
      if (w.is_positive()) any_positive = true;
      column_sum += w;
    }
    if (any_positive && column_sum != Rational(1)) {
      result.violations.push_back({GraphViolationKind::column_sum_not_one, u, -1});
    }
  }
  return result;
}

// Thrown by operations whose precondition is a valid TradeGraph.
class InvalidTradeGraph : public std::runtime_error {
 public:
  InvalidTradeGraph(const TradeGraph& g, ValidationResult result)
      : std::runtime_error(compose(g, result)), result_(std::move(result)) {}
  const ValidationResult& result() const { return result_; }

 private:
  static std::string compose(const TradeGraph& g, const ValidationResult& r) {
    std::string msg = "invalid trade graph:";
    for (const auto& v : r.violations) msg += " [" + v.describe(g) + "]";
    return msg;
  }
  ValidationResult result_;
};

}  // namespace tradex
