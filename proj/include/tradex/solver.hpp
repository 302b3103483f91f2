#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tradex/absorbing.hpp"
#include "tradex/linalg.hpp"
#include "tradex/trade_graph.hpp"

namespace tradex {

class SolverError : public std::runtime_error {
 public:
  enum class Kind { not_absorbing, degenerate_block };
  SolverError(Kind kind, std::string what) : std::runtime_error(std::move(what)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct BlockSolution {
  std::vector<int> nodes;      // sorted ascending
  RationalVector eigenvector;  // positive direction, first coordinate 1
  Rational scale;              // chosen so that some node hits its quota
  std::vector<int> binding;    // nodes whose quota is met exactly
};

struct MaxSolution {
  RationalVector x;  // indexed by node; zero on the residual set
  AbsorbingPartition partition;
  std::vector<BlockSolution> blocks;
};

namespace detail {

inline bool block_is_absorbing(const TradeGraph& g, const std::vector<int>& block) {
  const int n = g.size();
  std::vector<int> position(n, -1);
  for (std::size_t i = 0; i < block.size(); ++i) position[block[i]] = static_cast<int>(i);

  const auto adj = g.positive_adjacency();
  for (int v : block) {
    for (int succ : adj[v]) {
      if (position[succ] == -1) return false;  // outgoing edge
    }
  }
  // Mutual reachability inside the block: forward and backward BFS from block[0].
  if (block.size() < 2) return false;
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<bool> seen(block.size(), false);
    std::vector<int> frontier{block[0]};
    seen[0] = true;
    while (!frontier.empty()) {
      const int v = frontier.back();
      frontier.pop_back();
      for (int u : block) {
        const bool edge = pass == 0 ? g.lambda(u, v).is_positive() : g.lambda(v, u).is_positive();
        if (edge && !seen[position[u]]) {
          seen[position[u]] = true;
          frontier.push_back(u);
        }
      }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return false;
  }
  return true;
}

}  // namespace detail

// Positive direction solving (I - lambda_block) x = 0, normalized so the
// first block coordinate is 1. The restricted system has rank |block| - 1,
// so we fix the last variable to 1, solve the leading principal system, and
// rescale. Positivity is guaranteed by Perron-Frobenius for an irreducible
// column-stochastic block; we still assert it.
inline RationalVector block_eigenvector(const TradeGraph& g, const std::vector<int>& block) {
  if (!detail::block_is_absorbing(g, block)) {
    throw SolverError(SolverError::Kind::not_absorbing,
                      "block_eigenvector: node set is not an absorbing set");
  }
  const std::size_t m = block.size();
  RationalMatrix a(m - 1, RationalVector(m - 1, Rational(0)));
  RationalVector rhs(m - 1, Rational(0));
  for (std::size_t r = 0; r < m - 1; ++r) {
    for (std::size_t c = 0; c < m - 1; ++c) {
      a[r][c] = (r == c ? Rational(1) : Rational(0)) - g.lambda(block[r], block[c]);
    }
    rhs[r] = g.lambda(block[r], block[m - 1]);  // moved the fixed x_last = 1 term
  }
  auto solved = solve_linear_system(std::move(a), std::move(rhs));
  if (!solved) {
    throw SolverError(SolverError::Kind::degenerate_block,
                      "block_eigenvector: nullspace is not one-dimensional");
  }
  RationalVector direction = std::move(*solved);
  direction.push_back(Rational(1));
  for (const Rational& entry : direction) {
    if (!entry.is_positive()) {
      throw SolverError(SolverError::Kind::degenerate_block,
                        "block_eigenvector: direction is not strictly positive");
    }
  }
  const Rational first = direction.front();
  for (Rational& entry : direction) entry /= first;
  return direction;
}

// The componentwise-largest fixed point of the split matrix within the
// quota box. Each block trades along its positive direction, scaled until
// the first quota binds; residual nodes trade nothing.
inline MaxSolution max_solution(const TradeGraph& g) {
  auto validation = validate_parameter_matrix(g);
  if (!validation.ok()) throw InvalidTradeGraph(g, std::move(validation));

  MaxSolution solution;
  solution.x.assign(g.size(), Rational(0));
  solution.partition = absorbing_sets(g);

  for (const auto& block : solution.partition.blocks) {
    BlockSolution bs;
    bs.nodes = block;
    bs.eigenvector = block_eigenvector(g, block);

    bool have_scale = false;
    for (std::size_t i = 0; i < block.size(); ++i) {
      const Rational ratio = g.quota(block[i]) / bs.eigenvector[i];
      if (!have_scale || ratio < bs.scale) {
        bs.scale = ratio;
        have_scale = true;
      }
    }
    for (std::size_t i = 0; i < block.size(); ++i) {
      solution.x[block[i]] = bs.scale * bs.eigenvector[i];
      if (solution.x[block[i]] == g.quota(block[i])) bs.binding.push_back(block[i]);
    }
    solution.blocks.push_back(std::move(bs));
  }
  return solution;
}

}  // namespace tradex
