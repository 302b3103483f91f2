#pragma once

#include <stdexcept>
#include <string>

namespace tradex {

// A mechanism exceeded its step bound; diagnostic for a broken split rule
// or update, never reachable with the built-in rules.
class NonTerminationError : public std::runtime_error {
 public:
  explicit NonTerminationError(const std::string& what) : std::runtime_error(what) {}
};

// A split rule produced a matrix violating the per-step requirements
// (column-stochastic over the remaining agents, support inside positive
// tradable ownership).
class InvalidLambdaError : public std::runtime_error {
 public:
  explicit InvalidLambdaError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tradex
