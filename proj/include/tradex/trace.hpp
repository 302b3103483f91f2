#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tradex/rational.hpp"

namespace tradex {

// Audit trail for one step of a mechanism. Node names are the public agent
// and object identifiers (pair nodes print as "agent:object"). Replaying
// the updates from step one onto the zero assignment reproduces the final
// assignment exactly.
struct TraceStep {
  int step = 0;
  std::string kind;  // "solve", "cycles", or "eating"
  std::vector<std::string> agents;
  std::vector<std::string> objects;
  std::vector<std::pair<std::string, std::string>> favorites;      // agent -> pointed object
  std::vector<std::pair<std::string, std::string>> split_entries;  // (row, col) with weight
  RationalVector split_values;
  std::vector<std::pair<std::string, Rational>> quotas;
  std::vector<std::pair<std::string, Rational>> solution;
  std::vector<std::vector<std::string>> blocks;
  std::vector<std::string> residual;
  std::vector<std::string> binding;
  Rational duration{0};  // eating steps only
  struct Update {
    std::string agent;
    std::string object;
    Rational delta;  // signed change of the running assignment entry
  };
  std::vector<Update> updates;
};

struct StepTrace {
  std::vector<TraceStep> steps;
};

}  // namespace tradex
