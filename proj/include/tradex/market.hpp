#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tradex/rational.hpp"

namespace tradex {

// A probability share vector over objects; total mass at most one.
using Lottery = RationalVector;

// Strict total order over objects, one per agent. order[i] lists object
// indices best-first; rank_of[i][o] is the position of o in i's order.
struct StrictPreferences {
  std::vector<std::vector<int>> order;
  std::vector<std::vector<int>> rank_of;

  static StrictPreferences from_order(std::vector<std::vector<int>> order, int num_objects) {
    StrictPreferences prefs;
    prefs.order = std::move(order);
    prefs.rank_of.assign(prefs.order.size(), std::vector<int>(num_objects, -1));
    for (std::size_t i = 0; i < prefs.order.size(); ++i) {
      if (static_cast<int>(prefs.order[i].size()) != num_objects) {
        throw std::invalid_argument("preferences: agent " + std::to_string(i) +
                                    " does not rank every object");
      }
      for (int r = 0; r < num_objects; ++r) {
        const int o = prefs.order[i][r];
        if (o < 0 || o >= num_objects || prefs.rank_of[i][o] != -1) {
          throw std::invalid_argument("preferences: agent " + std::to_string(i) +
                                      " ranking is not a permutation");
        }
        prefs.rank_of[i][o] = r;
      }
    }
    return prefs;
  }

  int num_agents() const { return static_cast<int>(order.size()); }
  bool prefers(int agent, int a, int b) const { return rank_of[agent][a] < rank_of[agent][b]; }
};

// Weak order over agents, one per object, stored as ranked indifference
// classes. rank_of[o][i] is the class index of agent i at object o (0 best).
struct WeakPriorities {
  std::vector<std::vector<std::vector<int>>> classes;
  std::vector<std::vector<int>> rank_of;

  static WeakPriorities from_classes(std::vector<std::vector<std::vector<int>>> classes,
                                     int num_agents) {
    WeakPriorities pr;
    pr.classes = std::move(classes);
    pr.rank_of.assign(pr.classes.size(), std::vector<int>(num_agents, -1));
    for (std::size_t o = 0; o < pr.classes.size(); ++o) {
      for (std::size_t c = 0; c < pr.classes[o].size(); ++c) {
        if (pr.classes[o][c].empty()) {
          throw std::invalid_argument("priorities: empty indifference class");
        }
        for (int i : pr.classes[o][c]) {
          if (i < 0 || i >= num_agents || pr.rank_of[o][i] != -1) {
            throw std::invalid_argument("priorities: classes do not partition the agents");
          }
          pr.rank_of[o][i] = static_cast<int>(c);
        }
      }
      for (int i = 0; i < num_agents; ++i) {
        if (pr.rank_of[o][i] == -1) {
          throw std::invalid_argument("priorities: classes do not partition the agents");
        }
      }
    }
    return pr;
  }

  bool weakly_higher(int object, int i, int j) const {
    return rank_of[object][i] <= rank_of[object][j];
  }
  bool strictly_higher(int object, int i, int j) const {
    return rank_of[object][i] < rank_of[object][j];
  }
  bool tied(int object, int i, int j) const { return rank_of[object][i] == rank_of[object][j]; }
  bool all_ties() const {
    for (const auto& object_classes : classes) {
      if (object_classes.size() > 1) return false;
    }
    return true;
  }
};

// Agent-by-object matrix of probability shares.
struct Assignment {
  RationalMatrix p;

  Assignment() = default;
  Assignment(int num_agents, int num_objects)
      : p(num_agents, RationalVector(num_objects, Rational(0))) {}

  int num_agents() const { return static_cast<int>(p.size()); }
  int num_objects() const { return p.empty() ? 0 : static_cast<int>(p.front().size()); }

  RationalVector& row(int i) { return p[i]; }
  const RationalVector& row(int i) const { return p[i]; }
  Rational& at(int i, int o) { return p[i][o]; }
  const Rational& at(int i, int o) const { return p[i][o]; }

  Rational row_sum(int i) const {
    Rational s(0);
    for (const auto& v : p[i]) s += v;
    return s;
  }
  Rational column_sum(int o) const {
    Rational s(0);
    for (const auto& r : p) s += r[o];
    return s;
  }

  friend bool operator==(const Assignment& a, const Assignment& b) { return a.p == b.p; }
  friend bool operator!=(const Assignment& a, const Assignment& b) { return !(a == b); }
};

// Agents own probability shares of objects and trade them. Row sums of the
// endowment matrix stay within each agent's unit demand; object supplies
// are whatever the columns add up to.
struct FeeProblem {
  std::vector<std::string> agents;
  std::vector<std::string> objects;
  RationalMatrix endowments;  // rows follow `agents`
  StrictPreferences prefs;

  int num_agents() const { return static_cast<int>(agents.size()); }
  int num_objects() const { return static_cast<int>(objects.size()); }

  Rational object_supply(int o) const {
    Rational s(0);
    for (const auto& row : endowments) s += row[o];
    return s;
  }

  std::vector<std::string> validate() const {
    std::vector<std::string> errors;
    if (static_cast<int>(endowments.size()) != num_agents()) {
      errors.push_back("endowment matrix has wrong number of rows");
      return errors;
    }
    for (int i = 0; i < num_agents(); ++i) {
      if (static_cast<int>(endowments[i].size()) != num_objects()) {
        errors.push_back("endowment row of '" + agents[i] + "' has wrong length");
        continue;
      }
      Rational row_sum(0);
      for (int o = 0; o < num_objects(); ++o) {
        if (endowments[i][o].is_negative()) {
          errors.push_back("negative endowment at ('" + agents[i] + "', '" + objects[o] + "')");
        }
        row_sum += endowments[i][o];
      }
      if (row_sum > Rational(1)) {
        errors.push_back("endowments of '" + agents[i] + "' sum to " + row_sum.str() +
                         " which exceeds 1");
      }
    }
    if (prefs.num_agents() != num_agents()) errors.push_back("preference profile has wrong size");
    return errors;
  }
};

// Objects collectively owned in equal division; unit copies.
struct HouseAllocationProblem {
  std::vector<std::string> agents;
  std::vector<std::string> objects;
  StrictPreferences prefs;

  int num_agents() const { return static_cast<int>(agents.size()); }
  int num_objects() const { return static_cast<int>(objects.size()); }

  FeeProblem to_fee() const {
    FeeProblem fee{agents, objects, {}, prefs};
    const Rational share(1, static_cast<long>(agents.size()));
    fee.endowments.assign(agents.size(), RationalVector(objects.size(), share));
    return fee;
  }
};

// Every agent owns one distinct object outright.
struct HousingMarketProblem {
  std::vector<std::string> agents;
  std::vector<std::string> objects;
  std::vector<int> owned_object;  // agent index -> object index, a bijection
  StrictPreferences prefs;

  int num_agents() const { return static_cast<int>(agents.size()); }
  int num_objects() const { return static_cast<int>(objects.size()); }

  std::vector<std::string> validate() const {
    std::vector<std::string> errors;
    if (agents.size() != objects.size()) errors.push_back("agent and object counts differ");
    if (owned_object.size() != agents.size()) {
      errors.push_back("ownership map has wrong size");
      return errors;
    }
    std::vector<bool> seen(objects.size(), false);
    for (int o : owned_object) {
      if (o < 0 || o >= num_objects() || seen[o]) {
        errors.push_back("ownership map is not a bijection");
        return errors;
      }
      seen[o] = true;
    }
    return errors;
  }

  FeeProblem to_fee() const {
    FeeProblem fee{agents, objects, {}, prefs};
    fee.endowments.assign(agents.size(), RationalVector(objects.size(), Rational(0)));
    for (int i = 0; i < num_agents(); ++i) fee.endowments[i][owned_object[i]] = Rational(1);
    return fee;
  }
};

// Mixed ownership: a subset of objects is privately owned by distinct
// tenants, the rest is common property. Unit copies throughout.
struct HetProblem {
  std::vector<std::string> agents;
  std::vector<std::string> objects;
  std::vector<int> owner_of;  // object index -> tenant agent index, or -1
  StrictPreferences prefs;

  int num_agents() const { return static_cast<int>(agents.size()); }
  int num_objects() const { return static_cast<int>(objects.size()); }

  bool is_tenant(int agent) const {
    for (int o = 0; o < num_objects(); ++o) {
      if (owner_of[o] == agent) return true;
    }
    return false;
  }
  int house_of(int agent) const {
    for (int o = 0; o < num_objects(); ++o) {
      if (owner_of[o] == agent) return o;
    }
    return -1;
  }

  std::vector<std::string> validate() const {
    std::vector<std::string> errors;
    if (owner_of.size() != objects.size()) {
      errors.push_back("tenant map has wrong size");
      return errors;
    }
    std::vector<bool> seen(agents.size(), false);
    for (int o = 0; o < num_objects(); ++o) {
      const int i = owner_of[o];
      if (i == -1) continue;
      if (i < 0 || i >= num_agents()) {
        errors.push_back("tenant map references unknown agent");
      } else if (seen[i]) {
        errors.push_back("agent '" + agents[i] + "' owns more than one object");
      } else {
        seen[i] = true;
      }
    }
    return errors;
  }
};

// Objects rank agents by weak orders; copies are integral.
struct PbaProblem {
  std::vector<std::string> agents;
  std::vector<std::string> objects;
  std::vector<long> copies;
  WeakPriorities priorities;
  StrictPreferences prefs;

  int num_agents() const { return static_cast<int>(agents.size()); }
  int num_objects() const { return static_cast<int>(objects.size()); }

  std::vector<std::string> validate() const {
    std::vector<std::string> errors;
    if (copies.size() != objects.size()) errors.push_back("copy counts have wrong size");
    for (std::size_t o = 0; o < copies.size(); ++o) {
      if (copies[o] < 1) errors.push_back("object '" + objects[o] + "' has fewer than one copy");
    }
    if (priorities.classes.size() != objects.size()) {
      errors.push_back("priority profile has wrong size");
    }
    return errors;
  }
};

struct RegionConstraint {
  std::vector<int> hospitals;  // sorted ascending
  long floor = 0;
  long ceiling = 0;
};

// Doctors match to hospitals under a laminar family of floor/ceiling
// constraints on regional doctor counts.
struct ConstrainedMatchProblem {
  std::vector<std::string> doctors;
  std::vector<std::string> hospitals;
  std::vector<long> capacities;
  std::vector<RegionConstraint> constraints;
  StrictPreferences prefs;

  int num_doctors() const { return static_cast<int>(doctors.size()); }
  int num_hospitals() const { return static_cast<int>(hospitals.size()); }

  std::vector<std::string> validate() const {
    std::vector<std::string> errors;
    if (capacities.size() != hospitals.size()) errors.push_back("capacities have wrong size");
    for (std::size_t h = 0; h < capacities.size(); ++h) {
      if (capacities[h] < 0) errors.push_back("hospital '" + hospitals[h] + "' capacity negative");
    }
    for (const auto& c : constraints) {
      if (c.hospitals.empty()) errors.push_back("constraint over empty hospital set");
      if (c.floor < 0 || c.floor > c.ceiling) errors.push_back("constraint bounds out of order");
      if (!std::is_sorted(c.hospitals.begin(), c.hospitals.end())) {
        errors.push_back("constraint hospital set not sorted");
      }
      for (int h : c.hospitals) {
        if (h < 0 || h >= num_hospitals()) errors.push_back("constraint references unknown hospital");
      }
    }
    // Laminar: any two constraint sets nest or are disjoint.
    for (std::size_t a = 0; a < constraints.size(); ++a) {
      for (std::size_t b = a + 1; b < constraints.size(); ++b) {
        const auto& sa = constraints[a].hospitals;
        const auto& sb = constraints[b].hospitals;
        std::vector<int> inter;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                              std::back_inserter(inter));
        if (!inter.empty() && inter.size() != sa.size() && inter.size() != sb.size()) {
          errors.push_back("constraint family is not laminar");
        }
      }
    }
    return errors;
  }
};

// Fractional endowment exchange augmented with per-service demand caps and
// reserved amounts kept out of trade.
struct TimeExchangeProblem {
  FeeProblem fee;
  RationalMatrix upper;  // demand cap per (agent, service)
  RationalMatrix lower;  // reserved amount per (agent, service)

  std::vector<std::string> validate() const {
    auto errors = fee.validate();
    const int n = fee.num_agents(), k = fee.num_objects();
    if (static_cast<int>(upper.size()) != n || static_cast<int>(lower.size()) != n) {
      errors.push_back("bound matrices have wrong number of rows");
      return errors;
    }
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(upper[i].size()) != k || static_cast<int>(lower[i].size()) != k) {
        errors.push_back("bound rows of '" + fee.agents[i] + "' have wrong length");
        continue;
      }
      for (int o = 0; o < k; ++o) {
        if (lower[i][o].is_negative() || lower[i][o] > fee.endowments[i][o]) {
          errors.push_back("reservation outside [0, endowment] at ('" + fee.agents[i] + "', '" +
                           fee.objects[o] + "')");
        }
        if (upper[i][o] < fee.endowments[i][o] || upper[i][o] > Rational(1)) {
          errors.push_back("demand cap outside [endowment, 1] at ('" + fee.agents[i] + "', '" +
                           fee.objects[o] + "')");
        }
      }
    }
    return errors;
  }
};

// An externally produced ex-ante stable assignment together with the
// priorities and preferences it was produced under.
struct FdatInput {
  std::vector<std::string> agents;
  std::vector<std::string> objects;
  Assignment assignment;
  WeakPriorities priorities;
  StrictPreferences prefs;

  int num_agents() const { return static_cast<int>(agents.size()); }
  int num_objects() const { return static_cast<int>(objects.size()); }
};

using MarketInstance =
    std::variant<FeeProblem, HouseAllocationProblem, HousingMarketProblem, HetProblem, PbaProblem,
                 ConstrainedMatchProblem, TimeExchangeProblem, FdatInput>;

inline void ensure_valid(const std::vector<std::string>& errors, const char* what) {
  if (!errors.empty()) {
    std::string msg = std::string(what) + ":";
    for (const auto& e : errors) msg += " [" + e + "]";
    throw std::invalid_argument(msg);
  }
}

}  // namespace tradex
