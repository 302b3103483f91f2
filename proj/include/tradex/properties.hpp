#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tradex/market.hpp"

namespace tradex {

enum class SdOrder { equal, strictly_dominates, strictly_dominated, incomparable };

// First-order stochastic dominance by exact prefix sums along a strict
// preference order (best first). Lotteries live over the same object set.
inline SdOrder sd_compare(const Lottery& l, const Lottery& other,
                          const std::vector<int>& preference_order) {
  bool some_above = false, some_below = false;
  Rational prefix_l(0), prefix_other(0);
  for (int o : preference_order) {
    prefix_l += l[o];
    prefix_other += other[o];
    if (prefix_l > prefix_other) some_above = true;
    if (prefix_l < prefix_other) some_below = true;
  }
  if (some_above && some_below) return SdOrder::incomparable;
  if (some_above) return SdOrder::strictly_dominates;
  if (some_below) return SdOrder::strictly_dominated;
  return SdOrder::equal;
}

inline bool sd_weakly_dominates(const Lottery& l, const Lottery& other,
                                const std::vector<int>& preference_order) {
  const SdOrder order = sd_compare(l, other, preference_order);
  return order == SdOrder::equal || order == SdOrder::strictly_dominates;
}

// Rank position of the first cutoff where l's prefix falls strictly below
// the other's; nullopt when l weakly dominates.
inline std::optional<int> sd_first_failure(const Lottery& l, const Lottery& other,
                                           const std::vector<int>& preference_order) {
  Rational prefix_l(0), prefix_other(0);
  for (std::size_t r = 0; r < preference_order.size(); ++r) {
    prefix_l += l[preference_order[r]];
    prefix_other += other[preference_order[r]];
    if (prefix_l < prefix_other) return static_cast<int>(r);
  }
  return std::nullopt;
}

struct OrdinalEfficiencyResult {
  bool efficient = true;
  std::vector<int> cycle;  // improvement cycle of objects, if any
  // The acyclicity characterization is stated for full rows; with leftover
  // demand the verdict is advisory and callers should cross-check.
  bool partial_rows_warning = false;
};

// Builds the relation "o beats o'" (someone prefers o and holds o') and
// reports a cycle if one exists.
inline OrdinalEfficiencyResult check_ordinal_efficiency(const Assignment& p,
                                                        const StrictPreferences& prefs) {
  const int k = p.num_objects();
  OrdinalEfficiencyResult result;
  for (int i = 0; i < p.num_agents(); ++i) {
    if (p.row_sum(i) < Rational(1)) result.partial_rows_warning = true;
  }

  std::vector<std::vector<bool>> beats(k, std::vector<bool>(k, false));
  for (int i = 0; i < p.num_agents(); ++i) {
    for (int worse = 0; worse < k; ++worse) {
      if (!p.at(i, worse).is_positive()) continue;
      for (int r = 0; r < prefs.rank_of[i][worse]; ++r) beats[prefs.order[i][r]][worse] = true;
    }
  }

  std::vector<int> color(k, 0), parent(k, -1);
  int cycle_from = -1, cycle_to = -1;
  auto dfs = [&](auto&& self, int o) -> bool {
    color[o] = 1;
    for (int succ = 0; succ < k; ++succ) {
      if (!beats[o][succ]) continue;
      if (color[succ] == 1) {
        cycle_from = o;
        cycle_to = succ;
        return true;
      }
      if (color[succ] == 0) {
        parent[succ] = o;
        if (self(self, succ)) return true;
      }
    }
    color[o] = 2;
    return false;
  };
  for (int o = 0; o < k && cycle_from == -1; ++o) {
    if (color[o] == 0) dfs(dfs, o);
  }
  if (cycle_from != -1) {
    result.efficient = false;
    for (int v = cycle_from; v != -1 && v != cycle_to; v = parent[v]) result.cycle.push_back(v);
    result.cycle.push_back(cycle_to);
    std::reverse(result.cycle.begin(), result.cycle.end());
  }
  return result;
}

struct IrResult {
  bool individually_rational = true;
  struct Witness {
    int agent;
    int cutoff_rank;  // rank in the agent's order where the prefix falls short
  };
  std::vector<Witness> witnesses;
};

// Every agent's lottery must weakly dominate his endowment row.
inline IrResult check_ir(const Assignment& p, const RationalMatrix& endowments,
                         const StrictPreferences& prefs) {
  IrResult result;
  for (int i = 0; i < p.num_agents(); ++i) {
    if (const auto cutoff = sd_first_failure(p.row(i), endowments[i], prefs.order[i])) {
      result.individually_rational = false;
      result.witnesses.push_back({i, *cutoff});
    }
  }
  return result;
}

struct PairWitness {
  int agent;
  int other;
  int cutoff_rank = -1;     // under the envious agent's order, where applicable
  Rational envy{0};         // largest prefix shortfall
  Rational allowance{0};    // endowment advantage bound (bounded envy only)
};

struct FairnessReport {
  bool equal_treatment_of_equals = true;
  bool equal_endowment_no_envy = true;
  bool bounded_envy = true;
  std::vector<PairWitness> ete_witnesses;
  std::vector<PairWitness> eene_witnesses;
  std::vector<PairWitness> bounded_envy_witnesses;
};

// The three endowment-based fairness checks, all exact. Bounded envy caps
// each agent's largest prefix shortfall against the other's componentwise
// endowment advantage.
inline FairnessReport check_fairness(const Assignment& p, const RationalMatrix& endowments,
                                     const StrictPreferences& prefs) {
  FairnessReport report;
  const int n = p.num_agents();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;

      if (endowments[i] == endowments[j] && prefs.order[i] == prefs.order[j] &&
          p.row(i) != p.row(j)) {
        report.equal_treatment_of_equals = false;
        report.ete_witnesses.push_back({i, j});
      }
      if (endowments[i] == endowments[j]) {
        if (const auto cutoff = sd_first_failure(p.row(i), p.row(j), prefs.order[i])) {
          report.equal_endowment_no_envy = false;
          report.eene_witnesses.push_back({i, j, *cutoff});
        }
      }

      Rational envy(0);
      int worst_rank = -1;
      Rational prefix_i(0), prefix_j(0);
      for (std::size_t r = 0; r < prefs.order[i].size(); ++r) {
        prefix_i += p.at(i, prefs.order[i][r]);
        prefix_j += p.at(j, prefs.order[i][r]);
        if (prefix_j - prefix_i > envy) {
          envy = prefix_j - prefix_i;
          worst_rank = static_cast<int>(r);
        }
      }
      Rational allowance(0);
      for (int o = 0; o < p.num_objects(); ++o) {
        if (endowments[j][o] > endowments[i][o]) allowance += endowments[j][o] - endowments[i][o];
      }
      if (envy > allowance) {
        report.bounded_envy = false;
        report.bounded_envy_witnesses.push_back({i, j, worst_rank, envy, allowance});
      }
    }
  }
  return report;
}

struct StabilityResult {
  bool stable = true;
  struct Witness {
    int agent;         // the justified envier
    int other;         // the lower-priority holder
    int object;        // where priority is violated
    int worse_object;  // what the envier consumes instead
  };
  std::vector<Witness> witnesses;
};

// Ex-ante stability: nobody consumes something worse than an object held in
// positive share by a strictly lower-priority agent. The strong variant
// additionally bans discrimination within equal priority: a tied agent may
// not hold strictly less of the object than the other while consuming worse.
inline StabilityResult check_ex_ante_stability(const Assignment& p,
                                               const WeakPriorities& priorities,
                                               const StrictPreferences& prefs,
                                               bool strong = false) {
  StabilityResult result;
  const int n = p.num_agents(), k = p.num_objects();
  for (int o = 0; o < k; ++o) {
    for (int j = 0; j < n; ++j) {
      if (!p.at(j, o).is_positive() && !strong) continue;
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const bool plain =
            p.at(j, o).is_positive() && priorities.strictly_higher(o, i, j);
        const bool tied_discrimination =
            strong && priorities.tied(o, i, j) && p.at(i, o) < p.at(j, o);
        if (!plain && !tied_discrimination) continue;
        for (int r = prefs.rank_of[i][o] + 1; r < k; ++r) {
          const int worse = prefs.order[i][r];
          if (p.at(i, worse).is_positive()) {
            result.stable = false;
            result.witnesses.push_back({i, j, o, worse});
            break;
          }
        }
      }
    }
  }
  return result;
}

struct PriorityEnvyResult {
  bool ok = true;
  std::vector<PairWitness> witnesses;
};

// No envy towards lower priority: whenever i ranks weakly above j at every
// object, i's lottery must weakly dominate j's for i.
inline PriorityEnvyResult check_no_envy_lower_priority(const Assignment& p,
                                                       const WeakPriorities& priorities,
                                                       const StrictPreferences& prefs) {
  PriorityEnvyResult result;
  const int n = p.num_agents(), k = p.num_objects();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      bool comparable = true;
      for (int o = 0; o < k; ++o) {
        if (!priorities.weakly_higher(o, i, j)) {
          comparable = false;
          break;
        }
      }
      if (!comparable) continue;
      if (const auto cutoff = sd_first_failure(p.row(i), p.row(j), prefs.order[i])) {
        result.ok = false;
        result.witnesses.push_back({i, j, *cutoff});
      }
    }
  }
  return result;
}

}  // namespace tradex
