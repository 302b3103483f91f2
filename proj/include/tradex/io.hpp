#pragma once

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "tradex/market.hpp"
#include "tradex/trace.hpp"

namespace tradex::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct ParseError {
  std::string path;
  std::string code;  // SchemaError, UnknownModel, BadRational, DanglingIdentifier, InvariantViolation
  std::string message;
};

struct ParseResult {
  std::optional<MarketInstance> instance;
  std::vector<ParseError> errors;
  bool ok() const { return instance.has_value() && errors.empty(); }
};

namespace detail {

class Parser {
 public:
  std::vector<ParseError> errors;

  void error(std::string path, std::string code, std::string message) {
    errors.push_back({std::move(path), std::move(code), std::move(message)});
  }

  std::optional<std::vector<std::string>> id_list(const Json& doc, const std::string& key) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      error("/" + key, "SchemaError", "expected an array of identifiers");
      return std::nullopt;
    }
    std::vector<std::string> ids;
    std::map<std::string, int> seen;
    for (std::size_t idx = 0; idx < doc[key].size(); ++idx) {
      const auto& cell = doc[key][idx];
      if (!cell.is_string() || cell.get<std::string>().empty()) {
        error("/" + key + "/" + std::to_string(idx), "SchemaError", "identifier must be a non-empty string");
        return std::nullopt;
      }
      const auto id = cell.get<std::string>();
      if (seen.count(id)) {
        error("/" + key + "/" + std::to_string(idx), "InvariantViolation",
              "duplicate identifier '" + id + "'");
        return std::nullopt;
      }
      seen[id] = static_cast<int>(idx);
      ids.push_back(id);
    }
    return ids;
  }

  std::optional<Rational> rational(const Json& cell, const std::string& path) {
    if (cell.is_number_integer()) return Rational(cell.get<long>());
    if (cell.is_string()) {
      if (auto parsed = Rational::parse(cell.get<std::string>())) return parsed;
      error(path, "BadRational", "cannot parse '" + cell.get<std::string>() + "' as a rational");
      return std::nullopt;
    }
    error(path, "BadRational", "expected a rational encoded as \"p/q\"");
    return std::nullopt;
  }

  static std::optional<int> index_of(const std::vector<std::string>& ids, const std::string& id) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == id) return static_cast<int>(i);
    }
    return std::nullopt;
  }

  // Map-of-maps of rationals keyed by row and column identifiers; absent
  // cells take the default (zero unless stated otherwise by the schema).
  std::optional<RationalMatrix> matrix(const Json& doc, const std::string& key,
                                       const std::vector<std::string>& rows,
                                       const std::vector<std::string>& cols, bool required,
                                       const Rational& default_value = Rational(0)) {
    RationalMatrix out(rows.size(), RationalVector(cols.size(), default_value));
    if (!doc.contains(key)) {
      if (required) error("/" + key, "SchemaError", "missing section");
      return required ? std::nullopt : std::make_optional(out);
    }
    if (!doc[key].is_object()) {
      error("/" + key, "SchemaError", "expected an object keyed by identifier");
      return std::nullopt;
    }
    for (const auto& [row_id, row_doc] : doc[key].items()) {
      const auto row = index_of(rows, row_id);
      if (!row) {
        error("/" + key + "/" + row_id, "DanglingIdentifier", "unknown identifier '" + row_id + "'");
        return std::nullopt;
      }
      if (!row_doc.is_object()) {
        error("/" + key + "/" + row_id, "SchemaError", "expected an object keyed by identifier");
        return std::nullopt;
      }
      for (const auto& [col_id, cell] : row_doc.items()) {
        const auto col = index_of(cols, col_id);
        if (!col) {
          error("/" + key + "/" + row_id + "/" + col_id, "DanglingIdentifier",
                "unknown identifier '" + col_id + "'");
          return std::nullopt;
        }
        auto value = rational(cell, "/" + key + "/" + row_id + "/" + col_id);
        if (!value) return std::nullopt;
        out[*row][*col] = *value;
      }
    }
    return out;
  }

  std::optional<StrictPreferences> preferences(const Json& doc,
                                               const std::vector<std::string>& agents,
                                               const std::vector<std::string>& objects) {
    if (!doc.contains("preferences") || !doc["preferences"].is_object()) {
      error("/preferences", "SchemaError", "expected an object keyed by agent");
      return std::nullopt;
    }
    std::vector<std::vector<int>> order(agents.size());
    std::vector<bool> provided(agents.size(), false);
    for (const auto& [agent_id, ranking] : doc["preferences"].items()) {
      const auto agent = index_of(agents, agent_id);
      if (!agent) {
        error("/preferences/" + agent_id, "DanglingIdentifier",
              "unknown agent '" + agent_id + "'");
        return std::nullopt;
      }
      if (!ranking.is_array()) {
        error("/preferences/" + agent_id, "SchemaError", "expected an array of object identifiers");
        return std::nullopt;
      }
      std::vector<int> ranked;
      for (const auto& cell : ranking) {
        if (!cell.is_string()) {
          error("/preferences/" + agent_id, "SchemaError", "expected object identifiers");
          return std::nullopt;
        }
        const auto object = index_of(objects, cell.get<std::string>());
        if (!object) {
          error("/preferences/" + agent_id, "DanglingIdentifier",
                "unknown object '" + cell.get<std::string>() + "'");
          return std::nullopt;
        }
        ranked.push_back(*object);
      }
      order[*agent] = std::move(ranked);
      provided[*agent] = true;
    }
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (!provided[i]) {
        error("/preferences", "SchemaError", "missing ranking for agent '" + agents[i] + "'");
        return std::nullopt;
      }
    }
    try {
      return StrictPreferences::from_order(std::move(order), static_cast<int>(objects.size()));
    } catch (const std::invalid_argument& e) {
      error("/preferences", "InvariantViolation", e.what());
      return std::nullopt;
    }
  }

  std::optional<WeakPriorities> priorities(const Json& doc,
                                           const std::vector<std::string>& agents,
                                           const std::vector<std::string>& objects) {
    if (!doc.contains("priorities") || !doc["priorities"].is_object()) {
      error("/priorities", "SchemaError", "expected an object keyed by object");
      return std::nullopt;
    }
    std::vector<std::vector<std::vector<int>>> classes(objects.size());
    std::vector<bool> provided(objects.size(), false);
    for (const auto& [object_id, ranking] : doc["priorities"].items()) {
      const auto object = index_of(objects, object_id);
      if (!object) {
        error("/priorities/" + object_id, "DanglingIdentifier",
              "unknown object '" + object_id + "'");
        return std::nullopt;
      }
      if (!ranking.is_array()) {
        error("/priorities/" + object_id, "SchemaError",
              "expected an array of indifference classes");
        return std::nullopt;
      }
      for (const auto& cls : ranking) {
        if (!cls.is_array()) {
          error("/priorities/" + object_id, "SchemaError",
                "each indifference class must be an array of agents");
          return std::nullopt;
        }
        std::vector<int> members;
        for (const auto& cell : cls) {
          if (!cell.is_string()) {
            error("/priorities/" + object_id, "SchemaError", "expected agent identifiers");
            return std::nullopt;
          }
          const auto agent = index_of(agents, cell.get<std::string>());
          if (!agent) {
            error("/priorities/" + object_id, "DanglingIdentifier",
                  "unknown agent '" + cell.get<std::string>() + "'");
            return std::nullopt;
          }
          members.push_back(*agent);
        }
        classes[*object].push_back(std::move(members));
      }
      provided[*object] = true;
    }
    for (std::size_t o = 0; o < objects.size(); ++o) {
      if (!provided[o]) {
        error("/priorities", "SchemaError", "missing ranking for object '" + objects[o] + "'");
        return std::nullopt;
      }
    }
    try {
      return WeakPriorities::from_classes(std::move(classes), static_cast<int>(agents.size()));
    } catch (const std::invalid_argument& e) {
      error("/priorities", "InvariantViolation", e.what());
      return std::nullopt;
    }
  }

  void invariants(const std::vector<std::string>& messages, const std::string& path) {
    for (const auto& m : messages) error(path, "InvariantViolation", m);
  }
};

}  // namespace detail

inline ParseResult parse_instance_json(const Json& doc) {
  ParseResult result;
  detail::Parser p;
  auto finish = [&result, &p]() {
    result.errors = std::move(p.errors);
    if (!result.errors.empty()) result.instance.reset();
    return std::move(result);
  };

  if (!doc.is_object()) {
    p.error("/", "SchemaError", "instance document must be a JSON object");
    return finish();
  }
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != kSchemaVersion) {
    p.error("/schema_version", "SchemaError", "expected schema_version 1");
    return finish();
  }
  if (!doc.contains("model") || !doc["model"].is_string()) {
    p.error("/model", "SchemaError", "missing model tag");
    return finish();
  }
  const std::string model = doc["model"].get<std::string>();

  const auto agents = p.id_list(doc, "agents");
  const auto objects = p.id_list(doc, "objects");
  if (!agents || !objects) return finish();
  auto prefs = p.preferences(doc, *agents, *objects);
  if (!prefs) return finish();

  if (model == "fee" || model == "time_exchange") {
    auto endowments = p.matrix(doc, "endowments", *agents, *objects, true);
    if (!endowments) return finish();
    FeeProblem fee{*agents, *objects, std::move(*endowments), std::move(*prefs)};
    p.invariants(fee.validate(), "/endowments");
    if (model == "fee") {
      result.instance = std::move(fee);
      return finish();
    }
    auto upper = p.matrix(doc, "upper_bounds", *agents, *objects, false, Rational(1));
    auto lower = p.matrix(doc, "lower_bounds", *agents, *objects, false);
    if (!upper || !lower) return finish();
    TimeExchangeProblem te{std::move(fee), std::move(*upper), std::move(*lower)};
    p.invariants(te.validate(), "/");
    result.instance = std::move(te);
    return finish();
  }

  if (model == "house_allocation") {
    HouseAllocationProblem ha{*agents, *objects, std::move(*prefs)};
    if (agents->size() != objects->size()) {
      p.error("/objects", "InvariantViolation", "house allocation needs equal counts");
    }
    result.instance = std::move(ha);
    return finish();
  }

  if (model == "housing_market") {
    if (!doc.contains("owns") || !doc["owns"].is_object()) {
      p.error("/owns", "SchemaError", "expected an object mapping agent to owned object");
      return finish();
    }
    std::vector<int> owned(agents->size(), -1);
    for (const auto& [agent_id, object_cell] : doc["owns"].items()) {
      const auto agent = detail::Parser::index_of(*agents, agent_id);
      if (!agent) {
        p.error("/owns/" + agent_id, "DanglingIdentifier", "unknown agent '" + agent_id + "'");
        return finish();
      }
      if (!object_cell.is_string()) {
        p.error("/owns/" + agent_id, "SchemaError", "expected an object identifier");
        return finish();
      }
      const auto object = detail::Parser::index_of(*objects, object_cell.get<std::string>());
      if (!object) {
        p.error("/owns/" + agent_id, "DanglingIdentifier",
                "unknown object '" + object_cell.get<std::string>() + "'");
        return finish();
      }
      owned[*agent] = *object;
    }
    HousingMarketProblem hm{*agents, *objects, std::move(owned), std::move(*prefs)};
    for (int o : hm.owned_object) {
      if (o == -1) {
        p.error("/owns", "InvariantViolation", "every agent must own exactly one object");
        return finish();
      }
    }
    p.invariants(hm.validate(), "/owns");
    result.instance = std::move(hm);
    return finish();
  }

  if (model == "het") {
    std::vector<int> owner_of(objects->size(), -1);
    if (doc.contains("tenants")) {
      if (!doc["tenants"].is_object()) {
        p.error("/tenants", "SchemaError", "expected an object mapping tenant to owned object");
        return finish();
      }
      for (const auto& [agent_id, object_cell] : doc["tenants"].items()) {
        const auto agent = detail::Parser::index_of(*agents, agent_id);
        if (!agent) {
          p.error("/tenants/" + agent_id, "DanglingIdentifier",
                  "unknown agent '" + agent_id + "'");
          return finish();
        }
        if (!object_cell.is_string()) {
          p.error("/tenants/" + agent_id, "SchemaError", "expected an object identifier");
          return finish();
        }
        const auto object = detail::Parser::index_of(*objects, object_cell.get<std::string>());
        if (!object) {
          p.error("/tenants/" + agent_id, "DanglingIdentifier",
                  "unknown object '" + object_cell.get<std::string>() + "'");
          return finish();
        }
        if (owner_of[*object] != -1) {
          p.error("/tenants/" + agent_id, "DanglingIdentifier",
                  "object '" + object_cell.get<std::string>() + "' already claimed by '" +
                      (*agents)[owner_of[*object]] + "'");
          return finish();
        }
        owner_of[*object] = *agent;
      }
    }
    HetProblem het{*agents, *objects, std::move(owner_of), std::move(*prefs)};
    p.invariants(het.validate(), "/tenants");
    result.instance = std::move(het);
    return finish();
  }

  if (model == "pba" || model == "fdat_input") {
    auto priorities = p.priorities(doc, *agents, *objects);
    if (!priorities) return finish();
    if (model == "pba") {
      std::vector<long> copies(objects->size(), 1);
      if (doc.contains("copies")) {
        if (!doc["copies"].is_object()) {
          p.error("/copies", "SchemaError", "expected an object keyed by object");
          return finish();
        }
        for (const auto& [object_id, cell] : doc["copies"].items()) {
          const auto object = detail::Parser::index_of(*objects, object_id);
          if (!object) {
            p.error("/copies/" + object_id, "DanglingIdentifier",
                    "unknown object '" + object_id + "'");
            return finish();
          }
          if (!cell.is_number_integer()) {
            p.error("/copies/" + object_id, "SchemaError", "expected an integer copy count");
            return finish();
          }
          copies[*object] = cell.get<long>();
        }
      }
      PbaProblem pba{*agents, *objects, std::move(copies), std::move(*priorities),
                     std::move(*prefs)};
      p.invariants(pba.validate(), "/copies");
      result.instance = std::move(pba);
      return finish();
    }
    auto matrix = p.matrix(doc, "assignment", *agents, *objects, true);
    if (!matrix) return finish();
    Assignment assignment;
    assignment.p = std::move(*matrix);
    FdatInput input{*agents, *objects, std::move(assignment), std::move(*priorities),
                    std::move(*prefs)};
    for (int i = 0; i < input.num_agents(); ++i) {
      for (int o = 0; o < input.num_objects(); ++o) {
        if (input.assignment.at(i, o).is_negative()) {
          p.error("/assignment", "InvariantViolation", "negative share");
        }
      }
      if (input.assignment.row_sum(i) > Rational(1)) {
        p.error("/assignment", "InvariantViolation",
                "row of '" + input.agents[i] + "' exceeds unit mass");
      }
    }
    result.instance = std::move(input);
    return finish();
  }

  if (model == "constrained") {
    if (!doc.contains("capacities") || !doc["capacities"].is_object()) {
      p.error("/capacities", "SchemaError", "expected an object keyed by hospital");
      return finish();
    }
    std::vector<long> capacities(objects->size(), 0);
    for (const auto& [hospital_id, cell] : doc["capacities"].items()) {
      const auto hospital = detail::Parser::index_of(*objects, hospital_id);
      if (!hospital) {
        p.error("/capacities/" + hospital_id, "DanglingIdentifier",
                "unknown hospital '" + hospital_id + "'");
        return finish();
      }
      if (!cell.is_number_integer()) {
        p.error("/capacities/" + hospital_id, "SchemaError", "expected an integer capacity");
        return finish();
      }
      capacities[*hospital] = cell.get<long>();
    }
    std::vector<RegionConstraint> constraints;
    if (doc.contains("constraints")) {
      if (!doc["constraints"].is_array()) {
        p.error("/constraints", "SchemaError", "expected an array of constraints");
        return finish();
      }
      for (std::size_t idx = 0; idx < doc["constraints"].size(); ++idx) {
        const auto& entry = doc["constraints"][idx];
        const std::string path = "/constraints/" + std::to_string(idx);
        if (!entry.is_object() || !entry.contains("hospitals") || !entry["hospitals"].is_array() ||
            !entry.contains("floor") || !entry["floor"].is_number_integer() ||
            !entry.contains("ceiling") || !entry["ceiling"].is_number_integer()) {
          p.error(path, "SchemaError", "expected {hospitals, floor, ceiling}");
          return finish();
        }
        RegionConstraint c;
        for (const auto& cell : entry["hospitals"]) {
          if (!cell.is_string()) {
            p.error(path + "/hospitals", "SchemaError", "expected hospital identifiers");
            return finish();
          }
          const auto hospital = detail::Parser::index_of(*objects, cell.get<std::string>());
          if (!hospital) {
            p.error(path + "/hospitals", "DanglingIdentifier",
                    "unknown hospital '" + cell.get<std::string>() + "'");
            return finish();
          }
          c.hospitals.push_back(*hospital);
        }
        std::sort(c.hospitals.begin(), c.hospitals.end());
        c.floor = entry["floor"].get<long>();
        c.ceiling = entry["ceiling"].get<long>();
        constraints.push_back(std::move(c));
      }
    }
    ConstrainedMatchProblem cm{*agents, *objects, std::move(capacities), std::move(constraints),
                               std::move(*prefs)};
    p.invariants(cm.validate(), "/constraints");
    result.instance = std::move(cm);
    return finish();
  }

  p.error("/model", "UnknownModel", "unknown model tag '" + model + "'");
  return finish();
}

inline ParseResult parse_instance(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    ParseResult result;
    result.errors.push_back({"/", "SchemaError", "document is not valid JSON"});
    return result;
  }
  return parse_instance_json(doc);
}

// ---------------------------------------------------------------------------
// Serialization. All output is canonical: declared identifier order, lowest
// terms, zero entries omitted from instance sections but kept in assignment
// matrices.

inline Json rational_to_json(const Rational& r) { return Json(r.str()); }

inline Json matrix_to_json(const RationalMatrix& m, const std::vector<std::string>& rows,
                           const std::vector<std::string>& cols, bool dense) {
  Json out = Json::object();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Json row = Json::object();
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (dense || !m[i][j].is_zero()) row[cols[j]] = rational_to_json(m[i][j]);
    }
    if (dense || !row.empty()) out[rows[i]] = std::move(row);
  }
  return out;
}

inline Json assignment_to_json(const Assignment& assignment,
                               const std::vector<std::string>& agents,
                               const std::vector<std::string>& objects) {
  Json doc = Json::object();
  doc["schema_version"] = kSchemaVersion;
  doc["type"] = "assignment";
  doc["agents"] = agents;
  doc["objects"] = objects;
  doc["matrix"] = matrix_to_json(assignment.p, agents, objects, /*dense=*/true);
  return doc;
}

struct AssignmentDoc {
  std::vector<std::string> agents;
  std::vector<std::string> objects;
  Assignment assignment;
};

struct AssignmentParseResult {
  std::optional<AssignmentDoc> doc;
  std::vector<ParseError> errors;
  bool ok() const { return doc.has_value() && errors.empty(); }
};

inline AssignmentParseResult parse_assignment(const std::string& text) {
  AssignmentParseResult result;
  detail::Parser p;
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    p.error("/", "SchemaError", "document is not a JSON object");
    result.errors = std::move(p.errors);
    return result;
  }
  if (!doc.contains("type") || doc["type"] != "assignment") {
    p.error("/type", "SchemaError", "expected an assignment document");
    result.errors = std::move(p.errors);
    return result;
  }
  const auto agents = p.id_list(doc, "agents");
  const auto objects = p.id_list(doc, "objects");
  if (agents && objects) {
    auto matrix = p.matrix(doc, "matrix", *agents, *objects, true);
    if (matrix) {
      AssignmentDoc out{*agents, *objects, {}};
      out.assignment.p = std::move(*matrix);
      result.doc = std::move(out);
    }
  }
  result.errors = std::move(p.errors);
  if (!result.errors.empty()) result.doc.reset();
  return result;
}

inline Json trace_to_json(const StepTrace& trace, const Assignment& final_assignment,
                          const std::vector<std::string>& agents,
                          const std::vector<std::string>& objects) {
  Json doc = Json::object();
  doc["schema_version"] = kSchemaVersion;
  doc["type"] = "trace";
  doc["agents"] = agents;
  doc["objects"] = objects;
  Json steps = Json::array();
  for (const auto& step : trace.steps) {
    Json s = Json::object();
    s["step"] = step.step;
    s["kind"] = step.kind;
    s["agents"] = step.agents;
    s["objects"] = step.objects;
    Json favorites = Json::object();
    for (const auto& [agent, object] : step.favorites) favorites[agent] = object;
    s["favorites"] = std::move(favorites);
    Json split = Json::array();
    for (std::size_t e = 0; e < step.split_entries.size(); ++e) {
      split.push_back(Json{{"row", step.split_entries[e].first},
                           {"col", step.split_entries[e].second},
                           {"value", rational_to_json(step.split_values[e])}});
    }
    s["split"] = std::move(split);
    Json quotas = Json::object();
    for (const auto& [node, q] : step.quotas) quotas[node] = rational_to_json(q);
    s["quotas"] = std::move(quotas);
    Json solution = Json::object();
    for (const auto& [node, x] : step.solution) solution[node] = rational_to_json(x);
    s["solution"] = std::move(solution);
    s["blocks"] = step.blocks;
    s["residual"] = step.residual;
    s["binding"] = step.binding;
    if (step.kind == "eating") s["duration"] = rational_to_json(step.duration);
    Json updates = Json::array();
    for (const auto& u : step.updates) {
      updates.push_back(Json{{"agent", u.agent}, {"object", u.object},
                             {"delta", rational_to_json(u.delta)}});
    }
    s["updates"] = std::move(updates);
    steps.push_back(std::move(s));
  }
  doc["steps"] = std::move(steps);
  doc["final_assignment"] = matrix_to_json(final_assignment.p, agents, objects, /*dense=*/true);
  return doc;
}

inline Json instance_to_json(const MarketInstance& instance) {
  Json doc = Json::object();
  doc["schema_version"] = kSchemaVersion;

  auto put_prefs = [&doc](const std::vector<std::string>& agents,
                          const std::vector<std::string>& objects,
                          const StrictPreferences& prefs) {
    Json out = Json::object();
    for (std::size_t i = 0; i < agents.size(); ++i) {
      Json ranking = Json::array();
      for (int o : prefs.order[i]) ranking.push_back(objects[o]);
      out[agents[i]] = std::move(ranking);
    }
    doc["preferences"] = std::move(out);
  };
  auto put_priorities = [&doc](const std::vector<std::string>& agents,
                               const std::vector<std::string>& objects,
                               const WeakPriorities& priorities) {
    Json out = Json::object();
    for (std::size_t o = 0; o < objects.size(); ++o) {
      Json ranking = Json::array();
      for (const auto& cls : priorities.classes[o]) {
        Json members = Json::array();
        for (int i : cls) members.push_back(agents[i]);
        ranking.push_back(std::move(members));
      }
      out[objects[o]] = std::move(ranking);
    }
    doc["priorities"] = std::move(out);
  };

  std::visit(
      [&](const auto& problem) {
        using T = std::decay_t<decltype(problem)>;
        if constexpr (std::is_same_v<T, FeeProblem>) {
          doc["model"] = "fee";
          doc["agents"] = problem.agents;
          doc["objects"] = problem.objects;
          put_prefs(problem.agents, problem.objects, problem.prefs);
          doc["endowments"] =
              matrix_to_json(problem.endowments, problem.agents, problem.objects, false);
        } else if constexpr (std::is_same_v<T, HouseAllocationProblem>) {
          doc["model"] = "house_allocation";
          doc["agents"] = problem.agents;
          doc["objects"] = problem.objects;
          put_prefs(problem.agents, problem.objects, problem.prefs);
        } else if constexpr (std::is_same_v<T, HousingMarketProblem>) {
          doc["model"] = "housing_market";
          doc["agents"] = problem.agents;
          doc["objects"] = problem.objects;
          put_prefs(problem.agents, problem.objects, problem.prefs);
          Json owns = Json::object();
          for (int i = 0; i < problem.num_agents(); ++i) {
            owns[problem.agents[i]] = problem.objects[problem.owned_object[i]];
          }
          doc["owns"] = std::move(owns);
        } else if constexpr (std::is_same_v<T, HetProblem>) {
          doc["model"] = "het";
          doc["agents"] = problem.agents;
          doc["objects"] = problem.objects;
          put_prefs(problem.agents, problem.objects, problem.prefs);
          Json tenants = Json::object();
          for (int o = 0; o < problem.num_objects(); ++o) {
            if (problem.owner_of[o] != -1) {
              tenants[problem.agents[problem.owner_of[o]]] = problem.objects[o];
            }
          }
          doc["tenants"] = std::move(tenants);
        } else if constexpr (std::is_same_v<T, PbaProblem>) {
          doc["model"] = "pba";
          doc["agents"] = problem.agents;
          doc["objects"] = problem.objects;
          put_prefs(problem.agents, problem.objects, problem.prefs);
          put_priorities(problem.agents, problem.objects, problem.priorities);
          Json copies = Json::object();
          for (int o = 0; o < problem.num_objects(); ++o) {
            if (problem.copies[o] != 1) copies[problem.objects[o]] = problem.copies[o];
          }
          if (!copies.empty()) doc["copies"] = std::move(copies);
        } else if constexpr (std::is_same_v<T, ConstrainedMatchProblem>) {
          doc["model"] = "constrained";
          doc["agents"] = problem.doctors;
          doc["objects"] = problem.hospitals;
          put_prefs(problem.doctors, problem.hospitals, problem.prefs);
          Json capacities = Json::object();
          for (int h = 0; h < problem.num_hospitals(); ++h) {
            capacities[problem.hospitals[h]] = problem.capacities[h];
          }
          doc["capacities"] = std::move(capacities);
          Json constraints = Json::array();
          for (const auto& c : problem.constraints) {
            Json names = Json::array();
            for (int h : c.hospitals) names.push_back(problem.hospitals[h]);
            constraints.push_back(
                Json{{"hospitals", std::move(names)}, {"floor", c.floor}, {"ceiling", c.ceiling}});
          }
          doc["constraints"] = std::move(constraints);
        } else if constexpr (std::is_same_v<T, TimeExchangeProblem>) {
          doc["model"] = "time_exchange";
          doc["agents"] = problem.fee.agents;
          doc["objects"] = problem.fee.objects;
          put_prefs(problem.fee.agents, problem.fee.objects, problem.fee.prefs);
          doc["endowments"] =
              matrix_to_json(problem.fee.endowments, problem.fee.agents, problem.fee.objects, false);
          doc["upper_bounds"] =
              matrix_to_json(problem.upper, problem.fee.agents, problem.fee.objects, true);
          doc["lower_bounds"] =
              matrix_to_json(problem.lower, problem.fee.agents, problem.fee.objects, false);
        } else if constexpr (std::is_same_v<T, FdatInput>) {
          doc["model"] = "fdat_input";
          doc["agents"] = problem.agents;
          doc["objects"] = problem.objects;
          put_prefs(problem.agents, problem.objects, problem.prefs);
          put_priorities(problem.agents, problem.objects, problem.priorities);
          doc["assignment"] =
              matrix_to_json(problem.assignment.p, problem.agents, problem.objects, false);
        }
      },
      instance);
  return doc;
}

// Canonical byte form: two-space indent plus trailing newline.
inline std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace tradex::io
