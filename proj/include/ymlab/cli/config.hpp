#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ymlab/errors.hpp"

namespace ymlab::cli {

// Usage and configuration problems; the dispatcher maps these to exit code 2.
struct config_error : error {
  using error::error;
};

enum class ParamType { integer, number, string, boolean, integer_array, number_array };

struct Param {
  std::string key;
  ParamType type;
  nlohmann::json fallback;
  std::string description;
  std::optional<double> minimum = std::nullopt;
  bool exclusive = false;  // minimum itself is not allowed
  std::vector<std::string> choices = {};
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"liealg verify",      "quadrupole energy", "quadrupole minimize",
                                             "quadrupole report",  "spectral count",    "spectral heat-trace",
                                             "spectral bs-compare", "spectral find-t0", "bounds report"};
  return c;
}

// Parameter block consulted by each command.
inline std::string block_of(const std::string& command) { return command.substr(0, command.find(' ')); }

inline const std::map<std::string, std::vector<Param>>& parameter_blocks() {
  using T = ParamType;
  static const std::map<std::string, std::vector<Param>> blocks = {
      {"liealg",
       {
           {"algebra", T::string, "su2", "structure algebra", std::nullopt, false,
            {"su2", "so3", "so3-vector", "su3", "u1"}},
           {"samples", T::integer, 10000, "random samples per property", 1.0},
           {"n", T::integer, 4, "base dimension", 2.0},
           {"ascent_samples", T::integer, 64, "random starts for the gamma0 and gamma1 estimates", 1.0},
           {"ascent_steps", T::integer, 500, "projected ascent steps per start", 1.0},
       }},
      {"quadrupole",
       {
           {"l", T::integer, 3, "odd n+ of the (l, 3) bundle", 1.0},
           {"delta", T::number, std::numbers::pi / 24.0, "plateau width of the test profile", 0.0, true},
           {"grid", T::integer, 1024, "cell-centred nodes on (0, pi/3)", 64.0},
           {"profile", T::string, "", "profile file to use instead of the test profile"},
           {"literal", T::boolean, false, "evaluate the G2 slope term unsquared"},
           {"max_iters", T::integer, 200, "minimizer iteration cap", 1.0},
           {"tol", T::number, 1e-7, "minimizer gradient-norm tolerance", 0.0, true},
           {"profile_out", T::string, "", "where to write the minimized profile"},
           {"l_list", T::integer_array, nlohmann::json::array({3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31, 33,
                                                              35, 37, 39}),
            "odd l values for the growth report", 3.0},
           {"minimize", T::boolean, true, "minimize each test profile in the growth report"},
       }},
      {"spectral",
       {
           {"preset", T::string, "constant", "potential shape", std::nullopt, false,
            {"constant", "gaussian", "double-bump", "file"}},
           {"value", T::number, 16.0, "constant value or bump amplitude", 0.0},
           {"width", T::number, 0.4, "bump width", 0.0, true},
           {"file", T::string, "", "two-column theta, V table for the file preset"},
           {"epsilon", T::number, -1.0, "regularization shift; negative selects 1e-6 max(1, max V)"},
           {"grid", T::integer, 2000, "cells on (0, pi)", 256.0},
           {"t_list", T::number_array, nlohmann::json::array({0.05, 0.1, 0.5, 1.0, 5.0}), "heat-trace times", 0.0, true},
           {"f0", T::number, 2.0, "|F| amplitude for find-t0", 0.0},
           {"curvature", T::string, "constant", "|F| profile for find-t0", std::nullopt, false, {"constant", "gaussian"}},
           {"weyl", T::number, 0.0, "constant |W| for find-t0", 0.0},
           {"gamma1", T::number, 4.0 * std::sqrt(3.0) / 3.0, "gamma1 of the structure algebra", 0.0, true},
       }},
      {"bounds",
       {
           {"record", T::string, "S4", "catalog record name"},
           {"record_file", T::string, "", "JSON geometry record to use instead of the catalog"},
           {"int_F2", T::number, 0.0, "int |F|^2", 0.0},
           {"int_WF", T::number, 0.0, "int |W| |F|", 0.0},
           {"dim_g", T::number, 3.0, "dimension of the structure algebra", 1.0},
           {"allow_external", T::boolean, false, "let bounds use externally sourced record fields"},
       }},
  };
  return blocks;
}

struct RunConfig {
  std::string command;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  std::string output_path;  // empty selects the default directory
  std::string format = "json";
  nlohmann::json params = nlohmann::json::object();  // every block, defaults filled in

  const nlohmann::json& block() const { return params.at(block_of(command)); }
};

namespace detail {

inline const char* type_name(ParamType t) {
  switch (t) {
    case ParamType::integer: return "integer";
    case ParamType::number: return "number";
    case ParamType::string: return "string";
    case ParamType::boolean: return "boolean";
    case ParamType::integer_array: return "array of integers";
    case ParamType::number_array: return "array of numbers";
  }
  return "?";
}

inline bool matches(ParamType t, const nlohmann::json& v) {
  auto all = [&](auto pred) {
    if (!v.is_array() || v.empty()) return false;
    for (const auto& x : v)
      if (!pred(x)) return false;
    return true;
  };
  switch (t) {
    case ParamType::integer: return v.is_number_integer();
    case ParamType::number: return v.is_number() && std::isfinite(v.get<double>());
    case ParamType::string: return v.is_string();
    case ParamType::boolean: return v.is_boolean();
    case ParamType::integer_array: return all([](const nlohmann::json& x) { return x.is_number_integer(); });
    case ParamType::number_array: return all([](const nlohmann::json& x) { return x.is_number(); });
  }
  return false;
}

inline void check_param(const std::string& block, const Param& p, const nlohmann::json& v) {
  const std::string where = block + "." + p.key;
  if (!matches(p.type, v)) throw config_error(where + ": expected " + type_name(p.type) + ", got " + v.dump());
  if (p.minimum) {
    auto below = [&](const nlohmann::json& x) { return x.get<double>() < *p.minimum; };
    const bool bad = v.is_array() ? std::any_of(v.begin(), v.end(), below) : below(v);
    if (bad) throw config_error(where + ": must be at least " + nlohmann::json(*p.minimum).dump() + ", got " + v.dump());
    auto at_min = [&](const nlohmann::json& x) { return x.get<double>() == *p.minimum; };
    if (p.exclusive && (v.is_array() ? std::any_of(v.begin(), v.end(), at_min) : at_min(v)))
      throw config_error(where + ": must exceed " + nlohmann::json(*p.minimum).dump());
  }
  if (!p.choices.empty() && std::find(p.choices.begin(), p.choices.end(), v.get<std::string>()) == p.choices.end()) {
    std::string list;
    for (const auto& c : p.choices) list += (list.empty() ? "" : ", ") + c;
    throw config_error(where + ": '" + v.get<std::string>() + "' is not one of " + list);
  }
}

}  // namespace detail

// Validates a JSON run description and fills defaults.  Unknown keys at any
// level are rejected.
inline RunConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw config_error("config: top level must be an object");
  const auto& blocks = parameter_blocks();
  for (const auto& [key, value] : j.items()) {
    if (key == "command" || key == "seed" || key == "strict" || key == "output") continue;
    if (!blocks.count(key)) throw config_error("config: unknown key '" + key + "'");
    if (!value.is_object()) throw config_error("config: block '" + key + "' must be an object");
  }
  RunConfig c;
  if (!j.contains("command") || !j["command"].is_string()) throw config_error("config: 'command' (string) is required");
  c.command = j["command"].get<std::string>();
  const auto& cmds = commands();
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end())
    throw config_error("config: unknown command '" + c.command + "'");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw config_error("config: seed must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("strict")) {
    if (!j["strict"].is_boolean()) throw config_error("config: strict must be a boolean");
    c.strict = j["strict"].get<bool>();
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    if (!o.is_object()) throw config_error("config: output must be an object");
    for (const auto& [key, value] : o.items()) {
      if (key == "path" && value.is_string()) c.output_path = value.get<std::string>();
      else if (key == "format" && value.is_string()) c.format = value.get<std::string>();
      else throw config_error("config: output." + key + " is unknown or has the wrong type");
    }
    if (c.format != "json" && c.format != "csv") throw config_error("config: output.format must be json or csv");
  }
  for (const auto& [name, params] : blocks) {
    nlohmann::json filled = nlohmann::json::object();
    const nlohmann::json given = j.contains(name) ? j[name] : nlohmann::json::object();
    for (const auto& [key, value] : given.items()) {
      const bool known = std::any_of(params.begin(), params.end(), [&](const Param& p) { return p.key == key; });
      if (!known) throw config_error("config: unknown key '" + name + "." + key + "'");
    }
    for (const auto& p : params) {
      const nlohmann::json v = given.contains(p.key) ? given[p.key] : p.fallback;
      detail::check_param(name, p, v);
      filled[p.key] = v;
    }
    c.params[name] = filled;
  }
  if (c.command == "liealg verify" && !c.seed) throw config_error("config: 'liealg verify' is randomized and needs a seed");
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

// JSON Schema for the run configuration.
inline nlohmann::json config_schema() {
  nlohmann::json props = nlohmann::json::object();
  props["command"] = {{"type", "string"}, {"enum", commands()}};
  props["seed"] = {{"type", "integer"}, {"minimum", 0}, {"description", "required by liealg verify"}};
  props["strict"] = {{"type", "boolean"}, {"default", false},
                     {"description", "treat reported discrepancies as failed checks"}};
  props["output"] = {{"type", "object"},
                     {"additionalProperties", false},
                     {"properties",
                      {{"path", {{"type", "string"}}},
                       {"format", {{"type", "string"}, {"enum", {"json", "csv"}}, {"default", "json"}}}}}};
  for (const auto& [name, params] : parameter_blocks()) {
    nlohmann::json bp = nlohmann::json::object();
    for (const auto& p : params) {
      nlohmann::json s;
      switch (p.type) {
        case ParamType::integer: s["type"] = "integer"; break;
        case ParamType::number: s["type"] = "number"; break;
        case ParamType::string: s["type"] = "string"; break;
        case ParamType::boolean: s["type"] = "boolean"; break;
        case ParamType::integer_array: s = {{"type", "array"}, {"items", {{"type", "integer"}}}, {"minItems", 1}}; break;
        case ParamType::number_array: s = {{"type", "array"}, {"items", {{"type", "number"}}}, {"minItems", 1}}; break;
      }
      if (p.minimum) {
        auto& target = s.contains("items") ? s["items"] : s;
        target[p.exclusive ? "exclusiveMinimum" : "minimum"] = *p.minimum;
      }
      if (!p.choices.empty()) s["enum"] = p.choices;
      s["default"] = p.fallback;
      s["description"] = p.description;
      bp[p.key] = s;
    }
    props[name] = {{"type", "object"}, {"additionalProperties", false}, {"properties", bp}};
  }
  return {{"$schema", "http://json-schema.org/draft-07/schema#"},
          {"title", "ymlab run configuration"},
          {"type", "object"},
          {"additionalProperties", false},
          {"required", {"command"}},
          {"properties", props}};
}

}  // namespace ymlab::cli
