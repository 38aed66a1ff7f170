// Copyright 2026 The svoctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svoctl/config.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "svoctl/errors.hpp"

namespace svoctl {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const char* section) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }) == allowed.end()) {
      throw ConfigError(std::string("unknown key \"") + key + "\" in " + section);
    }
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw ConfigError(std::string("\"") + key + "\" must be a number");
  }
  return obj[key].get<double>();
}

Horizon parse_horizon(const json& obj, Horizon fallback) {
  check_keys(obj, {"t0", "tf", "dt"}, "horizon");
  Horizon h = fallback;
  h.t0 = get_number(obj, "t0", h.t0);
  h.tf = get_number(obj, "tf", h.tf);
  h.dt = get_number(obj, "dt", h.dt);
  return h;
}

IdmParams parse_idm(const json& obj) {
  check_keys(obj, {"v0", "tau1", "s0", "a", "b"}, "idm");
  IdmParams p;
  p.v0 = get_number(obj, "v0", p.v0);
  p.tau1 = get_number(obj, "tau1", p.tau1);
  p.s0 = get_number(obj, "s0", p.s0);
  p.a = get_number(obj, "a", p.a);
  p.b = get_number(obj, "b", p.b);
  return p;
}

OvrvParams parse_ovrv(const json& obj) {
  check_keys(obj, {"k1", "k2", "eta", "tau2"}, "ovrv");
  OvrvParams p;
  p.k1 = get_number(obj, "k1", p.k1);
  p.k2 = get_number(obj, "k2", p.k2);
  p.eta = get_number(obj, "eta", p.eta);
  p.tau2 = get_number(obj, "tau2", p.tau2);
  return p;
}

VehicleSpec parse_vehicle(const json& obj) {
  check_keys(obj, {"kind", "length", "idm", "ovrv"}, "platoon entry");
  if (!obj.contains("kind") || !obj["kind"].is_string()) {
    throw ConfigError("platoon entry needs a \"kind\" of \"hv\" or \"av\"");
  }
  const std::string kind = obj["kind"].get<std::string>();
  const double length = get_number(obj, "length", 5.0);
  if (kind == "hv") {
    if (obj.contains("ovrv")) {
      throw ConfigError("\"ovrv\" params on a human-driven platoon entry");
    }
    return make_human_driven(obj.contains("idm") ? parse_idm(obj["idm"]) : IdmParams{},
                             length);
  }
  if (kind == "av") {
    if (obj.contains("idm")) {
      throw ConfigError("\"idm\" params on an autonomous platoon entry");
    }
    return make_autonomous(obj.contains("ovrv") ? parse_ovrv(obj["ovrv"]) : OvrvParams{},
                           length);
  }
  throw ConfigError("unknown vehicle kind \"" + kind + "\"");
}

LeadProfile parse_lead(const json& obj, const std::filesystem::path& base_dir) {
  check_keys(obj, {"builtin", "csv", "samples"}, "lead");
  const int sources = int(obj.contains("builtin")) + int(obj.contains("csv")) +
                      int(obj.contains("samples"));
  if (sources != 1) {
    throw ConfigError("\"lead\" needs exactly one of \"builtin\", \"csv\", \"samples\"");
  }
  if (obj.contains("builtin")) {
    const std::string name = obj["builtin"].get<std::string>();
    if (name != "two-stop") {
      throw ConfigError("unknown builtin lead profile \"" + name + "\"");
    }
    return synthetic_two_stop_profile();
  }
  if (obj.contains("csv")) {
    std::filesystem::path path = obj["csv"].get<std::string>();
    if (path.is_relative() && !base_dir.empty()) {
      path = base_dir / path;
    }
    return load_lead_profile(path);
  }
  LeadProfile profile;
  for (const json& pair : obj["samples"]) {
    if (!pair.is_array() || pair.size() != 2) {
      throw ConfigError("\"samples\" entries must be [t, v] pairs");
    }
    profile.samples.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  return profile;
}

FollowerPayoff parse_payoff(const std::string& name) {
  if (name == "desired-speed") return FollowerPayoff::DesiredSpeed;
  if (name == "max-speed") return FollowerPayoff::MaxSpeed;
  if (name == "smoothness") return FollowerPayoff::Smoothness;
  throw ConfigError("unknown follower_payoff \"" + name + "\"");
}

ObjectiveParams parse_objective(const json& obj, ObjectiveParams fallback) {
  check_keys(obj, {"phi", "lambda", "s_d", "v0", "follower_payoff"}, "objective");
  ObjectiveParams p = fallback;
  p.phi.phi = get_number(obj, "phi", p.phi.phi);
  p.lambda = get_number(obj, "lambda", p.lambda);
  p.s_d = get_number(obj, "s_d", p.s_d);
  p.v0 = get_number(obj, "v0", p.v0);
  if (obj.contains("follower_payoff")) {
    p.follower_payoff = parse_payoff(obj["follower_payoff"].get<std::string>());
  }
  return p;
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& error) {
    throw ConfigError(std::string("config is not valid JSON: ") + error.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  check_keys(doc, {"horizon", "lead", "platoon", "objective", "bounds", "solver",
                   "initial", "window"},
             "config");

  RunConfig out;
  out.scenario = five_vehicle_preset();
  Scenario& s = out.scenario;

  try {
    if (doc.contains("horizon")) s.horizon = parse_horizon(doc["horizon"], s.horizon);
    if (doc.contains("lead")) s.lead = parse_lead(doc["lead"], base_dir);
    if (doc.contains("platoon")) {
      if (!doc["platoon"].is_array()) {
        throw ConfigError("\"platoon\" must be an array");
      }
      s.platoon.clear();
      for (const json& entry : doc["platoon"]) {
        s.platoon.push_back(parse_vehicle(entry));
      }
    }
    if (doc.contains("objective")) {
      s.objective = parse_objective(doc["objective"], s.objective);
    }
    if (doc.contains("bounds")) {
      check_keys(doc["bounds"], {"u_min", "u_max"}, "bounds");
      s.bounds.u_min = get_number(doc["bounds"], "u_min", s.bounds.u_min);
      s.bounds.u_max = get_number(doc["bounds"], "u_max", s.bounds.u_max);
    }
    if (doc.contains("solver")) {
      const json& sv = doc["solver"];
      check_keys(sv, {"epsilon", "n_max", "upsilon", "delta"}, "solver");
      s.solver.epsilon = get_number(sv, "epsilon", s.solver.epsilon);
      if (sv.contains("n_max")) {
        s.solver.n_max = sv["n_max"].get<std::size_t>();
      }
      s.solver.upsilon = get_number(sv, "upsilon", s.solver.upsilon);
      s.solver.delta = get_number(sv, "delta", s.solver.delta);
    }
    if (doc.contains("initial")) {
      const json& init = doc["initial"];
      check_keys(init, {"speed", "gaps"}, "initial");
      if (init.contains("speed")) {
        s.initial_speed = init["speed"].get<double>();
      }
      if (init.contains("gaps")) {
        s.initial_gaps = init["gaps"].get<std::vector<double>>();
      }
    }
    if (doc.contains("window")) {
      const json& w = doc["window"];
      if (!w.is_array() || w.size() != 2) {
        throw ConfigError("\"window\" must be [start, end]");
      }
      out.window = Window{w[0].get<double>(), w[1].get<double>()};
    }
  } catch (const json::exception& error) {
    throw ConfigError(std::string("malformed config value: ") + error.what());
  }

  try {
    validate(s);
  } catch (const std::exception& error) {
    throw ConfigError(std::string("invalid scenario: ") + error.what());
  }
  return out;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config: " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace svoctl
