// Copyright 2026 The dsrplan Authors
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

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "model.hpp"

namespace dsr {

using nlohmann::json;

namespace {

json vec3_to_json(const Vec3& v, PhaseSet phases) {
  json out = json::object();
  for (int p = 0; p < kNumPhases; ++p)
    if (has_phase(phases, p)) out[std::string(1, phase_letter(p))] = v[p];
  return out;
}

Vec3 vec3_from_json(const json& j, PhaseSet phases, const std::string& where) {
  Vec3 out = vec3_zero();
  if (j.is_number()) {
    // scalar shorthand: same value on every owned phase
    for (int p = 0; p < kNumPhases; ++p)
      if (has_phase(phases, p)) out[p] = j.get<double>();
    return out;
  }
  if (!j.is_object()) fail(ErrorCode::input, where + ": expected object or number");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key.size() != 1 || key[0] < 'a' || key[0] > 'c')
      fail(ErrorCode::input, where + ": bad phase key '" + key + "'");
    out[key[0] - 'a'] = it.value().get<double>();
  }
  return out;
}

json mat3_to_json(const Mat3& m) {
  json rows = json::array();
  for (int r = 0; r < kNumPhases; ++r) {
    json row = json::array();
    for (int c = 0; c < kNumPhases; ++c) row.push_back(m[r][c]);
    rows.push_back(row);
  }
  return rows;
}

Mat3 mat3_from_json(const json& j, const std::string& where) {
  Mat3 out = mat3_zero();
  if (!j.is_array() || j.size() != 3) fail(ErrorCode::input, where + ": expected 3x3 array");
  for (int r = 0; r < kNumPhases; ++r) {
    if (!j[r].is_array() || j[r].size() != 3)
      fail(ErrorCode::input, where + ": expected 3x3 array");
    for (int c = 0; c < kNumPhases; ++c) out[r][c] = j[r][c].get<double>();
  }
  return out;
}

json parse_document(const std::string& text, const std::string& what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) fail(ErrorCode::input, what + ": malformed JSON");
  return doc;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

void require_fields(const json& j, std::initializer_list<const char*> keys,
                    const std::string& where) {
  for (const char* k : keys)
    if (!j.contains(k)) fail(ErrorCode::input, where + ": missing field '" + k + "'");
}

}  // namespace

NetworkModel load_network_json(const std::string& text) {
  json doc = parse_document(text, "network");
  if (get_or<int>(doc, "schema_version", -1) != 1)
    fail(ErrorCode::input, "network: schema_version must be 1");
  require_fields(doc, {"kva_base", "buses", "edges"}, "network");

  NetworkModel model;
  model.name = get_or<std::string>(doc, "name", "");
  model.kva_base = doc["kva_base"].get<double>();

  for (const json& jb : doc["buses"]) {
    require_fields(jb, {"id", "phases", "kv_base"}, "bus");
    Bus b;
    b.id = jb["id"].get<std::string>();
    b.phases = parse_phases(jb["phases"].get<std::string>());
    b.kv_base_ln = jb["kv_base"].get<double>();
    if (jb.contains("load_kw")) b.load_kw = vec3_from_json(jb["load_kw"], b.phases, "bus " + b.id);
    if (jb.contains("load_kvar"))
      b.load_kvar = vec3_from_json(jb["load_kvar"], b.phases, "bus " + b.id);
    b.weight = get_or<double>(jb, "weight", 1.0);
    b.load_switchable = get_or<bool>(jb, "load_switchable", false);
    b.is_source = get_or<bool>(jb, "is_source", false);
    b.v_setpoint_pu = get_or<double>(jb, "v_setpoint_pu", 1.0);
    b.feeder = get_or<std::string>(jb, "feeder", "");
    if (jb.contains("clpu") && !jb["clpu"].is_null()) {
      const json& jc = jb["clpu"];
      ClpuParams c;
      c.s_u = get_or<double>(jc, "s_u", c.s_u);
      c.s_d = get_or<double>(jc, "s_d", c.s_d);
      c.alpha = get_or<double>(jc, "alpha", c.alpha);
      c.delay_steps = get_or<int>(jc, "delay_steps", c.delay_steps);
      c.n_samples = get_or<int>(jc, "n_samples", c.n_samples);
      c.sample_period_min = get_or<double>(jc, "sample_period_min", c.sample_period_min);
      b.clpu = c;
    }
    if (jb.contains("capacitor") && !jb["capacitor"].is_null()) {
      const json& jc = jb["capacitor"];
      CapacitorBank cap;
      if (jc.contains("q_rated_kvar"))
        cap.q_rated_kvar = vec3_from_json(jc["q_rated_kvar"], b.phases, "bus " + b.id + " capacitor");
      cap.gang_operated = get_or<bool>(jc, "gang_operated", true);
      b.capacitor = cap;
    }
    model.buses.push_back(std::move(b));
  }

  // First pass places buses so edge endpoint ids resolve.
  std::unordered_map<std::string, int> bus_idx;
  for (size_t i = 0; i < model.buses.size(); ++i) {
    if (!bus_idx.emplace(model.buses[i].id, int(i)).second)
      fail(ErrorCode::input, "duplicate bus id '" + model.buses[i].id + "'");
  }
  auto resolve_bus = [&](const std::string& id, const std::string& where) {
    auto it = bus_idx.find(id);
    if (it == bus_idx.end()) fail(ErrorCode::input, where + ": dangling bus reference '" + id + "'");
    return it->second;
  };

  for (const json& je : doc["edges"]) {
    require_fields(je, {"id", "from", "to", "kind"}, "edge");
    Edge e;
    e.id = je["id"].get<std::string>();
    e.from = resolve_bus(je["from"].get<std::string>(), "edge " + e.id);
    e.to = resolve_bus(je["to"].get<std::string>(), "edge " + e.id);
    e.kind = edge_kind_from_name(je["kind"].get<std::string>());
    PhaseSet shared = model.buses[e.from].phases & model.buses[e.to].phases;
    e.phases = je.contains("phases") ? parse_phases(je["phases"].get<std::string>()) : shared;
    switch (e.kind) {
      case EdgeKind::tie_switch:
      case EdgeKind::virtual_dg_edge: e.normal_closed = false; break;
      default: e.normal_closed = true; break;
    }
    if (je.contains("normal_closed")) e.normal_closed = je["normal_closed"].get<bool>();
    if (je.contains("r_ohm")) e.r_ohm = mat3_from_json(je["r_ohm"], "edge " + e.id + " r_ohm");
    if (je.contains("x_ohm")) e.x_ohm = mat3_from_json(je["x_ohm"], "edge " + e.id + " x_ohm");
    e.s_rated_kva = get_or<double>(je, "s_rated_kva", 0.0);
    model.edges.push_back(std::move(e));
  }

  if (doc.contains("dgs")) {
    for (const json& jd : doc["dgs"]) {
      require_fields(jd, {"id", "bus", "p_max_kw"}, "dg");
      Dg dg;
      dg.id = jd["id"].get<std::string>();
      dg.bus = resolve_bus(jd["bus"].get<std::string>(), "dg " + dg.id);
      dg.p_max_kw = jd["p_max_kw"].get<double>();
      dg.q_max_kvar = get_or<double>(jd, "q_max_kvar", 0.0);
      dg.grid_forming = get_or<bool>(jd, "grid_forming", true);
      if (jd.contains("virtual_edge")) {
        std::string ve = jd["virtual_edge"].get<std::string>();
        bool found = false;
        for (size_t i = 0; i < model.edges.size(); ++i)
          if (model.edges[i].id == ve) {
            dg.virtual_edge = int(i);
            found = true;
            break;
          }
        if (!found) fail(ErrorCode::input, "dg " + dg.id + ": dangling edge reference '" + ve + "'");
      }
      model.dgs.push_back(std::move(dg));
    }
  }

  if (doc.contains("regulators")) {
    for (const json& jr : doc["regulators"]) {
      require_fields(jr, {"edge"}, "regulator");
      Regulator reg;
      std::string eid = jr["edge"].get<std::string>();
      bool found = false;
      for (size_t i = 0; i < model.edges.size(); ++i)
        if (model.edges[i].id == eid) {
          reg.edge = int(i);
          found = true;
          break;
        }
      if (!found) fail(ErrorCode::input, "regulator: dangling edge reference '" + eid + "'");
      reg.gang_operated = get_or<bool>(jr, "gang_operated", true);
      model.regulators.push_back(reg);
    }
  }

  model.rebuild_indices();
  model.validate();
  return model;
}

NetworkModel load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::input, "cannot open network file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_network_json(ss.str());
}

std::string network_to_json(const NetworkModel& model) {
  json doc;
  doc["schema_version"] = 1;
  doc["name"] = model.name;
  doc["kva_base"] = model.kva_base;

  json jbuses = json::array();
  for (const Bus& b : model.buses) {
    json jb;
    jb["id"] = b.id;
    jb["phases"] = phases_to_string(b.phases);
    jb["kv_base"] = b.kv_base_ln;
    if (b.has_load()) {
      jb["load_kw"] = vec3_to_json(b.load_kw, b.phases);
      jb["load_kvar"] = vec3_to_json(b.load_kvar, b.phases);
    }
    if (b.weight != 1.0) jb["weight"] = b.weight;
    if (b.load_switchable) jb["load_switchable"] = true;
    if (b.is_source) {
      jb["is_source"] = true;
      jb["v_setpoint_pu"] = b.v_setpoint_pu;
    }
    if (!b.feeder.empty()) jb["feeder"] = b.feeder;
    if (b.clpu) {
      json jc;
      jc["s_u"] = b.clpu->s_u;
      jc["s_d"] = b.clpu->s_d;
      jc["alpha"] = b.clpu->alpha;
      jc["delay_steps"] = b.clpu->delay_steps;
      jc["n_samples"] = b.clpu->n_samples;
      jc["sample_period_min"] = b.clpu->sample_period_min;
      jb["clpu"] = jc;
    }
    if (b.capacitor) {
      json jc;
      jc["q_rated_kvar"] = vec3_to_json(b.capacitor->q_rated_kvar, b.phases);
      jc["gang_operated"] = b.capacitor->gang_operated;
      jb["capacitor"] = jc;
    }
    jbuses.push_back(std::move(jb));
  }
  doc["buses"] = std::move(jbuses);

  json jedges = json::array();
  for (const Edge& e : model.edges) {
    json je;
    je["id"] = e.id;
    je["from"] = model.buses[e.from].id;
    je["to"] = model.buses[e.to].id;
    je["kind"] = edge_kind_name(e.kind);
    je["phases"] = phases_to_string(e.phases);
    je["normal_closed"] = e.normal_closed;
    if (!mat3_is_zero(e.r_ohm)) je["r_ohm"] = mat3_to_json(e.r_ohm);
    if (!mat3_is_zero(e.x_ohm)) je["x_ohm"] = mat3_to_json(e.x_ohm);
    if (e.s_rated_kva > 0) je["s_rated_kva"] = e.s_rated_kva;
    jedges.push_back(std::move(je));
  }
  doc["edges"] = std::move(jedges);

  json jdgs = json::array();
  for (const Dg& dg : model.dgs) {
    json jd;
    jd["id"] = dg.id;
    jd["bus"] = model.buses[dg.bus].id;
    jd["p_max_kw"] = dg.p_max_kw;
    jd["q_max_kvar"] = dg.q_max_kvar;
    jd["grid_forming"] = dg.grid_forming;
    if (dg.virtual_edge >= 0) jd["virtual_edge"] = model.edges[dg.virtual_edge].id;
    jdgs.push_back(std::move(jd));
  }
  if (!jdgs.empty()) doc["dgs"] = std::move(jdgs);

  json jregs = json::array();
  for (const Regulator& reg : model.regulators) {
    json jr;
    jr["edge"] = model.edges[reg.edge].id;
    jr["gang_operated"] = reg.gang_operated;
    jregs.push_back(std::move(jr));
  }
  if (!jregs.empty()) doc["regulators"] = std::move(jregs);

  return doc.dump(2) + "\n";
}

void save_network_file(const NetworkModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::input, "cannot write network file '" + path + "'");
  out << network_to_json(model);
}

FaultScenario load_scenario_json(const NetworkModel& model, const std::string& text) {
  json doc = parse_document(text, "scenario");
  if (get_or<int>(doc, "schema_version", 1) != 1)
    fail(ErrorCode::input, "scenario: schema_version must be 1");
  FaultScenario s;
  s.description = get_or<std::string>(doc, "description", "");
  auto read_edges = [&](const char* key, std::vector<int>& out) {
    if (!doc.contains(key)) return;
    for (const json& j : doc[key]) out.push_back(model.edge_of(j.get<std::string>()));
  };
  read_edges("faulted_edges", s.faulted_edges);
  read_edges("tripped_switches", s.tripped_switches);
  read_edges("isolation_switches", s.isolation_switches);
  for (int e : s.tripped_switches)
    if (!model.edges[e].is_switchable())
      fail(ErrorCode::input, "scenario: tripped edge '" + model.edges[e].id + "' is not a switch");
  for (int e : s.isolation_switches)
    if (!model.edges[e].is_switchable())
      fail(ErrorCode::input, "scenario: isolation edge '" + model.edges[e].id + "' is not a switch");
  return s;
}

FaultScenario load_scenario_file(const NetworkModel& model, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::input, "cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario_json(model, ss.str());
}

std::string scenario_to_json(const NetworkModel& model, const FaultScenario& scenario) {
  json doc;
  doc["schema_version"] = 1;
  doc["description"] = scenario.description;
  auto write_edges = [&](const std::vector<int>& in) {
    json arr = json::array();
    for (int e : in) arr.push_back(model.edges[e].id);
    return arr;
  };
  doc["faulted_edges"] = write_edges(scenario.faulted_edges);
  doc["tripped_switches"] = write_edges(scenario.tripped_switches);
  doc["isolation_switches"] = write_edges(scenario.isolation_switches);
  return doc.dump(2) + "\n";
}

}  // namespace dsr
