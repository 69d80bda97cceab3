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

#include "model.hpp"

#include <algorithm>
#include <cmath>

namespace dsr {

PhaseSet parse_phases(const std::string& text) {
  PhaseSet set = 0;
  for (char c : text) {
    switch (c) {
      case 'a': set |= kPhaseA; break;
      case 'b': set |= kPhaseB; break;
      case 'c': set |= kPhaseC; break;
      default: fail(ErrorCode::input, "invalid phase letter '" + std::string(1, c) + "'");
    }
  }
  if (set == 0) fail(ErrorCode::input, "empty phase set");
  return set;
}

std::string phases_to_string(PhaseSet set) {
  std::string out;
  for (int p = 0; p < kNumPhases; ++p)
    if (has_phase(set, p)) out.push_back(phase_letter(p));
  return out;
}

const char* edge_kind_name(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::plain_line: return "plain_line";
    case EdgeKind::sectionalizing_switch: return "sectionalizing_switch";
    case EdgeKind::tie_switch: return "tie_switch";
    case EdgeKind::virtual_dg_edge: return "virtual_dg_edge";
    case EdgeKind::regulator: return "regulator";
    case EdgeKind::transformer: return "transformer";
  }
  return "?";
}

EdgeKind edge_kind_from_name(const std::string& name) {
  if (name == "plain_line") return EdgeKind::plain_line;
  if (name == "sectionalizing_switch") return EdgeKind::sectionalizing_switch;
  if (name == "tie_switch") return EdgeKind::tie_switch;
  if (name == "virtual_dg_edge") return EdgeKind::virtual_dg_edge;
  if (name == "regulator") return EdgeKind::regulator;
  if (name == "transformer") return EdgeKind::transformer;
  fail(ErrorCode::input, "unknown edge kind '" + name + "'");
}

int NetworkModel::bus_of(const std::string& id) const {
  auto it = bus_index.find(id);
  if (it == bus_index.end()) fail(ErrorCode::input, "unknown bus id '" + id + "'");
  return it->second;
}

int NetworkModel::edge_of(const std::string& id) const {
  auto it = edge_index.find(id);
  if (it == edge_index.end()) fail(ErrorCode::input, "unknown edge id '" + id + "'");
  return it->second;
}

double NetworkModel::total_load_kw() const {
  double total = 0.0;
  for (const Bus& b : buses) total += vec3_sum(b.load_kw);
  return total;
}

void NetworkModel::rebuild_indices() {
  bus_index.clear();
  edge_index.clear();
  adjacency.assign(buses.size(), {});
  source_buses.clear();
  regulator_of_edge.assign(edges.size(), -1);

  for (size_t i = 0; i < buses.size(); ++i) {
    if (!bus_index.emplace(buses[i].id, int(i)).second)
      fail(ErrorCode::input, "duplicate bus id '" + buses[i].id + "'");
    if (buses[i].is_source) source_buses.push_back(int(i));
  }
  for (size_t i = 0; i < edges.size(); ++i) {
    if (!edge_index.emplace(edges[i].id, int(i)).second)
      fail(ErrorCode::input, "duplicate edge id '" + edges[i].id + "'");
    const Edge& e = edges[i];
    if (e.from < 0 || e.from >= int(buses.size()) || e.to < 0 || e.to >= int(buses.size()))
      fail(ErrorCode::input, "edge '" + e.id + "' references a missing bus");
    adjacency[e.from].push_back(int(i));
    adjacency[e.to].push_back(int(i));
  }
  for (size_t i = 0; i < regulators.size(); ++i) {
    int e = regulators[i].edge;
    if (e < 0 || e >= int(edges.size()))
      fail(ErrorCode::input, "regulator references a missing edge");
    regulator_of_edge[e] = int(i);
  }
}

namespace {

void check_impedance_phase_zeros(const Edge& e) {
  for (int r = 0; r < kNumPhases; ++r) {
    for (int c = 0; c < kNumPhases; ++c) {
      bool allowed = has_phase(e.phases, r) && has_phase(e.phases, c);
      if (!allowed && (e.r_ohm[r][c] != 0.0 || e.x_ohm[r][c] != 0.0))
        fail(ErrorCode::input, "edge '" + e.id + "' has impedance entries on absent phases");
    }
  }
}

}  // namespace

void NetworkModel::validate() const {
  if (kva_base <= 0) fail(ErrorCode::input, "kva_base must be > 0");
  if (buses.empty()) fail(ErrorCode::input, "network has no buses");
  if (source_buses.empty())
    fail(ErrorCode::input, "network has no source bus (is_source)");

  for (const Bus& b : buses) {
    if (b.phases == 0) fail(ErrorCode::input, "bus '" + b.id + "' has an empty phase set");
    if (b.kv_base_ln <= 0) fail(ErrorCode::input, "bus '" + b.id + "' has kv_base <= 0");
    if (b.weight < 0) fail(ErrorCode::input, "bus '" + b.id + "' has negative weight");
    for (int p = 0; p < kNumPhases; ++p) {
      bool owned = has_phase(b.phases, p);
      if (!owned && (b.load_kw[p] != 0.0 || b.load_kvar[p] != 0.0))
        fail(ErrorCode::input, "bus '" + b.id + "' has load on absent phase " +
                                   std::string(1, phase_letter(p)));
      if (b.load_kw[p] < 0 || b.load_kvar[p] < 0)
        fail(ErrorCode::input, "bus '" + b.id + "' has negative load");
      if (b.capacitor && !owned && b.capacitor->q_rated_kvar[p] != 0.0)
        fail(ErrorCode::input, "bus '" + b.id + "' capacitor rated on absent phase");
    }
    if (b.capacitor) {
      for (double q : b.capacitor->q_rated_kvar)
        if (q < 0) fail(ErrorCode::input, "bus '" + b.id + "' capacitor rating < 0");
    }
    if (b.clpu) {
      const ClpuParams& c = *b.clpu;
      if (!(c.s_u >= c.s_d) || !(c.s_d > 0))
        fail(ErrorCode::input, "bus '" + b.id + "' CLPU requires s_u >= s_d > 0");
      if (!(c.alpha > 0)) fail(ErrorCode::input, "bus '" + b.id + "' CLPU alpha must be > 0");
      if (c.n_samples < 1) fail(ErrorCode::input, "bus '" + b.id + "' CLPU needs n_samples >= 1");
      if (c.delay_steps < 0) fail(ErrorCode::input, "bus '" + b.id + "' CLPU delay < 0");
    }
  }

  for (const Edge& e : edges) {
    const Bus& bf = buses[e.from];
    const Bus& bt = buses[e.to];
    if (e.from == e.to) fail(ErrorCode::input, "edge '" + e.id + "' is a self-loop");
    if (e.phases == 0) fail(ErrorCode::input, "edge '" + e.id + "' has an empty phase set");
    if ((e.phases & bf.phases) != e.phases || (e.phases & bt.phases) != e.phases)
      fail(ErrorCode::input, "edge '" + e.id + "' carries phases missing at an endpoint");
    check_impedance_phase_zeros(e);
    switch (e.kind) {
      case EdgeKind::tie_switch:
        if (e.normal_closed)
          fail(ErrorCode::input, "tie switch '" + e.id + "' must have normal_closed=false");
        break;
      case EdgeKind::sectionalizing_switch:
        if (!e.normal_closed)
          fail(ErrorCode::input,
               "sectionalizing switch '" + e.id + "' must have normal_closed=true");
        break;
      case EdgeKind::virtual_dg_edge: {
        if (e.normal_closed)
          fail(ErrorCode::input, "virtual edge '" + e.id + "' must have normal_closed=false");
        if (!mat3_is_zero(e.r_ohm) || !mat3_is_zero(e.x_ohm))
          fail(ErrorCode::input, "virtual edge '" + e.id + "' must have zero impedance");
        if (!bf.is_source && !bt.is_source)
          fail(ErrorCode::input,
               "virtual edge '" + e.id + "' must connect a source bus to a DG bus");
        break;
      }
      case EdgeKind::regulator:
        break;
      default:
        break;
    }
    bool physical = e.kind != EdgeKind::virtual_dg_edge;
    if (physical && !(e.s_rated_kva > 0))
      fail(ErrorCode::input, "edge '" + e.id + "' needs s_rated_kva > 0");
  }

  std::vector<int> virtual_edges_of_bus(buses.size(), 0);
  for (const Edge& e : edges)
    if (e.kind == EdgeKind::virtual_dg_edge) {
      int dg_end = buses[e.from].is_source ? e.to : e.from;
      virtual_edges_of_bus[dg_end] += 1;
    }
  for (const Dg& dg : dgs) {
    if (dg.bus < 0 || dg.bus >= int(buses.size()))
      fail(ErrorCode::input, "DG '" + dg.id + "' references a missing bus");
    if (!(dg.p_max_kw > 0)) fail(ErrorCode::input, "DG '" + dg.id + "' needs p_max > 0");
    if (dg.q_max_kvar < 0) fail(ErrorCode::input, "DG '" + dg.id + "' needs q_max >= 0");
    if (dg.grid_forming) {
      if (dg.virtual_edge < 0 || dg.virtual_edge >= int(edges.size()) ||
          edges[dg.virtual_edge].kind != EdgeKind::virtual_dg_edge)
        fail(ErrorCode::input, "grid-forming DG '" + dg.id + "' needs exactly one virtual edge");
      if (virtual_edges_of_bus[dg.bus] != 1)
        fail(ErrorCode::input,
             "grid-forming DG '" + dg.id + "' bus must have exactly one virtual edge");
    }
  }
  for (const Regulator& reg : regulators) {
    if (edges[reg.edge].kind != EdgeKind::regulator)
      fail(ErrorCode::input, "regulator attached to non-regulator edge '" + edges[reg.edge].id + "'");
  }
  for (size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].kind == EdgeKind::regulator && regulator_of_edge[e] < 0)
      fail(ErrorCode::input, "regulator edge '" + edges[e].id + "' has no regulator record");
  }
}

}  // namespace dsr
