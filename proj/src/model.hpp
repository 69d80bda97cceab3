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

#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"

namespace dsr {

// Cold-load-pickup delayed-exponential parameters for one load.
struct ClpuParams {
  double s_u = 2.0;      // undiversified loading factor at pickup
  double s_d = 1.0;      // diversified (settled) loading factor
  double alpha = 0.5;    // decay rate per sample
  int delay_steps = 1;   // samples held at s_u before decay sets in
  int n_samples = 20;    // discretization length N
  double sample_period_min = 5.0;  // informational; one Stage-2 step per sample

  bool operator==(const ClpuParams&) const = default;
};

struct CapacitorBank {
  Vec3 q_rated_kvar = vec3_zero();  // per-phase rated reactive power
  bool gang_operated = true;

  bool operator==(const CapacitorBank&) const = default;
};

struct Bus {
  std::string id;
  PhaseSet phases = kPhasesAbc;
  double kv_base_ln = 7.2;  // line-to-neutral kV base
  Vec3 load_kw = vec3_zero();
  Vec3 load_kvar = vec3_zero();
  double weight = 1.0;          // restoration priority w_i
  bool load_switchable = false; // member of V_S (has a remote load-control switch)
  bool is_source = false;       // feeder head / sub-transmission slack
  double v_setpoint_pu = 1.0;   // slack voltage magnitude when is_source
  std::string feeder;           // reporting group, optional
  std::optional<ClpuParams> clpu;
  std::optional<CapacitorBank> capacitor;

  bool has_load() const { return vec3_sum(load_kw) > 0.0 || vec3_sum(load_kvar) > 0.0; }
};

enum class EdgeKind {
  plain_line,
  sectionalizing_switch,  // E_S^s, normally closed
  tie_switch,             // E_S^t, normally open
  virtual_dg_edge,        // E_S^v, source -> DG bus, zero impedance
  regulator,              // E_R, ideal tap ratio
  transformer,            // feeder-head transformer, behaves like a line
};

const char* edge_kind_name(EdgeKind kind);
EdgeKind edge_kind_from_name(const std::string& name);

struct Edge {
  std::string id;
  int from = -1;  // bus index
  int to = -1;
  EdgeKind kind = EdgeKind::plain_line;
  PhaseSet phases = kPhasesAbc;
  bool normal_closed = true;
  Mat3 r_ohm = mat3_zero();
  Mat3 x_ohm = mat3_zero();
  double s_rated_kva = 0.0;  // per-phase apparent-power rating

  bool is_switchable() const {
    return kind == EdgeKind::sectionalizing_switch || kind == EdgeKind::tie_switch ||
           kind == EdgeKind::virtual_dg_edge;
  }
};

struct Dg {
  std::string id;
  int bus = -1;
  double p_max_kw = 0.0;
  double q_max_kvar = 0.0;
  bool grid_forming = true;
  int virtual_edge = -1;  // edge index of the associated E_S^v member
};

// 32-step voltage regulator, +-10% range, 0.00625 pu per step.
struct Regulator {
  int edge = -1;
  bool gang_operated = true;
};

constexpr int kRegulatorSteps = 32;
inline double regulator_ratio(int step) {  // step in [0, 31]
  return 0.9 + 0.00625 * (step + 1);
}

/// Immutable once built; all solver and validation code shares const references.
struct NetworkModel {
  std::string name;
  double kva_base = 3000.0;  // three-phase system base
  std::vector<Bus> buses;
  std::vector<Edge> edges;
  std::vector<Dg> dgs;
  std::vector<Regulator> regulators;

  std::unordered_map<std::string, int> bus_index;
  std::unordered_map<std::string, int> edge_index;
  std::vector<std::vector<int>> adjacency;  // bus -> incident edge indices
  std::vector<int> source_buses;
  std::vector<int> regulator_of_edge;  // edge -> regulator index or -1

  // Per-phase power base, kW. Loads and ratings divide by this.
  double s_base_1ph_kw() const { return kva_base / 3.0; }
  double z_base_ohm(int bus) const {
    double kv = buses[bus].kv_base_ln;
    return kv * kv * 1000.0 / s_base_1ph_kw();
  }

  int bus_of(const std::string& id) const;
  int edge_of(const std::string& id) const;
  int other_end(int edge, int bus) const {
    const Edge& e = edges[edge];
    return e.from == bus ? e.to : e.from;
  }

  Vec3 load_pu(int bus) const { return vec3_scale(buses[bus].load_kw, 1.0 / s_base_1ph_kw()); }
  Vec3 load_q_pu(int bus) const { return vec3_scale(buses[bus].load_kvar, 1.0 / s_base_1ph_kw()); }

  double total_load_kw() const;
  /// Validates every structural invariant; throws Error{input} with a
  /// field-level message on the first violation.
  void validate() const;
  /// Fills index maps and adjacency; call after mutating the raw vectors.
  void rebuild_indices();
};

/// Post-FLISR fault state: what is broken and which protection acted.
struct FaultScenario {
  std::vector<int> faulted_edges;
  std::vector<int> tripped_switches;
  std::vector<int> isolation_switches;
  std::string description;
};

NetworkModel load_network_file(const std::string& path);
NetworkModel load_network_json(const std::string& text);
std::string network_to_json(const NetworkModel& model);
void save_network_file(const NetworkModel& model, const std::string& path);

FaultScenario load_scenario_file(const NetworkModel& model, const std::string& path);
FaultScenario load_scenario_json(const NetworkModel& model, const std::string& text);
std::string scenario_to_json(const NetworkModel& model, const FaultScenario& scenario);

struct SynthSpec {
  int feeders = 4;
  int buses_per_feeder = 10;
  int ties = 3;
  int dgs = 2;
  std::uint64_t seed = 1;
  double load_scale = 1.0;      // multiplies generated loads
  double feeder_loading = 0.7;  // transformer sized so normal load = this fraction
};

/// Deterministic multi-feeder generator: one sub-transmission source bus,
/// radial feeders behind head transformers, open ties between feeders,
/// grid-forming DGs with virtual edges.
NetworkModel synth_multifeeder(const SynthSpec& spec);

}  // namespace dsr
