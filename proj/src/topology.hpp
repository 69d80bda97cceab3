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

#include <string>
#include <vector>

#include "model.hpp"

namespace dsr {

/// Simple cycle of the everything-closed graph. Cycles between two source
/// buses close through the bulk grid; their real edges form an open path and
/// `through_grid` is set.
struct Cycle {
  std::vector<int> edges;           // sorted by edge id
  std::vector<int> switch_members;  // switchable subset (E_c)
  bool through_grid = false;
};

struct CycleSet {
  std::vector<Cycle> cycles;
  std::uint64_t model_hash = 0;
};

/// Open/closed status for every edge. Non-switchable edges are always closed.
struct TopologyState {
  std::vector<char> closed;

  bool operator==(const TopologyState&) const = default;
};

TopologyState normal_state(const NetworkModel& model);

struct RadialReport {
  bool radial = false;
  std::vector<char> energized;  // per bus
  std::vector<std::string> violations;
};

/// radial <=> every energized component has exactly one source (feeder head
/// or islanded grid-forming DG root) and no cycle among closed edges.
RadialReport is_radial_connected(const NetworkModel& model, const TopologyState& state);

/// All simple cycles, deterministically ordered. Aborts with a diagnostic if
/// the chord count or cycle count explodes past the caps. Fails if any cycle
/// carries no switch (the network could never be operated radially).
CycleSet enumerate_cycles(const NetworkModel& model, std::size_t max_cycles = 100000);

std::uint64_t model_content_hash(const NetworkModel& model);
std::string cycles_to_json(const NetworkModel& model, const CycleSet& cycles);
CycleSet cycles_from_json(const NetworkModel& model, const std::string& text);

/// Faulted zones: components of the switch-free subgraph containing a faulted
/// edge. Every bus there must stay de-energized and every incident switch
/// must stay open.
struct FaultAnalysis {
  std::vector<char> zone_bus;     // per bus
  std::vector<char> forced_open;  // per edge (switchable edges only)
  std::vector<int> boundary_switches;
};

FaultAnalysis analyze_faults(const NetworkModel& model, const FaultScenario& scenario);

/// Switch state right after FLISR isolation: normal state minus tripped,
/// isolation, and faulted switches. Fails if the fault zone is still fed.
TopologyState post_isolation_state(const NetworkModel& model, const FaultScenario& scenario);

/// Buses reachable from a source through closed edges.
std::vector<char> energized_from_sources(const NetworkModel& model, const TopologyState& state);

}  // namespace dsr
