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

#include <algorithm>
#include <cmath>
#include <random>

#include "model.hpp"

namespace dsr {

namespace {

// Bounded draws go through explicit arithmetic so the generated model is
// identical across standard-library implementations.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int next_int(int lo, int hi) {  // inclusive
    return lo + int(gen() % std::uint64_t(hi - lo + 1));
  }
  double next_unit() { return double(gen() >> 11) * (1.0 / 9007199254740992.0); }
  bool chance(double p) { return next_unit() < p; }
};

Mat3 line_r_ohm(double length, PhaseSet phases) {
  Mat3 m = mat3_zero();
  for (int r = 0; r < kNumPhases; ++r)
    for (int c = 0; c < kNumPhases; ++c) {
      if (!has_phase(phases, r) || !has_phase(phases, c)) continue;
      m[r][c] = (r == c ? 0.30 : 0.05) * length;
    }
  return m;
}

Mat3 line_x_ohm(double length, PhaseSet phases) {
  Mat3 m = mat3_zero();
  for (int r = 0; r < kNumPhases; ++r)
    for (int c = 0; c < kNumPhases; ++c) {
      if (!has_phase(phases, r) || !has_phase(phases, c)) continue;
      m[r][c] = (r == c ? 0.60 : 0.20) * length;
    }
  return m;
}

}  // namespace

NetworkModel synth_multifeeder(const SynthSpec& spec) {
  if (spec.feeders < 1 || spec.buses_per_feeder < 1 || spec.ties < 0 || spec.dgs < 0)
    fail(ErrorCode::input, "synth: counts must be >= 1 (ties/dgs >= 0)");
  if (spec.feeders == 1 && spec.ties > 0)
    fail(ErrorCode::input, "synth: ties require at least two feeders");
  long max_ties = long(spec.feeders) * (spec.feeders - 1) / 2 * spec.buses_per_feeder;
  if (spec.ties > max_ties)
    fail(ErrorCode::input, "synth: more ties than available feeder pairs");
  if (spec.dgs > spec.feeders * spec.buses_per_feeder)
    fail(ErrorCode::input, "synth: more DGs than buses");

  Rng rng(spec.seed);
  NetworkModel m;
  m.name = "synth-multifeeder";
  m.kva_base = 3000.0;
  const double kv = 7.2;

  Bus sub;
  sub.id = "SUB";
  sub.phases = kPhasesAbc;
  sub.kv_base_ln = kv;
  sub.is_source = true;
  sub.v_setpoint_pu = 1.0;
  m.buses.push_back(sub);

  std::vector<std::vector<int>> feeder_buses(spec.feeders);
  std::vector<double> feeder_kva(spec.feeders, 0.0);

  for (int f = 0; f < spec.feeders; ++f) {
    std::string fname = "F" + std::to_string(f + 1);
    Bus head;
    head.id = fname + ".H";
    head.phases = kPhasesAbc;
    head.kv_base_ln = kv;
    head.feeder = fname;
    int head_idx = int(m.buses.size());
    m.buses.push_back(head);
    feeder_buses[f].push_back(head_idx);

    for (int k = 1; k <= spec.buses_per_feeder; ++k) {
      // Trunk buses chain; later buses may branch off any earlier bus.
      int parent;
      if (k == 1 || rng.chance(0.65))
        parent = feeder_buses[f].back();
      else
        parent = feeder_buses[f][size_t(rng.next_int(0, int(feeder_buses[f].size()) - 1))];

      Bus b;
      b.id = fname + "." + std::to_string(k);
      b.kv_base_ln = kv;
      b.feeder = fname;
      PhaseSet parent_ph = m.buses[parent].phases;
      bool trunk = parent == feeder_buses[f].back() && k <= (spec.buses_per_feeder + 1) / 2;
      if (trunk || phase_count(parent_ph) == 1 || rng.chance(0.8)) {
        b.phases = parent_ph;
      } else {
        // single-phase lateral on one of the parent's phases
        std::vector<int> owned;
        for (int p = 0; p < kNumPhases; ++p)
          if (has_phase(parent_ph, p)) owned.push_back(p);
        b.phases = PhaseSet(1u << owned[size_t(rng.next_int(0, int(owned.size()) - 1))]);
      }
      if (rng.chance(0.75)) {
        int base_kw = rng.next_int(10, 50);
        for (int p = 0; p < kNumPhases; ++p) {
          if (!has_phase(b.phases, p)) continue;
          double kw = double(base_kw + rng.next_int(0, 10)) * spec.load_scale;
          kw = std::floor(kw);
          b.load_kw[p] = kw;
          b.load_kvar[p] = std::floor(kw * 0.5);
        }
        b.weight = rng.chance(0.2) ? double(rng.next_int(2, 3)) : 1.0;
        b.load_switchable = rng.chance(0.7);
        ClpuParams clpu;
        b.clpu = clpu;
        feeder_kva[f] += vec3_sum(b.load_kw) * 1.12;  // rough kVA at pf 0.89
      }
      int idx = int(m.buses.size());
      m.buses.push_back(b);

      Edge e;
      e.id = m.buses[parent].id + "-" + b.id;
      e.from = parent;
      e.to = idx;
      e.phases = b.phases;
      double length = 0.3 + 0.7 * rng.next_unit();
      // k == 1 is the feeder breaker; every third deeper edge is a
      // remotely operable sectionalizer
      bool is_switch = (k == 1) || (k % 3 == 2);
      if (is_switch) {
        e.kind = EdgeKind::sectionalizing_switch;
      } else {
        e.kind = EdgeKind::plain_line;
        e.r_ohm = line_r_ohm(length, e.phases);
        e.x_ohm = line_x_ohm(length, e.phases);
      }
      m.edges.push_back(e);
      feeder_buses[f].push_back(idx);
    }
  }

  // Feeder-head transformers, sized so the normal feeder load sits at
  // spec.feeder_loading of the per-phase rating.
  for (int f = 0; f < spec.feeders; ++f) {
    Edge xf;
    xf.id = "XF" + std::to_string(f + 1);
    xf.from = 0;
    xf.to = feeder_buses[f][0];
    xf.kind = EdgeKind::transformer;
    xf.phases = kPhasesAbc;
    double per_phase = std::max(feeder_kva[f] / 3.0, 50.0) / spec.feeder_loading;
    xf.s_rated_kva = std::ceil(per_phase);
    for (int p = 0; p < kNumPhases; ++p) {
      xf.r_ohm[p][p] = 0.08;
      xf.x_ohm[p][p] = 0.40;
    }
    m.edges.push_back(xf);
  }

  // Line and switch ratings follow the largest transformer so the feeder
  // head is the binding element under load transfers.
  double max_xf = 0.0;
  for (const Edge& e : m.edges)
    if (e.kind == EdgeKind::transformer) max_xf = std::max(max_xf, e.s_rated_kva);
  for (Edge& e : m.edges) {
    if (e.kind == EdgeKind::plain_line || e.kind == EdgeKind::sectionalizing_switch) {
      if (e.s_rated_kva == 0.0) e.s_rated_kva = std::ceil(max_xf * 2.0);
    }
  }

  // Open ties between distinct feeders, attached at three-phase buses in the
  // deeper half of each feeder.
  std::set<std::pair<int, int>> used_pairs;
  for (int t = 0; t < spec.ties; ++t) {
    int fa = 0, fb = 0, ba = -1, bb = -1;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      fa = rng.next_int(0, spec.feeders - 1);
      fb = rng.next_int(0, spec.feeders - 1);
      if (fa == fb) continue;
      if (fa > fb) std::swap(fa, fb);
      auto pick_deep = [&](int f) {
        const auto& fb_list = feeder_buses[f];
        for (int tries = 0; tries < 50; ++tries) {
          int i = rng.next_int(int(fb_list.size()) / 2, int(fb_list.size()) - 1);
          if (m.buses[fb_list[size_t(i)]].phases == kPhasesAbc) return fb_list[size_t(i)];
        }
        return fb_list[1];
      };
      ba = pick_deep(fa);
      bb = pick_deep(fb);
      if (used_pairs.count({ba, bb})) continue;
      break;
    }
    used_pairs.insert({ba, bb});
    Edge tie;
    tie.id = "TIE" + std::to_string(t + 1);
    tie.from = ba;
    tie.to = bb;
    tie.kind = EdgeKind::tie_switch;
    tie.phases = m.buses[ba].phases & m.buses[bb].phases;
    tie.normal_closed = false;
    tie.s_rated_kva = std::ceil(max_xf * 2.0);
    m.edges.push_back(tie);
  }

  // Grid-forming DGs, one per feeder round-robin, each with a virtual edge
  // back to the sub-transmission bus.
  for (int d = 0; d < spec.dgs; ++d) {
    int f = d % spec.feeders;
    const auto& fb_list = feeder_buses[f];
    int bus = fb_list[1];
    for (int tries = 0; tries < 50; ++tries) {
      int i = rng.next_int(int(fb_list.size()) / 2, int(fb_list.size()) - 1);
      if (m.buses[fb_list[size_t(i)]].phases == kPhasesAbc) {
        bus = fb_list[size_t(i)];
        break;
      }
    }
    Edge ve;
    ve.id = "VDG" + std::to_string(d + 1);
    ve.from = 0;
    ve.to = bus;
    ve.kind = EdgeKind::virtual_dg_edge;
    ve.phases = kPhasesAbc;
    ve.normal_closed = false;
    int ve_idx = int(m.edges.size());
    m.edges.push_back(ve);

    Dg dg;
    dg.id = "DG" + std::to_string(d + 1);
    dg.bus = bus;
    dg.p_max_kw = std::ceil(std::max(feeder_kva[f] * 0.5, 100.0));
    dg.q_max_kvar = std::ceil(dg.p_max_kw * 0.6);
    dg.grid_forming = true;
    dg.virtual_edge = ve_idx;
    m.dgs.push_back(dg);
  }

  m.rebuild_indices();
  m.validate();
  return m;
}

}  // namespace dsr
