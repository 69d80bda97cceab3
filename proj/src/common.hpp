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

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dsr {

/// Error categories surfaced through the C API as process exit codes.
enum class ErrorCode : int {
  ok = 0,
  input = 2,
  stage1_infeasible = 3,
  stage2_infeasible = 4,
  validation = 5,
  solver = 6,
  internal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

constexpr int kNumPhases = 3;

/// Bitmask over phases a/b/c. Bit 0 = a, bit 1 = b, bit 2 = c.
using PhaseSet = std::uint8_t;

constexpr PhaseSet kPhaseA = 1;
constexpr PhaseSet kPhaseB = 2;
constexpr PhaseSet kPhaseC = 4;
constexpr PhaseSet kPhasesAbc = kPhaseA | kPhaseB | kPhaseC;

inline bool has_phase(PhaseSet set, int phase) { return (set >> phase) & 1; }
inline int phase_count(PhaseSet set) {
  return int(has_phase(set, 0)) + int(has_phase(set, 1)) + int(has_phase(set, 2));
}
inline char phase_letter(int phase) { return "abc"[phase]; }

PhaseSet parse_phases(const std::string& text);
std::string phases_to_string(PhaseSet set);

/// Per-phase triple with zeros on absent phases.
using Vec3 = std::array<double, 3>;

inline Vec3 vec3_zero() { return {0.0, 0.0, 0.0}; }
inline double vec3_sum(const Vec3& v) { return v[0] + v[1] + v[2]; }
inline Vec3 vec3_add(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 vec3_scale(const Vec3& a, double k) {
  return {a[0] * k, a[1] * k, a[2] * k};
}

/// Row-major 3x3 matrix; rows/columns of absent phases are zero.
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat3 mat3_zero() {
  return {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
}
inline bool mat3_is_zero(const Mat3& m) {
  for (const auto& row : m)
    for (double v : row)
      if (v != 0.0) return false;
  return true;
}

}  // namespace dsr
