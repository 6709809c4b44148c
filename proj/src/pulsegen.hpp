/*
 * Copyright 2026 The tdmac-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "config.hpp"

namespace tdmac {

// Cycle-level model of the N-pulse generator: 4-bit counter, 4-bit input
// register, equality comparator, and a valid flag that blocks the spurious
// 0 == 0 match on the cycle right after reset.
//
// Edge behaviour:
//   - first edge after reset: reg_code <- code, cmp_valid <- 1
//   - later edges with enable high and match_out high:
//       counter == reg_code -> match_out <- 0 (latched until reset)
//       otherwise           -> counter <- counter + 1
//   - enable low freezes the counter and comparator
struct PulseGenState {
  std::uint8_t counter = 0;
  std::uint8_t reg_code = 0;
  bool match_out = true;
  bool cmp_valid = false;
  std::uint64_t cycle_index = 0;

  friend bool operator==(const PulseGenState&, const PulseGenState&) = default;
};

PulseGenState reset(const PulseGenState& state);
PulseGenState step(const PulseGenState& state, bool enable, Code4 code);

/// True when the edge prev -> next lies inside the pulse window.
bool is_pulse_cycle(const PulseGenState& prev, const PulseGenState& next,
                    bool enable);

struct PulseTrain {
  unsigned n_pulses = 0;
  double t_unit = 0.0;    // s
  double duration = 0.0;  // s, n_pulses * t_unit
};

/// Closed form: code pulses of width t_clk. Throws RangeError if t_clk <= 0.
PulseTrain pulse_train(Code4 code, double t_clk);

struct WaveformRow {
  std::uint64_t cycle = 0;
  bool enable = false;
  unsigned counter = 0;
  bool match_out = false;
};

/// Steps a freshly reset generator once per entry of `enable`.
std::vector<WaveformRow> run_waveform(Code4 code, std::span<const bool> enable);

/// CSV: cycle,enable,counter,match_out
void write_waveform_csv(std::ostream& out, std::span<const WaveformRow> rows);

}  // namespace tdmac
