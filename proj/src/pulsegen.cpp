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

#include "pulsegen.hpp"

#include <ostream>

#include "errors.hpp"

namespace tdmac {

PulseGenState reset(const PulseGenState&) { return PulseGenState{}; }

PulseGenState step(const PulseGenState& s, bool enable, Code4 code) {
  PulseGenState next = s;
  ++next.cycle_index;

  if (!s.cmp_valid) {
    next.reg_code = static_cast<std::uint8_t>(code.value());
    next.cmp_valid = true;
    return next;
  }
  if (!enable || !s.match_out) return next;

  if (s.counter == s.reg_code)
    next.match_out = false;
  else
    next.counter = static_cast<std::uint8_t>((s.counter + 1) & 0xF);
  return next;
}

bool is_pulse_cycle(const PulseGenState& prev, const PulseGenState& next,
                    bool enable) {
  return enable && prev.cmp_valid && prev.match_out && next.match_out;
}

PulseTrain pulse_train(Code4 code, double t_clk) {
  if (!(t_clk > 0.0)) throw RangeError("pulse clock period must be positive");
  PulseTrain train;
  train.n_pulses = code.value();
  train.t_unit = t_clk;
  train.duration = train.n_pulses * t_clk;
  return train;
}

std::vector<WaveformRow> run_waveform(Code4 code, std::span<const bool> enable) {
  std::vector<WaveformRow> rows;
  rows.reserve(enable.size());
  PulseGenState s = reset(PulseGenState{});
  for (bool en : enable) {
    s = step(s, en, code);
    rows.push_back({s.cycle_index, en, s.counter, s.match_out});
  }
  return rows;
}

void write_waveform_csv(std::ostream& out, std::span<const WaveformRow> rows) {
  out << "cycle,enable,counter,match_out\n";
  for (const auto& r : rows)
    out << r.cycle << ',' << int(r.enable) << ',' << r.counter << ','
        << int(r.match_out) << '\n';
}

}  // namespace tdmac
