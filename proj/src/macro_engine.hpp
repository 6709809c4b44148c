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
#include <span>
#include <string_view>
#include <vector>

#include "analog_frontend.hpp"
#include "config.hpp"
#include "rng.hpp"

namespace tdmac {

enum class Architecture { cascade, counter };

std::string_view to_string(Architecture arch);
/// Accepts "cascade" or "counter"; throws OperandError otherwise.
Architecture parse_architecture(std::string_view name);

struct MacReadout {
  Architecture architecture = Architecture::cascade;
  std::uint64_t d_out = 0;
  double t_acc = 0.0;    // s, accumulated delay before quantization
  std::int64_t oracle = 0;
  double latency = 0.0;  // s
  double energy = 0.0;   // J
  std::vector<int> saturated_cells;
};

struct CellTrace {
  int cell = 0;
  double v_mac = 0.0;
  double t_d = 0.0;
  std::uint64_t count = 0;  // per-cell D_i (counter) or 0 (cascade)
  bool saturated = false;
};

/// Phase boundaries measured from the start of the multiplication phase.
struct MacTrace {
  Architecture architecture = Architecture::cascade;
  double t_mult_end = 0.0;
  double t_acc_end = 0.0;
  double t_reset_end = 0.0;
  std::vector<CellTrace> cells;
};

/// floor(t / t_clk), corrected so that count * t_clk never exceeds t.
std::uint64_t quantize(double t, double t_clk);

/// One macro instance: a DAC die (static mismatch) plus a private noise
/// stream, stepped through multiplication, accumulation, and reset.
class MacroEngine {
 public:
  /// Validates params (throws ConfigError). `stream` selects the noise stream.
  MacroEngine(CircuitParams params, std::uint64_t stream = 0);

  std::vector<AnalogSample> run_multiplication_phase(const VectorOperands& ops);

  MacReadout run_cascade(const VectorOperands& ops, MacTrace* trace = nullptr);
  MacReadout run_counter(const VectorOperands& ops, MacTrace* trace = nullptr);
  MacReadout run(Architecture arch, const VectorOperands& ops,
                 MacTrace* trace = nullptr);

  /// Capacitor state left behind by the last run (all zero after reset).
  std::span<const AnalogSample> capacitors() const noexcept {
    return capacitors_;
  }
  const CircuitParams& params() const noexcept { return params_; }
  const CurrentSteeringDac& dac() const noexcept { return dac_; }

 private:
  CircuitParams params_;
  Rng rng_;
  CurrentSteeringDac dac_;
  std::vector<AnalogSample> capacitors_;
};

/// Fixed worst-case multiplication window: max_code pulse slots.
double multiplication_phase_time(const CircuitParams& params);
/// One pulse-clock cycle.
double reset_phase_time(const CircuitParams& params);

/// Latency of one operation whose accumulated delay is t_acc.
double operation_latency(Architecture arch, const CircuitParams& params, int n,
                         double t_acc);

/// Worst-case latency for an n-cell operation over the whole operand space.
double latency_model(Architecture arch, const CircuitParams& params, int n);

void write_trace_csv(std::ostream& out, const MacTrace& trace);

}  // namespace tdmac
