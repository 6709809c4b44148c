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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "macro_engine.hpp"
#include "rng.hpp"

namespace tdmac {

/// Exact integer dot product of inputs and weights.
std::int64_t oracle_mac(const VectorOperands& ops);

struct TransferRecord {
  std::int64_t oracle = 0;
  std::uint64_t d_out = 0;
  double t_acc = 0.0;
  Architecture arch = Architecture::cascade;
  VectorOperands operands;
  bool saturated = false;
};

struct Sampling {
  enum class Mode { diagonal, exhaustive, random };

  Mode mode = Mode::diagonal;
  int n = 4;                  // vector length
  std::uint64_t count = 0;    // random mode only
  std::uint64_t seed = 0;     // random mode only

  static Sampling diagonal(int n) { return {Mode::diagonal, n, 0, 0}; }
  static Sampling exhaustive(int n) { return {Mode::exhaustive, n, 0, 0}; }
  static Sampling random(int n, std::uint64_t count, std::uint64_t seed) {
    return {Mode::random, n, count, seed};
  }
};

/// Operand vectors in the order the sampling mode defines them.
std::vector<VectorOperands> sample_operands(const Sampling& sampling);

/// Runs one fresh engine per operand vector (noise stream = record index), so
/// the result is identical for any worker count. Exhaustive mode requires
/// n <= 2.
std::vector<TransferRecord> transfer_curve(Architecture arch,
                                           const CircuitParams& params,
                                           const Sampling& sampling,
                                           unsigned workers = 1);

struct LinearityReport {
  double gain = 0.0;    // counts per oracle unit
  double offset = 0.0;  // counts
  double inl_max = 0.0;
  std::vector<double> inl;  // one entry per record, same order
  double rms_error = 0.0;
  double r_squared = 0.0;
};

/// Best-fit affine reference; throws DegenerateError with fewer than three
/// distinct oracle values.
LinearityReport linearity_metrics(std::span<const TransferRecord> records);

struct NoiseStats {
  std::uint64_t sample_count = 0;
  double empirical_variance = 0.0;  // s^2
  double predicted_variance = 0.0;  // s^2, n T^2 / 12
  double ratio = 0.0;
};

/// Monte Carlo of the summed floor-quantization error of n_cells delays drawn
/// uniformly over many counter periods. `errors`, when given, receives the
/// mean-removed per-trial error.
NoiseStats quantization_stats(int n_cells, const CircuitParams& params,
                              std::uint64_t trials, Rng& rng,
                              std::vector<double>* errors = nullptr);

struct ThermalStats {
  std::uint64_t sample_count = 0;
  double sigma_observed = 0.0;   // V
  double sigma_predicted = 0.0;  // V, 0 when noise is disabled
  double v_nominal = 0.0;        // V, noiseless operating point
};

/// Repeats one integration (weight = input = `code`) `samples` times and
/// reports the spread of v_mac.
ThermalStats thermal_monte_carlo(const CircuitParams& params,
                                 std::uint64_t samples, Rng& rng,
                                 unsigned code = 7);

/// P = alpha_sw C_dig V_DD^2 f_clk with f_clk = 1 / t_clk_tdc.
double digital_power(const CircuitParams& params);

/// Supply energy drawn by the DAC current sources during integration.
double analog_energy(const CircuitParams& params, const CurrentSteeringDac& dac,
                     const VectorOperands& ops);

enum class OperandStatistic { average, worst_case };

enum class OpsConvention {
  two_per_mac_cell,  // 2 N ops per operation (default)
  explicit_value,    // user supplied
  back_solved,       // chosen to reproduce a reported efficiency
};

struct EnergyReport {
  double p_analog = 0.0;
  double p_digital = 0.0;
  double p_total = 0.0;
  double energy_per_mac = 0.0;  // J per vector operation
  int ops_per_cycle = 0;
  double f_op = 0.0;
  double f_op_max = 0.0;  // 1 / worst-case latency of the architecture
  double tops_per_watt = 0.0;
  bool p_total_calibrated = false;
  OpsConvention convention = OpsConvention::two_per_mac_cell;
};

std::string_view to_string(OpsConvention convention);

/// ops_per_cycle <= 0 selects the 2 N default. forced_p_total overrides the
/// modelled power (calibration mode); the report then labels the ops
/// convention as back-solved.
EnergyReport energy_report(const CircuitParams& params, Architecture arch,
                           int n, double f_op, int ops_per_cycle,
                           std::optional<double> forced_p_total = std::nullopt,
                           OperandStatistic statistic = OperandStatistic::average);

}  // namespace tdmac
