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

#include "macro_engine.hpp"

#include <cmath>
#include <ostream>

#include "delay_line.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "metrics.hpp"
#include "pulsegen.hpp"

namespace tdmac {

std::string_view to_string(Architecture arch) {
  return arch == Architecture::cascade ? "cascade" : "counter";
}

Architecture parse_architecture(std::string_view name) {
  if (name == "cascade") return Architecture::cascade;
  if (name == "counter") return Architecture::counter;
  throw OperandError("unknown architecture '" + std::string(name) +
                     "' (expected cascade or counter)");
}

std::uint64_t quantize(double t, double t_clk) {
  if (!(t >= 0.0)) return 0;
  auto count = static_cast<std::uint64_t>(std::floor(t / t_clk));
  while (count > 0 && static_cast<double>(count) * t_clk > t) --count;
  return count;
}

namespace {

Rng construct_mismatch_rng(const CircuitParams& params) {
  require_valid(params);
  return make_stream(params.seed, kMismatchStream);
}

}  // namespace

MacroEngine::MacroEngine(CircuitParams params, std::uint64_t stream)
    : params_(std::move(params)),
      rng_(make_stream(params_.seed, stream)),
      dac_([this] {
        Rng mismatch = construct_mismatch_rng(params_);
        return CurrentSteeringDac(params_, mismatch);
      }()) {}

std::vector<AnalogSample> MacroEngine::run_multiplication_phase(
    const VectorOperands& ops) {
  if (ops.inputs.size() != ops.weights.size() || ops.inputs.empty())
    throw OperandError("operands must be non-empty and of equal length");
  std::vector<AnalogSample> samples;
  samples.reserve(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const PulseTrain pulses = pulse_train(ops.inputs[i], params_.t_clk_pulse);
    const DacOutput dac = dac_.dac_current(ops.weights[i]);
    samples.push_back(integrate(dac, pulses, params_, rng_, static_cast<int>(i)));
  }
  capacitors_ = samples;
  return samples;
}

MacReadout MacroEngine::run(Architecture arch, const VectorOperands& ops,
                            MacTrace* trace) {
  return arch == Architecture::cascade ? run_cascade(ops, trace)
                                       : run_counter(ops, trace);
}

MacReadout MacroEngine::run_cascade(const VectorOperands& ops, MacTrace* trace) {
  const auto samples = run_multiplication_phase(ops);

  MacReadout r;
  r.architecture = Architecture::cascade;
  r.oracle = oracle_mac(ops);
  // One edge traverses every cell; the counter sees only the total.
  r.t_acc = cascade_delay(samples, params_);
  r.d_out = quantize(r.t_acc, params_.t_clk_tdc);
  const int n = static_cast<int>(samples.size());
  r.latency = operation_latency(Architecture::cascade, params_, n, r.t_acc);
  r.energy = analog_energy(params_, dac_, ops) + digital_power(params_) * r.latency;
  for (const auto& s : samples)
    if (s.saturated) r.saturated_cells.push_back(s.cell_index);

  if (trace) {
    trace->architecture = Architecture::cascade;
    trace->t_mult_end = multiplication_phase_time(params_);
    trace->t_acc_end = trace->t_mult_end + r.t_acc;
    trace->t_reset_end = r.latency;
    trace->cells.clear();
    for (const auto& s : samples)
      trace->cells.push_back({s.cell_index, s.v_mac,
                              cell_delay(s.v_mac, params_, s.cell_index).t_d, 0,
                              s.saturated});
  }

  capacitors_ = reset_phase(std::move(capacitors_));
  return r;
}

MacReadout MacroEngine::run_counter(const VectorOperands& ops, MacTrace* trace) {
  const auto samples = run_multiplication_phase(ops);

  MacReadout r;
  r.architecture = Architecture::counter;
  r.oracle = oracle_mac(ops);
  if (trace) {
    trace->architecture = Architecture::counter;
    trace->cells.clear();
  }
  // Control logic selects one cell at a time; each delay is counted on its own.
  for (const auto& s : samples) {
    const double t_d = cell_delay(s.v_mac, params_, s.cell_index).t_d;
    const std::uint64_t count = quantize(t_d, params_.t_clk_tdc);
    r.t_acc += t_d;
    r.d_out += count;
    if (s.saturated) r.saturated_cells.push_back(s.cell_index);
    if (trace) trace->cells.push_back({s.cell_index, s.v_mac, t_d, count, s.saturated});
  }
  const int n = static_cast<int>(samples.size());
  r.latency = operation_latency(Architecture::counter, params_, n, r.t_acc);
  r.energy = analog_energy(params_, dac_, ops) + digital_power(params_) * r.latency;

  if (trace) {
    trace->t_mult_end = multiplication_phase_time(params_);
    trace->t_acc_end = trace->t_mult_end + n * params_.t_meas + params_.t_ctrl;
    trace->t_reset_end = r.latency;
  }

  capacitors_ = reset_phase(std::move(capacitors_));
  return r;
}

double multiplication_phase_time(const CircuitParams& params) {
  return params.max_code() * params.t_clk_pulse;
}

double reset_phase_time(const CircuitParams& params) { return params.t_clk_pulse; }

double operation_latency(Architecture arch, const CircuitParams& params, int n,
                         double t_acc) {
  const double accumulate = arch == Architecture::cascade
                                ? t_acc
                                : n * params.t_meas + params.t_ctrl;
  return multiplication_phase_time(params) + accumulate + reset_phase_time(params);
}

double latency_model(Architecture arch, const CircuitParams& params, int n) {
  if (n < 1) throw RangeError("latency_model needs n >= 1");
  const double t_acc_max =
      arch == Architecture::cascade ? n * max_cell_delay(params) : 0.0;
  return operation_latency(arch, params, n, t_acc_max);
}

void write_trace_csv(std::ostream& out, const MacTrace& trace) {
  out << "arch,phase,cell,v_mac,t_d,count,saturated,t_end\n";
  const auto arch = to_string(trace.architecture);
  using csv::format_double;
  out << arch << ",multiply,,,,,," << format_double(trace.t_mult_end) << '\n';
  for (const auto& c : trace.cells)
    out << arch << ",cell," << c.cell << ',' << format_double(c.v_mac) << ','
        << format_double(c.t_d) << ',' << c.count << ',' << int(c.saturated)
        << ",\n";
  out << arch << ",accumulate,,,,,," << format_double(trace.t_acc_end) << '\n';
  out << arch << ",reset,,,,,," << format_double(trace.t_reset_end) << '\n';
}

}  // namespace tdmac
