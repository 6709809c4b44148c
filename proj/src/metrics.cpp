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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "delay_line.hpp"
#include "errors.hpp"

namespace tdmac {

std::int64_t oracle_mac(const VectorOperands& ops) {
  if (ops.inputs.size() != ops.weights.size())
    throw OperandError("inputs and weights must have the same length");
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < ops.size(); ++i)
    sum += std::int64_t(ops.inputs[i].value()) * ops.weights[i].value();
  return sum;
}

std::vector<VectorOperands> sample_operands(const Sampling& sampling) {
  if (sampling.n < 1) throw RangeError("vector length must be >= 1");
  const auto n = static_cast<std::size_t>(sampling.n);
  constexpr unsigned kLevels = Code4::kMax + 1;
  std::vector<VectorOperands> out;

  switch (sampling.mode) {
    case Sampling::Mode::diagonal:
      for (unsigned c = 0; c < kLevels; ++c) {
        VectorOperands ops;
        ops.inputs.assign(n, Code4(c));
        ops.weights.assign(n, Code4(c));
        out.push_back(std::move(ops));
      }
      break;

    case Sampling::Mode::exhaustive: {
      if (sampling.n > 2)
        throw RangeError("exhaustive sampling is limited to n <= 2 (16^4 vectors)");
      // Digits, most significant first: inputs[0..n), then weights[0..n).
      std::uint64_t total = 1;
      for (std::size_t d = 0; d < 2 * n; ++d) total *= kLevels;
      out.reserve(total);
      for (std::uint64_t k = 0; k < total; ++k) {
        VectorOperands ops;
        ops.inputs.resize(n);
        ops.weights.resize(n);
        std::uint64_t rest = k;
        for (std::size_t d = 2 * n; d-- > 0;) {
          const Code4 digit(static_cast<unsigned>(rest % kLevels));
          rest /= kLevels;
          if (d < n) ops.inputs[d] = digit;
          else ops.weights[d - n] = digit;
        }
        out.push_back(std::move(ops));
      }
      break;
    }

    case Sampling::Mode::random: {
      Rng rng = make_stream(sampling.seed, kOperandStream);
      std::uniform_int_distribution<unsigned> code(0, Code4::kMax);
      out.reserve(sampling.count);
      for (std::uint64_t k = 0; k < sampling.count; ++k) {
        VectorOperands ops;
        for (std::size_t i = 0; i < n; ++i) ops.inputs.emplace_back(code(rng));
        for (std::size_t i = 0; i < n; ++i) ops.weights.emplace_back(code(rng));
        out.push_back(std::move(ops));
      }
      break;
    }
  }
  return out;
}

std::vector<TransferRecord> transfer_curve(Architecture arch,
                                           const CircuitParams& params,
                                           const Sampling& sampling,
                                           unsigned workers) {
  require_valid(params);
  const auto operands = sample_operands(sampling);
  std::vector<TransferRecord> records(operands.size());

  auto run_one = [&](std::size_t i) {
    MacroEngine engine(params, i);
    const MacReadout r = engine.run(arch, operands[i]);
    records[i] = {r.oracle, r.d_out, r.t_acc, arch, operands[i],
                  !r.saturated_cells.empty()};
  };

  const std::size_t n_workers =
      std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(records.size(), 1));
  if (n_workers == 1) {
    for (std::size_t i = 0; i < records.size(); ++i) run_one(i);
    return records;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < records.size(); i += n_workers) run_one(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return records;
}

LinearityReport linearity_metrics(std::span<const TransferRecord> records) {
  std::set<std::int64_t> distinct;
  for (const auto& r : records) distinct.insert(r.oracle);
  if (distinct.size() < 3)
    throw DegenerateError("linearity needs at least 3 distinct oracle values");

  const double count = static_cast<double>(records.size());
  double mean_x = 0, mean_y = 0;
  for (const auto& r : records) {
    mean_x += static_cast<double>(r.oracle);
    mean_y += static_cast<double>(r.d_out);
  }
  mean_x /= count;
  mean_y /= count;

  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& r : records) {
    const double dx = static_cast<double>(r.oracle) - mean_x;
    const double dy = static_cast<double>(r.d_out) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }

  LinearityReport rep;
  rep.gain = sxy / sxx;
  rep.offset = mean_y - rep.gain * mean_x;
  rep.inl.reserve(records.size());
  double ss_res = 0;
  for (const auto& r : records) {
    const double fit = rep.gain * static_cast<double>(r.oracle) + rep.offset;
    const double e = static_cast<double>(r.d_out) - fit;
    rep.inl.push_back(e);
    rep.inl_max = std::max(rep.inl_max, std::abs(e));
    ss_res += e * e;
  }
  rep.rms_error = std::sqrt(ss_res / count);
  rep.r_squared = syy > 0 ? 1.0 - ss_res / syy : (ss_res == 0 ? 1.0 : 0.0);
  return rep;
}

NoiseStats quantization_stats(int n_cells, const CircuitParams& params,
                              std::uint64_t trials, Rng& rng,
                              std::vector<double>* errors) {
  if (n_cells < 1) throw RangeError("n_cells must be >= 1");
  if (trials < 1000) throw RangeError("quantization_stats needs at least 1000 trials");
  const double t_clk = params.t_clk_tdc;
  if (!(t_clk > 0.0)) throw RangeError("t_clk_tdc must be positive");

  // Delays spread over thousands of counter periods so the residue is uniform.
  std::uniform_real_distribution<double> delay(0.0, 4096.0 * t_clk);
  std::vector<double> per_trial(trials);
  double mean = 0.0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    double e = 0.0;
    for (int i = 0; i < n_cells; ++i) {
      const double t = delay(rng);
      e += t - static_cast<double>(quantize(t, t_clk)) * t_clk;
    }
    per_trial[k] = e;
    mean += e;
  }
  mean /= static_cast<double>(trials);

  double m2 = 0.0;
  for (double& e : per_trial) {
    e -= mean;
    m2 += e * e;
  }

  NoiseStats s;
  s.sample_count = trials;
  s.empirical_variance = m2 / static_cast<double>(trials);
  s.predicted_variance = n_cells * t_clk * t_clk / 12.0;
  s.ratio = s.empirical_variance / s.predicted_variance;
  if (errors) *errors = std::move(per_trial);
  return s;
}

ThermalStats thermal_monte_carlo(const CircuitParams& params,
                                 std::uint64_t samples, Rng& rng, unsigned code) {
  if (samples < 2) throw RangeError("thermal_monte_carlo needs at least 2 samples");
  const Code4 c(code);
  const DacOutput dac{c.value() * params.i_lsb, c};
  const PulseTrain pulses = pulse_train(c, params.t_clk_pulse);

  CircuitParams quiet = params;
  quiet.noise_enabled = false;
  ThermalStats s;
  s.sample_count = samples;
  s.v_nominal = integrate(dac, pulses, quiet, rng).v_mac;
  s.sigma_predicted =
      params.noise_enabled ? thermal_noise_sigma(params.c_int, params.temperature) : 0.0;

  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    const double v = integrate(dac, pulses, params, rng).v_mac;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
  }
  s.sigma_observed = std::sqrt(m2 / static_cast<double>(samples - 1));
  return s;
}

double digital_power(const CircuitParams& params) {
  const auto& d = params.p_digital;
  return d.alpha_sw * d.c_dig * params.v_dd * params.v_dd / params.t_clk_tdc;
}

double analog_energy(const CircuitParams& params, const CurrentSteeringDac& dac,
                     const VectorOperands& ops) {
  double charge = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i)
    charge += dac.dac_current(ops.weights[i]).current *
              pulse_train(ops.inputs[i], params.t_clk_pulse).duration;
  return params.v_dd * charge;
}

std::string_view to_string(OpsConvention convention) {
  switch (convention) {
    case OpsConvention::two_per_mac_cell: return "2N (multiply + add per cell)";
    case OpsConvention::explicit_value: return "explicit";
    case OpsConvention::back_solved: return "back-solved";
  }
  return "unknown";
}

EnergyReport energy_report(const CircuitParams& params, Architecture arch, int n,
                           double f_op, int ops_per_cycle,
                           std::optional<double> forced_p_total,
                           OperandStatistic statistic) {
  if (n < 1) throw RangeError("energy_report needs n >= 1");
  if (!(f_op > 0.0)) throw RangeError("operating frequency must be positive");
  if (forced_p_total && !(*forced_p_total > 0.0))
    throw RangeError("calibrated power must be positive");

  const double m = params.max_code();
  const double mean_code = m / 2.0;
  const double product_per_cell =
      statistic == OperandStatistic::average ? mean_code * mean_code : m * m;

  EnergyReport rep;
  rep.f_op = f_op;
  rep.f_op_max = 1.0 / latency_model(arch, params, n);
  rep.p_analog = params.v_dd * params.i_lsb * params.t_clk_pulse *
                 (n * product_per_cell) * f_op;
  rep.p_digital = digital_power(params);
  rep.p_total = forced_p_total.value_or(rep.p_analog + rep.p_digital);
  rep.p_total_calibrated = forced_p_total.has_value();
  rep.energy_per_mac = rep.p_total / f_op;

  if (ops_per_cycle > 0) {
    rep.ops_per_cycle = ops_per_cycle;
    rep.convention = OpsConvention::explicit_value;
  } else {
    rep.ops_per_cycle = 2 * n;
    rep.convention = OpsConvention::two_per_mac_cell;
  }
  if (rep.p_total_calibrated) rep.convention = OpsConvention::back_solved;
  rep.tops_per_watt = rep.ops_per_cycle * f_op / rep.p_total / 1e12;
  return rep;
}

}  // namespace tdmac
