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

#include "tdmac/tdmac.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "config.hpp"
#include "csv.hpp"
#include "delay_line.hpp"
#include "errors.hpp"
#include "macro_engine.hpp"
#include "metrics.hpp"
#include "pulsegen.hpp"

struct tdmac_params {
  tdmac::CircuitParams value;
};

struct tdmac_engine {
  tdmac::MacroEngine engine;
};

struct tdmac_transfer {
  std::vector<tdmac::TransferRecord> records;
};

namespace {

thread_local std::string g_last_error;

int fail(int status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const tdmac::ConfigError& e) {
    return fail(TDMAC_ERR_CONFIG, e.what());
  } catch (const tdmac::OperandError& e) {
    return fail(TDMAC_ERR_OPERANDS, e.what());
  } catch (const tdmac::CutoffError& e) {
    return fail(TDMAC_ERR_CUTOFF, e.what());
  } catch (const tdmac::RangeError& e) {
    return fail(TDMAC_ERR_RANGE, e.what());
  } catch (const tdmac::DegenerateError& e) {
    return fail(TDMAC_ERR_DEGENERATE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TDMAC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TDMAC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TDMAC_ERR_INTERNAL, "unknown error");
  }
}

int null_argument(const char* name) {
  return fail(TDMAC_ERR_INVALID_ARGUMENT, std::string(name) + " must not be null");
}

bool parse_arch(int arch, tdmac::Architecture& out) {
  if (arch == TDMAC_ARCH_CASCADE) out = tdmac::Architecture::cascade;
  else if (arch == TDMAC_ARCH_COUNTER) out = tdmac::Architecture::counter;
  else return false;
  return true;
}

int bad_arch(int arch) {
  return fail(TDMAC_ERR_INVALID_ARGUMENT,
              "unknown architecture id " + std::to_string(arch));
}

int copy_string(const std::string& s, char* buf, size_t len, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf || len < s.size() + 1)
    return fail(TDMAC_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return TDMAC_OK;
}

template <typename Writer>
int write_file(const char* path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return fail(TDMAC_ERR_IO, std::string("cannot open '") + path + "' for writing");
  writer(out);
  out.flush();
  if (!out) return fail(TDMAC_ERR_IO, std::string("write to '") + path + "' failed");
  return TDMAC_OK;
}

}  // namespace

extern "C" {

const char* tdmac_version(void) { return TDMAC_VERSION_STRING; }

const char* tdmac_status_string(int status) {
  switch (status) {
    case TDMAC_OK: return "ok";
    case TDMAC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TDMAC_ERR_CONFIG: return "configuration error";
    case TDMAC_ERR_OPERANDS: return "operand error";
    case TDMAC_ERR_RANGE: return "argument out of range";
    case TDMAC_ERR_CUTOFF: return "delay cell cut off";
    case TDMAC_ERR_DEGENERATE: return "degenerate data";
    case TDMAC_ERR_IO: return "i/o error";
    case TDMAC_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case TDMAC_ERR_INTERNAL: return "internal error";
    default: return "unknown status";
  }
}

const char* tdmac_last_error(void) { return g_last_error.c_str(); }

// Parameters -------------------------------------------------------------

int tdmac_params_default(tdmac_params** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new tdmac_params{tdmac::default_params()};
    return TDMAC_OK;
  });
}

int tdmac_params_load(const char* path, tdmac_params** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new tdmac_params{tdmac::load_config(path)};
    return TDMAC_OK;
  });
}

int tdmac_params_clone(const tdmac_params* params, tdmac_params** out) {
  if (!params) return null_argument("params");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new tdmac_params{params->value};
    return TDMAC_OK;
  });
}

void tdmac_params_free(tdmac_params* params) { delete params; }

int tdmac_params_apply_json(tdmac_params* params, const char* json) {
  if (!params) return null_argument("params");
  if (!json) return null_argument("json");
  return guarded([&] {
    params->value = tdmac::from_json(json, params->value);
    return TDMAC_OK;
  });
}

int tdmac_params_to_json(const tdmac_params* params, char* buf, size_t len,
                         size_t* needed) {
  if (!params) return null_argument("params");
  return guarded([&] { return copy_string(tdmac::to_json(params->value), buf, len, needed); });
}

int tdmac_params_save(const tdmac_params* params, const char* path) {
  if (!params) return null_argument("params");
  if (!path) return null_argument("path");
  return guarded([&] {
    return write_file(path, [&](std::ostream& o) { o << tdmac::to_json(params->value) << '\n'; });
  });
}

int tdmac_params_set_seed(tdmac_params* params, uint64_t seed) {
  if (!params) return null_argument("params");
  params->value.seed = seed;
  return TDMAC_OK;
}

int tdmac_params_get_seed(const tdmac_params* params, uint64_t* seed) {
  if (!params) return null_argument("params");
  if (!seed) return null_argument("seed");
  *seed = params->value.seed;
  return TDMAC_OK;
}

int tdmac_params_linearize_delay(tdmac_params* params) {
  if (!params) return null_argument("params");
  return guarded([&] {
    params->value.delay_model = tdmac::linearized_model(params->value);
    return TDMAC_OK;
  });
}

int tdmac_params_validate(const tdmac_params* params, size_t* count, char* buf,
                          size_t len, size_t* needed) {
  if (!params) return null_argument("params");
  return guarded([&] {
    const auto violations = tdmac::validate(params->value);
    if (count) *count = violations.size();
    std::string joined;
    for (const auto& v : violations) {
      if (!joined.empty()) joined += '\n';
      joined += v;
    }
    if (!buf && !needed) return int(TDMAC_OK);
    return copy_string(joined, buf, len, needed);
  });
}

// Engine -----------------------------------------------------------------

int tdmac_engine_create(const tdmac_params* params, uint64_t stream,
                        tdmac_engine** out) {
  if (!params) return null_argument("params");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new tdmac_engine{tdmac::MacroEngine(params->value, stream)};
    return TDMAC_OK;
  });
}

void tdmac_engine_free(tdmac_engine* engine) { delete engine; }

int tdmac_engine_run(tdmac_engine* engine, int arch, const uint32_t* inputs,
                     const uint32_t* weights, size_t n, const char* trace_csv_path,
                     tdmac_readout* out) {
  if (!engine) return null_argument("engine");
  if (!out) return null_argument("out");
  if (n > 0 && (!inputs || !weights)) return null_argument("inputs/weights");
  tdmac::Architecture a;
  if (!parse_arch(arch, a)) return bad_arch(arch);
  return guarded([&] {
    const auto ops = tdmac::VectorOperands::from_values(
        std::vector<unsigned>(inputs, inputs + n),
        std::vector<unsigned>(weights, weights + n));
    tdmac::MacTrace trace;
    const auto r = engine->engine.run(a, ops, trace_csv_path ? &trace : nullptr);
    if (trace_csv_path) {
      const int st = write_file(trace_csv_path, [&](std::ostream& o) {
        tdmac::write_trace_csv(o, trace);
      });
      if (st != TDMAC_OK) return st;
    }
    out->arch = arch;
    out->d_out = r.d_out;
    out->t_acc = r.t_acc;
    out->oracle = r.oracle;
    out->latency = r.latency;
    out->energy = r.energy;
    out->n_saturated = static_cast<uint32_t>(r.saturated_cells.size());
    return int(TDMAC_OK);
  });
}

int tdmac_engine_capacitors(const tdmac_engine* engine, double* buf, size_t len,
                            size_t* n) {
  if (!engine) return null_argument("engine");
  const auto caps = engine->engine.capacitors();
  if (n) *n = caps.size();
  if (!buf) return TDMAC_OK;
  if (len < caps.size()) return fail(TDMAC_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  for (size_t i = 0; i < caps.size(); ++i) buf[i] = caps[i].v_mac;
  return TDMAC_OK;
}

int tdmac_latency_model(const tdmac_params* params, int arch, uint32_t n,
                        double* out) {
  if (!params) return null_argument("params");
  if (!out) return null_argument("out");
  tdmac::Architecture a;
  if (!parse_arch(arch, a)) return bad_arch(arch);
  return guarded([&] {
    *out = tdmac::latency_model(a, params->value, static_cast<int>(n));
    return TDMAC_OK;
  });
}

int tdmac_pulse_duration(uint32_t code, double t_clk, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = tdmac::pulse_train(tdmac::Code4(code), t_clk).duration;
    return TDMAC_OK;
  });
}

int tdmac_pulsegen_write_csv(uint32_t code, uint32_t cycles, const char* path) {
  if (!path) return null_argument("path");
  return guarded([&] {
    std::unique_ptr<bool[]> flat(new bool[cycles]);
    std::fill_n(flat.get(), cycles, true);
    const auto rows = tdmac::run_waveform(tdmac::Code4(code),
                                          std::span<const bool>(flat.get(), cycles));
    return write_file(path, [&](std::ostream& o) { tdmac::write_waveform_csv(o, rows); });
  });
}

// Transfer curves and metrics -----------------------------------------------

int tdmac_transfer_run(const tdmac_params* params, int arch,
                       const tdmac_sampling* sampling, uint32_t workers,
                       tdmac_transfer** out) {
  if (!params) return null_argument("params");
  if (!sampling) return null_argument("sampling");
  if (!out) return null_argument("out");
  tdmac::Architecture a;
  if (!parse_arch(arch, a)) return bad_arch(arch);
  tdmac::Sampling s;
  switch (sampling->mode) {
    case TDMAC_SAMPLING_DIAGONAL: s = tdmac::Sampling::diagonal(int(sampling->n)); break;
    case TDMAC_SAMPLING_EXHAUSTIVE: s = tdmac::Sampling::exhaustive(int(sampling->n)); break;
    case TDMAC_SAMPLING_RANDOM:
      s = tdmac::Sampling::random(int(sampling->n), sampling->count, sampling->seed);
      break;
    default:
      return fail(TDMAC_ERR_INVALID_ARGUMENT,
                  "unknown sampling mode " + std::to_string(sampling->mode));
  }
  return guarded([&] {
    *out = new tdmac_transfer{tdmac::transfer_curve(a, params->value, s, workers)};
    return TDMAC_OK;
  });
}

void tdmac_transfer_free(tdmac_transfer* transfer) { delete transfer; }

size_t tdmac_transfer_size(const tdmac_transfer* transfer) {
  return transfer ? transfer->records.size() : 0;
}

int tdmac_transfer_get(const tdmac_transfer* transfer, size_t index,
                       tdmac_transfer_record* out) {
  if (!transfer) return null_argument("transfer");
  if (!out) return null_argument("out");
  if (index >= transfer->records.size())
    return fail(TDMAC_ERR_RANGE, "record index out of range");
  const auto& r = transfer->records[index];
  out->arch = r.arch == tdmac::Architecture::cascade ? TDMAC_ARCH_CASCADE
                                                     : TDMAC_ARCH_COUNTER;
  out->oracle = r.oracle;
  out->d_out = r.d_out;
  out->t_acc = r.t_acc;
  out->saturated = r.saturated ? 1 : 0;
  return TDMAC_OK;
}

int tdmac_transfer_linearity(const tdmac_transfer* transfer, tdmac_linearity* out) {
  if (!transfer) return null_argument("transfer");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto rep = tdmac::linearity_metrics(transfer->records);
    *out = {rep.gain, rep.offset, rep.inl_max, rep.rms_error, rep.r_squared};
    return TDMAC_OK;
  });
}

int tdmac_transfer_write_csv(const tdmac_transfer* transfer, const char* path) {
  if (!transfer) return null_argument("transfer");
  if (!path) return null_argument("path");
  return guarded([&] {
    return write_file(path, [&](std::ostream& o) {
      tdmac::csv::write_transfer(o, transfer->records);
    });
  });
}

int tdmac_linearity_write_csv(const tdmac_transfer* transfer, const char* path) {
  if (!transfer) return null_argument("transfer");
  if (!path) return null_argument("path");
  return guarded([&] {
    const auto rep = tdmac::linearity_metrics(transfer->records);
    return write_file(path, [&](std::ostream& o) {
      tdmac::csv::write_linearity(o, transfer->records, rep);
    });
  });
}

int tdmac_quantization_stats(const tdmac_params* params, uint32_t n_cells,
                             uint64_t trials, const char* noise_csv_path,
                             tdmac_noise_stats* out) {
  if (!params) return null_argument("params");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto rng = tdmac::make_stream(params->value.seed, tdmac::kQuantizationStream);
    std::vector<double> errors;
    const auto s = tdmac::quantization_stats(static_cast<int>(n_cells), params->value,
                                             trials, rng,
                                             noise_csv_path ? &errors : nullptr);
    if (noise_csv_path) {
      const int st = write_file(noise_csv_path, [&](std::ostream& o) {
        tdmac::csv::write_noise(o, errors);
      });
      if (st != TDMAC_OK) return st;
    }
    *out = {s.sample_count, s.empirical_variance, s.predicted_variance, s.ratio};
    return int(TDMAC_OK);
  });
}

int tdmac_thermal_monte_carlo(const tdmac_params* params, uint64_t samples,
                              tdmac_thermal_stats* out) {
  if (!params) return null_argument("params");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto rng = tdmac::make_stream(params->value.seed, tdmac::kThermalStream);
    const auto s = tdmac::thermal_monte_carlo(params->value, samples, rng);
    *out = {s.sample_count, s.sigma_observed, s.sigma_predicted, s.v_nominal};
    return TDMAC_OK;
  });
}

int tdmac_energy_report(const tdmac_params* params, int arch, uint32_t n,
                        double f_op, int32_t ops_per_cycle, double forced_p_total,
                        int worst_case, tdmac_energy* out) {
  if (!params) return null_argument("params");
  if (!out) return null_argument("out");
  tdmac::Architecture a;
  if (!parse_arch(arch, a)) return bad_arch(arch);
  return guarded([&] {
    std::optional<double> forced;
    if (forced_p_total > 0.0) forced = forced_p_total;
    const auto r = tdmac::energy_report(
        params->value, a, static_cast<int>(n), f_op, ops_per_cycle, forced,
        worst_case ? tdmac::OperandStatistic::worst_case
                   : tdmac::OperandStatistic::average);
    out->p_analog = r.p_analog;
    out->p_digital = r.p_digital;
    out->p_total = r.p_total;
    out->energy_per_mac = r.energy_per_mac;
    out->ops_per_cycle = r.ops_per_cycle;
    out->f_op = r.f_op;
    out->f_op_max = r.f_op_max;
    out->tops_per_watt = r.tops_per_watt;
    out->p_total_calibrated = r.p_total_calibrated ? 1 : 0;
    out->ops_back_solved = r.convention == tdmac::OpsConvention::back_solved ? 1 : 0;
    out->ops_convention = tdmac::to_string(r.convention).data();
    return TDMAC_OK;
  });
}

int tdmac_energy_write_csv(const tdmac_energy* report, const char* path) {
  if (!report) return null_argument("report");
  if (!path) return null_argument("path");
  return guarded([&] {
    tdmac::EnergyReport r;
    r.p_analog = report->p_analog;
    r.p_digital = report->p_digital;
    r.p_total = report->p_total;
    r.energy_per_mac = report->energy_per_mac;
    r.ops_per_cycle = report->ops_per_cycle;
    r.f_op = report->f_op;
    r.f_op_max = report->f_op_max;
    r.tops_per_watt = report->tops_per_watt;
    r.p_total_calibrated = report->p_total_calibrated != 0;
    if (report->ops_back_solved) r.convention = tdmac::OpsConvention::back_solved;
    else if (report->ops_convention &&
             std::string_view(report->ops_convention) == "explicit")
      r.convention = tdmac::OpsConvention::explicit_value;
    else r.convention = tdmac::OpsConvention::two_per_mac_cell;
    return write_file(path, [&](std::ostream& o) { tdmac::csv::write_energy(o, r); });
  });
}

}  // extern "C"
