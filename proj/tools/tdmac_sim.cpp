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

// tdmac-sim: command-line front end over the tdmac C API.
//
// Exit codes: 0 success, 1 I/O or internal failure, 2 configuration error,
// 3 usage or operand error.

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdmac/tdmac.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitUsage = 3;

struct CliError {
  int exit_code;
  std::string message;
};

int exit_code_for(int status) {
  switch (status) {
    case TDMAC_ERR_CONFIG:
    case TDMAC_ERR_CUTOFF: return kExitConfig;
    case TDMAC_ERR_OPERANDS:
    case TDMAC_ERR_RANGE:
    case TDMAC_ERR_INVALID_ARGUMENT:
    case TDMAC_ERR_DEGENERATE: return kExitUsage;
    default: return kExitFailure;
  }
}

void check(int status) {
  if (status != TDMAC_OK)
    throw CliError{exit_code_for(status),
                   std::string(tdmac_status_string(status)) + ": " + tdmac_last_error()};
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct ParamsDeleter {
  void operator()(tdmac_params* p) const { tdmac_params_free(p); }
};
struct EngineDeleter {
  void operator()(tdmac_engine* e) const { tdmac_engine_free(e); }
};
struct TransferDeleter {
  void operator()(tdmac_transfer* t) const { tdmac_transfer_free(t); }
};
using ParamsPtr = std::unique_ptr<tdmac_params, ParamsDeleter>;
using EnginePtr = std::unique_ptr<tdmac_engine, EngineDeleter>;
using TransferPtr = std::unique_ptr<tdmac_transfer, TransferDeleter>;

// Options shared by every subcommand.
struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::optional<double> t_clk_tdc;
  bool noise = false;
  bool linear_delay = false;
  std::string out_dir = "tdmac_out";
  unsigned workers = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool out_default) {
  cmd->add_option("-c,--config", o.config_path, "JSON config file (defaults if absent)");
  cmd->add_option("--seed", o.seed, "PRNG seed (falls back to $TDMAC_SEED, then the config)");
  cmd->add_option("--set", o.overrides,
                  "Override a config field, e.g. --set t_meas=4e-8 or "
                  "--set delay_model.pmos_starved.v_tp=0.35 (repeatable)");
  cmd->add_option("--t-clk-tdc", o.t_clk_tdc, "Readout counter clock period [s]");
  cmd->add_flag("--noise", o.noise, "Enable kT/C sampling noise");
  cmd->add_flag("--linear-delay", o.linear_delay,
                "Replace the delay model by its least-squares line (beta = gamma = 0)");
  auto* out = cmd->add_option("-o,--out", o.out_dir, "Output directory");
  if (out_default) out->capture_default_str();
  cmd->add_option("-j,--workers", o.workers, "Worker threads for sweeps")
      ->capture_default_str()
      ->check(CLI::Range(1u, 1024u));
}

json parse_override_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

// flag > TDMAC_SEED > config file > built-in default
ParamsPtr resolve_params(const CommonOptions& o) {
  tdmac_params* raw = nullptr;
  if (o.config_path.empty()) check(tdmac_params_default(&raw));
  else check(tdmac_params_load(o.config_path.c_str(), &raw));
  ParamsPtr params(raw);

  json patch = json::object();
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw CliError{kExitUsage, "--set expects key=value, got '" + kv + "'"};
    json* node = &patch;
    std::string path = kv.substr(0, eq);
    for (std::size_t dot; (dot = path.find('.')) != std::string::npos;) {
      node = &(*node)[path.substr(0, dot)];
      path.erase(0, dot + 1);
    }
    (*node)[path] = parse_override_value(kv.substr(eq + 1));
  }
  if (o.t_clk_tdc) patch["t_clk_tdc"] = *o.t_clk_tdc;
  if (o.noise) patch["noise_enabled"] = true;
  if (!patch.empty()) check(tdmac_params_apply_json(params.get(), patch.dump().c_str()));

  if (o.seed) {
    check(tdmac_params_set_seed(params.get(), *o.seed));
  } else if (const char* env = std::getenv("TDMAC_SEED"); env && *env) {
    std::uint64_t seed = 0;
    const auto res = std::from_chars(env, env + std::strlen(env), seed);
    if (res.ec != std::errc() || *res.ptr != '\0')
      throw CliError{kExitUsage, std::string("TDMAC_SEED is not an unsigned integer: ") + env};
    check(tdmac_params_set_seed(params.get(), seed));
  }
  if (o.linear_delay) check(tdmac_params_linearize_delay(params.get()));

  size_t count = 0, needed = 0;
  tdmac_params_validate(params.get(), &count, nullptr, 0, &needed);
  if (count > 0) {
    std::string text(needed, '\0');
    check(tdmac_params_validate(params.get(), &count, text.data(), text.size(), &needed));
    text.resize(needed - 1);
    throw CliError{kExitConfig, "configuration rejected:\n" + text};
  }
  return params;
}

json params_json(const tdmac_params* params) {
  size_t needed = 0;
  tdmac_params_to_json(params, nullptr, 0, &needed);
  std::string text(needed, '\0');
  check(tdmac_params_to_json(params, text.data(), text.size(), &needed));
  text.resize(needed - 1);
  return json::parse(text);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError{kExitFailure, "cannot create output directory '" + dir + "': " + ec.message()};
  return fs::path(dir);
}

void write_manifest(const fs::path& dir, const CommonOptions& o,
                    const std::string& command, const tdmac_params* params,
                    const std::vector<std::string>& argv) {
  std::uint64_t seed = 0;
  check(tdmac_params_get_seed(params, &seed));
  json m;
  m["config_path"] = o.config_path;
  m["command"] = command;
  m["argv"] = argv;
  m["seed"] = seed;
  m["output_dir"] = dir.string();
  m["tool_version"] = tdmac_version();
  m["timestamp"] = utc_timestamp();
  m["workers"] = o.workers;
  m["params"] = params_json(params);
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << '\n';
  if (!out) throw CliError{kExitFailure, "cannot write manifest.json"};
}

std::vector<std::uint32_t> parse_codes(const std::string& text, const char* what) {
  std::vector<std::uint32_t> codes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::uint32_t v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size())
      throw CliError{kExitUsage, std::string("--") + what + ": '" + item + "' is not a code"};
    codes.push_back(v);
  }
  if (codes.empty()) throw CliError{kExitUsage, std::string("--") + what + " is empty"};
  return codes;
}

int arch_id(const std::string& name) {
  return name == "cascade" ? TDMAC_ARCH_CASCADE : TDMAC_ARCH_COUNTER;
}

struct SamplingOptions {
  std::string mode = "diagonal";
  std::uint32_t n = 4;
  std::uint64_t count = 1000;
  std::uint64_t seed = 1;

  tdmac_sampling to_c() const {
    tdmac_sampling s{};
    s.mode = mode == "diagonal"     ? TDMAC_SAMPLING_DIAGONAL
             : mode == "exhaustive" ? TDMAC_SAMPLING_EXHAUSTIVE
                                    : TDMAC_SAMPLING_RANDOM;
    s.n = n;
    s.count = count;
    s.seed = seed;
    return s;
  }
};

void add_sampling(CLI::App* cmd, SamplingOptions& s) {
  cmd->add_option("--sampling", s.mode, "diagonal | exhaustive (n <= 2) | random")
      ->check(CLI::IsMember({"diagonal", "exhaustive", "random"}))
      ->capture_default_str();
  cmd->add_option("-n,--cells", s.n, "Vector length N")->capture_default_str()
      ->check(CLI::Range(1u, 4096u));
  cmd->add_option("--count", s.count, "Vectors drawn in random mode")->capture_default_str();
  cmd->add_option("--sample-seed", s.seed, "Operand seed for random mode")
      ->capture_default_str();
}

TransferPtr run_transfer(const tdmac_params* params, int arch,
                         const SamplingOptions& s, unsigned workers) {
  const tdmac_sampling c = s.to_c();
  tdmac_transfer* raw = nullptr;
  check(tdmac_transfer_run(params, arch, &c, workers, &raw));
  return TransferPtr(raw);
}

tdmac_linearity write_transfer_outputs(const fs::path& dir, const tdmac_transfer* t,
                                       const std::string& arch) {
  check(tdmac_transfer_write_csv(t, (dir / ("transfer_" + arch + ".csv")).c_str()));
  check(tdmac_linearity_write_csv(t, (dir / ("linearity_" + arch + ".csv")).c_str()));
  tdmac_linearity lin{};
  check(tdmac_transfer_linearity(t, &lin));
  return lin;
}

void print_linearity(const std::string& arch, const tdmac_linearity& l) {
  std::cout << arch << ": gain=" << fmt(l.gain) << " counts/unit offset=" << fmt(l.offset)
            << " inl_max=" << fmt(l.inl_max) << " rms=" << fmt(l.rms_error)
            << " r2=" << fmt(l.r_squared) << '\n';
}

// Subcommands ---------------------------------------------------------------

struct SimulateOptions {
  std::string arch = "counter";
  std::string inputs;
  std::string weights;
  std::string trace;
};

int cmd_simulate(const CommonOptions& o, const SimulateOptions& s, bool write_out,
                 const std::vector<std::string>& argv) {
  const auto inputs = parse_codes(s.inputs, "inputs");
  const auto weights = parse_codes(s.weights, "weights");
  if (inputs.size() != weights.size())
    throw CliError{kExitUsage, "--inputs and --weights differ in length (" +
                                   std::to_string(inputs.size()) + " vs " +
                                   std::to_string(weights.size()) + ")"};
  auto params = resolve_params(o);

  tdmac_engine* raw = nullptr;
  check(tdmac_engine_create(params.get(), 0, &raw));
  EnginePtr engine(raw);
  tdmac_readout r{};
  check(tdmac_engine_run(engine.get(), arch_id(s.arch), inputs.data(), weights.data(),
                         inputs.size(), s.trace.empty() ? nullptr : s.trace.c_str(), &r));

  std::cout << "arch:     " << s.arch << '\n'
            << "oracle:   " << r.oracle << '\n'
            << "d_out:    " << r.d_out << '\n'
            << "t_acc:    " << fmt(r.t_acc * 1e9) << " ns\n"
            << "latency:  " << fmt(r.latency * 1e9) << " ns\n"
            << "energy:   " << fmt(r.energy) << " J\n"
            << "saturated cells: " << r.n_saturated << '\n';

  if (write_out) {
    const auto dir = prepare_out_dir(o.out_dir);
    std::ofstream csv(dir / "readout.csv");
    csv << "arch,oracle,d_out,t_acc_ns,latency_ns,energy_j,saturated_cells\n"
        << s.arch << ',' << r.oracle << ',' << r.d_out << ',' << fmt(r.t_acc * 1e9) << ','
        << fmt(r.latency * 1e9) << ',' << fmt(r.energy) << ',' << r.n_saturated << '\n';
    if (!csv) throw CliError{kExitFailure, "cannot write readout.csv"};
    write_manifest(dir, o, "simulate", params.get(), argv);
  }
  return kExitOk;
}

int cmd_compare(const CommonOptions& o, const SamplingOptions& s,
                const std::vector<std::string>& argv) {
  auto params = resolve_params(o);
  const auto dir = prepare_out_dir(o.out_dir);

  const auto cascade = run_transfer(params.get(), TDMAC_ARCH_CASCADE, s, o.workers);
  const auto counter = run_transfer(params.get(), TDMAC_ARCH_COUNTER, s, o.workers);
  const auto lc = write_transfer_outputs(dir, cascade.get(), "cascade");
  const auto lk = write_transfer_outputs(dir, counter.get(), "counter");

  std::ofstream summary(dir / "summary.csv");
  summary << "arch,gain,offset,inl_max,rms_error,r_squared\n";
  for (const auto& [name, l] : {std::pair{"cascade", lc}, std::pair{"counter", lk}})
    summary << name << ',' << fmt(l.gain) << ',' << fmt(l.offset) << ','
            << fmt(l.inl_max) << ',' << fmt(l.rms_error) << ',' << fmt(l.r_squared) << '\n';
  if (!summary) throw CliError{kExitFailure, "cannot write summary.csv"};

  print_linearity("cascade", lc);
  print_linearity("counter", lk);
  const char* verdict = lc.inl_max < lk.inl_max   ? "cascade"
                        : lk.inl_max < lc.inl_max ? "counter"
                                                  : "tie";
  std::cout << "verdict: " << verdict << " (lower inl_max)\n";
  write_manifest(dir, o, "compare", params.get(), argv);
  return kExitOk;
}

int cmd_sweep(const CommonOptions& o, const std::string& arch, const SamplingOptions& s,
              const std::vector<std::string>& argv) {
  auto params = resolve_params(o);
  const auto dir = prepare_out_dir(o.out_dir);
  const auto t = run_transfer(params.get(), arch_id(arch), s, o.workers);
  const auto lin = write_transfer_outputs(dir, t.get(), arch);
  std::cout << "records: " << tdmac_transfer_size(t.get()) << '\n';
  print_linearity(arch, lin);
  write_manifest(dir, o, "sweep", params.get(), argv);
  return kExitOk;
}

int cmd_noise(const CommonOptions& o, std::uint32_t n_cells, std::uint64_t trials,
              const std::vector<std::string>& argv) {
  auto params = resolve_params(o);
  const auto dir = prepare_out_dir(o.out_dir);

  tdmac_noise_stats q{};
  check(tdmac_quantization_stats(params.get(), n_cells, trials,
                                 (dir / "noise.csv").c_str(), &q));
  std::cout << "quantization noise, N=" << n_cells << ", trials=" << q.sample_count << '\n'
            << "  empirical variance: " << fmt(q.empirical_variance) << " s^2\n"
            << "  predicted N*T^2/12: " << fmt(q.predicted_variance) << " s^2\n"
            << "  ratio:              " << fmt(q.ratio) << '\n';

  tdmac_thermal_stats th{};
  check(tdmac_thermal_monte_carlo(params.get(), trials, &th));
  std::cout << "kT/C noise at v_mac=" << fmt(th.v_nominal * 1e3) << " mV, samples="
            << th.sample_count << '\n'
            << "  sigma observed:  " << fmt(th.sigma_observed * 1e6) << " uV\n"
            << "  sigma predicted: " << fmt(th.sigma_predicted * 1e6) << " uV"
            << (th.sigma_predicted == 0.0 ? " (noise disabled)" : "") << '\n';
  write_manifest(dir, o, "noise", params.get(), argv);
  return kExitOk;
}

struct EnergyOptions {
  std::string arch = "cascade";
  std::uint32_t n = 4;
  std::optional<double> f_op;
  std::int32_t ops_per_cycle = 0;
  std::optional<double> calibrate_power;
  bool worst_case = false;
};

int cmd_energy(const CommonOptions& o, const EnergyOptions& e,
               const std::vector<std::string>& argv) {
  auto params = resolve_params(o);
  const auto dir = prepare_out_dir(o.out_dir);
  const int arch = arch_id(e.arch);

  double f_op = 0.0;
  if (e.f_op) {
    f_op = *e.f_op;
  } else {
    double latency = 0.0;
    check(tdmac_latency_model(params.get(), arch, e.n, &latency));
    f_op = 1.0 / latency;
  }
  tdmac_energy r{};
  check(tdmac_energy_report(params.get(), arch, e.n, f_op, e.ops_per_cycle,
                            e.calibrate_power.value_or(0.0), e.worst_case ? 1 : 0, &r));
  check(tdmac_energy_write_csv(&r, (dir / "energy.csv").c_str()));

  std::cout << "arch: " << e.arch << ", N=" << e.n << '\n'
            << "p_analog:       " << fmt(r.p_analog * 1e6) << " uW\n"
            << "p_digital:      " << fmt(r.p_digital * 1e6) << " uW\n"
            << "p_total:        " << fmt(r.p_total * 1e6) << " uW"
            << (r.p_total_calibrated ? " (calibrated)" : " (model)") << '\n'
            << "f_op:           " << fmt(r.f_op * 1e-6) << " MHz (architecture limit "
            << fmt(r.f_op_max * 1e-6) << " MHz)\n"
            << "energy per op:  " << fmt(r.energy_per_mac) << " J\n"
            << "ops per cycle:  " << r.ops_per_cycle << " [" << r.ops_convention << "]\n"
            << "efficiency:     " << fmt(r.tops_per_watt) << " TOPS/W\n";
  if (r.ops_back_solved)
    std::cout << "note: ops-per-cycle convention is back-solved to match a reported "
                 "efficiency figure\n";
  write_manifest(dir, o, "energy", params.get(), argv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Behavioral simulator of time-domain near-memory MAC macros.\n"
               "Parameter precedence: flag > $TDMAC_SEED (seed only) > config file > default."};
  app.set_version_flag("--version", std::string(tdmac_version()));
  app.require_subcommand(1);

  CommonOptions common;

  auto* simulate = app.add_subcommand("simulate", "Run one MAC operation");
  SimulateOptions sim;
  add_common(simulate, common, false);
  simulate->add_option("--arch", sim.arch, "cascade | counter")
      ->check(CLI::IsMember({"cascade", "counter"}))->capture_default_str();
  simulate->add_option("--inputs", sim.inputs, "Comma-separated input codes")->required();
  simulate->add_option("--weights", sim.weights, "Comma-separated weight codes")->required();
  simulate->add_option("--trace", sim.trace, "Write a per-cell trace CSV");

  auto* compare = app.add_subcommand("compare", "Linearity of both architectures");
  SamplingOptions cmp_sampling;
  add_common(compare, common, true);
  add_sampling(compare, cmp_sampling);

  auto* sweep = app.add_subcommand("sweep", "Transfer curve of one architecture");
  SamplingOptions sweep_sampling;
  std::string sweep_arch = "counter";
  add_common(sweep, common, true);
  add_sampling(sweep, sweep_sampling);
  sweep->add_option("--arch", sweep_arch, "cascade | counter")
      ->check(CLI::IsMember({"cascade", "counter"}))->capture_default_str();

  auto* noise = app.add_subcommand("noise", "Quantization and kT/C noise Monte Carlo");
  std::uint32_t noise_cells = 4;
  std::uint64_t noise_trials = 100000;
  add_common(noise, common, true);
  noise->add_option("-n,--cells", noise_cells, "Cells summed per trial")
      ->capture_default_str()->check(CLI::Range(1u, 4096u));
  noise->add_option("--trials", noise_trials, "Monte Carlo trials (>= 1000)")
      ->capture_default_str();

  auto* energy = app.add_subcommand("energy", "Power and efficiency report");
  EnergyOptions en;
  add_common(energy, common, true);
  energy->add_option("--arch", en.arch, "cascade | counter")
      ->check(CLI::IsMember({"cascade", "counter"}))->capture_default_str();
  energy->add_option("-n,--cells", en.n, "Vector length N")->capture_default_str()
      ->check(CLI::Range(1u, 4096u));
  energy->add_option("--f-op", en.f_op, "Operation rate [Hz] (default: 1 / worst-case latency)");
  energy->add_option("--ops-per-cycle", en.ops_per_cycle, "Ops counted per operation (default 2N)");
  energy->add_option("--calibrate-power", en.calibrate_power,
                     "Force p_total [W] and back-compute TOPS/W");
  energy->add_flag("--worst-case", en.worst_case, "Full-scale operands for analog power");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(common, sim, simulate->count("--out") > 0, args);
    if (*compare) return cmd_compare(common, cmp_sampling, args);
    if (*sweep) return cmd_sweep(common, sweep_arch, sweep_sampling, args);
    if (*noise) return cmd_noise(common, noise_cells, noise_trials, args);
    if (*energy) return cmd_energy(common, en, args);
  } catch (const CliError& e) {
    std::cerr << "tdmac-sim: " << e.message << '\n';
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "tdmac-sim: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
