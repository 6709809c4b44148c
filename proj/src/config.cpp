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

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "delay_line.hpp"
#include "errors.hpp"

namespace tdmac {

using nlohmann::json;

Code4::Code4(unsigned value) {
  if (value > kMax)
    throw OperandError("code " + std::to_string(value) +
                       " is outside the 4-bit range 0..15");
  value_ = static_cast<std::uint8_t>(value);
}

VectorOperands VectorOperands::from_values(const std::vector<unsigned>& inputs,
                                           const std::vector<unsigned>& weights) {
  if (inputs.size() != weights.size())
    throw OperandError("inputs and weights must have the same length (got " +
                       std::to_string(inputs.size()) + " and " +
                       std::to_string(weights.size()) + ")");
  if (inputs.empty()) throw OperandError("operand vectors must not be empty");
  VectorOperands ops;
  ops.inputs.reserve(inputs.size());
  ops.weights.reserve(weights.size());
  for (unsigned v : inputs) ops.inputs.emplace_back(v);
  for (unsigned v : weights) ops.weights.emplace_back(v);
  return ops;
}

CircuitParams default_params() {
  CircuitParams p;
  p.i_lsb = 11.5e-9;
  p.n_dac_bits = 4;
  p.c_int = 200e-15;
  p.v_dd = 1.0;
  p.v_sat = 0.3;
  p.t_clk_pulse = 20e-9;
  p.t_clk_tdc = 1e-9;
  p.temperature = 300.0;

  PmosStarvedDelay cell;
  cell.v_tp = 0.4;
  cell.c_load = 5e-15;
  cell.v_swing = 1.0;
  cell.stages = 8;
  cell.k_factor = calibrate_k_factor(cell, p.v_dd, 2e-9);
  p.delay_model = cell;

  p.noise_enabled = false;
  p.t_meas = 32 * p.t_clk_tdc;
  p.t_ctrl = 4 * p.t_clk_tdc;
  p.p_digital = {0.1, 50e-15};
  p.seed = 1;
  return p;
}

double full_scale_voltage(const CircuitParams& params) {
  const double m = params.max_code();
  return m * params.i_lsb * m * params.t_clk_pulse / params.c_int;
}

namespace {

void require_positive(std::vector<std::string>& out, const char* name, double v) {
  if (!(v > 0.0)) out.push_back(std::string(name) + " must be positive");
}

}  // namespace

std::vector<std::string> validate(const CircuitParams& p) {
  std::vector<std::string> v;
  require_positive(v, "i_lsb", p.i_lsb);
  require_positive(v, "c_int", p.c_int);
  require_positive(v, "v_dd", p.v_dd);
  require_positive(v, "v_sat", p.v_sat);
  require_positive(v, "t_clk_pulse", p.t_clk_pulse);
  require_positive(v, "t_clk_tdc", p.t_clk_tdc);
  require_positive(v, "temperature", p.temperature);
  require_positive(v, "t_meas", p.t_meas);
  require_positive(v, "t_ctrl", p.t_ctrl);
  require_positive(v, "p_digital.c_dig", p.p_digital.c_dig);
  if (!(p.p_digital.alpha_sw >= 0.0 && p.p_digital.alpha_sw <= 1.0))
    v.push_back("p_digital.alpha_sw must lie in [0, 1]");
  if (p.n_dac_bits != 4) v.push_back("n_dac_bits must be 4");
  if (p.v_dd > 0.0 && p.v_sat > 0.0 && !(p.v_sat < p.v_dd))
    v.push_back("v_sat must be below v_dd");

  if (p.dac_nonideality) {
    const auto& d = *p.dac_nonideality;
    if (d.v_early && !(*d.v_early > 0.0))
      v.push_back("dac_nonideality.v_early must be positive");
    if (!(d.mismatch_sigma >= 0.0))
      v.push_back("dac_nonideality.mismatch_sigma must be non-negative");
  }

  bool model_ok = true;
  if (const auto* poly = std::get_if<PolynomialDelay>(&p.delay_model)) {
    if (!(poly->alpha > 0.0)) {
      v.push_back("delay_model.polynomial.alpha must be positive");
      model_ok = false;
    }
    if (!(poly->t0 > 0.0)) {
      v.push_back("delay_model.polynomial.t0 must be positive");
      model_ok = false;
    }
  } else {
    const auto& cell = std::get<PmosStarvedDelay>(p.delay_model);
    const std::size_t before = v.size();
    require_positive(v, "delay_model.pmos_starved.k_factor", cell.k_factor);
    require_positive(v, "delay_model.pmos_starved.v_tp", cell.v_tp);
    require_positive(v, "delay_model.pmos_starved.c_load", cell.c_load);
    require_positive(v, "delay_model.pmos_starved.v_swing", cell.v_swing);
    if (cell.stages < 1) v.push_back("delay_model.pmos_starved.stages must be >= 1");
    if (!(p.v_dd - p.v_sat - cell.v_tp > 0.0))
      v.push_back("delay_model.pmos_starved: v_dd - v_sat - v_tp must be positive "
                  "(starving device cuts off inside the operating range)");
    model_ok = v.size() == before;
  }

  const bool scalars_ok = v.empty();
  if (scalars_ok) {
    const double full_scale = full_scale_voltage(p);
    if (full_scale > p.v_sat * 1.1) {
      std::ostringstream msg;
      msg << "headroom: full-scale integration reaches " << full_scale * 1e3
          << " mV, above v_sat + 10% (" << p.v_sat * 1.1e3 << " mV)";
      v.push_back(msg.str());
    }
  }
  if (scalars_ok && model_ok) {
    try {
      const double worst = max_cell_delay(p);
      if (p.t_meas < worst) {
        std::ostringstream msg;
        msg << "t_meas (" << p.t_meas * 1e9
            << " ns) is shorter than the worst-case cell delay ("
            << worst * 1e9 << " ns)";
        v.push_back(msg.str());
      }
    } catch (const Error& e) {
      v.push_back(std::string("delay_model: ") + e.what());
    }
  }
  return v;
}

void require_valid(const CircuitParams& params) {
  const auto violations = validate(params);
  if (violations.empty()) return;
  std::string msg = "invalid circuit parameters:";
  for (const auto& s : violations) msg += "\n  - " + s;
  throw ConfigError(msg);
}

// JSON ----------------------------------------------------------------------

namespace {

json delay_model_to_json(const DelayModel& model) {
  if (const auto* poly = std::get_if<PolynomialDelay>(&model)) {
    return {{"polynomial",
             {{"t0", poly->t0},
              {"alpha", poly->alpha},
              {"beta", poly->beta},
              {"gamma", poly->gamma}}}};
  }
  const auto& cell = std::get<PmosStarvedDelay>(model);
  return {{"pmos_starved",
           {{"k_factor", cell.k_factor},
            {"v_tp", cell.v_tp},
            {"c_load", cell.c_load},
            {"v_swing", cell.v_swing},
            {"stages", cell.stages}}}};
}

[[noreturn]] void unknown_key(const std::string& where, const std::string& key) {
  throw ConfigError("unknown config key '" + where + key + "'");
}

template <typename T>
void read_field(const json& j, const char* key, T& out, const std::string& where) {
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + where + key + "': " + e.what());
  }
}

void check_object(const json& j, const std::string& where) {
  if (!j.is_object())
    throw ConfigError("config section '" + where + "' must be a JSON object");
}

void apply_polynomial(const json& j, PolynomialDelay& poly) {
  const std::string where = "delay_model.polynomial.";
  check_object(j, where);
  for (const auto& [key, value] : j.items()) {
    if (key == "t0") read_field(j, "t0", poly.t0, where);
    else if (key == "alpha") read_field(j, "alpha", poly.alpha, where);
    else if (key == "beta") read_field(j, "beta", poly.beta, where);
    else if (key == "gamma") read_field(j, "gamma", poly.gamma, where);
    else unknown_key(where, key);
  }
}

void apply_pmos(const json& j, PmosStarvedDelay& cell) {
  const std::string where = "delay_model.pmos_starved.";
  check_object(j, where);
  for (const auto& [key, value] : j.items()) {
    if (key == "k_factor") read_field(j, "k_factor", cell.k_factor, where);
    else if (key == "v_tp") read_field(j, "v_tp", cell.v_tp, where);
    else if (key == "c_load") read_field(j, "c_load", cell.c_load, where);
    else if (key == "v_swing") read_field(j, "v_swing", cell.v_swing, where);
    else if (key == "stages") read_field(j, "stages", cell.stages, where);
    else unknown_key(where, key);
  }
}

void apply_delay_model(const json& j, DelayModel& model) {
  check_object(j, "delay_model");
  if (j.size() != 1)
    throw ConfigError("delay_model must hold exactly one of 'polynomial' or 'pmos_starved'");
  const auto it = j.begin();
  const std::string kind = it.key();
  const json& body = it.value();
  if (kind == "polynomial") {
    // Switching variants starts from zeroed coefficients.
    PolynomialDelay poly;
    if (const auto* cur = std::get_if<PolynomialDelay>(&model)) poly = *cur;
    apply_polynomial(body, poly);
    model = poly;
  } else if (kind == "pmos_starved") {
    PmosStarvedDelay cell;
    if (const auto* cur = std::get_if<PmosStarvedDelay>(&model)) cell = *cur;
    apply_pmos(body, cell);
    model = cell;
  } else {
    unknown_key("delay_model.", kind);
  }
}

void apply_nonideality(const json& j, std::optional<DacNonideality>& out) {
  if (j.is_null()) {
    out.reset();
    return;
  }
  const std::string where = "dac_nonideality.";
  check_object(j, where);
  DacNonideality d = out.value_or(DacNonideality{});
  for (const auto& [key, value] : j.items()) {
    if (key == "v_early") {
      if (value.is_null()) d.v_early.reset();
      else {
        double v = 0.0;
        read_field(j, "v_early", v, where);
        d.v_early = v;
      }
    } else if (key == "mismatch_sigma") {
      read_field(j, "mismatch_sigma", d.mismatch_sigma, where);
    } else {
      unknown_key(where, key);
    }
  }
  out = d;
}

void apply_digital(const json& j, DigitalPowerParams& d) {
  const std::string where = "p_digital.";
  check_object(j, where);
  for (const auto& [key, value] : j.items()) {
    if (key == "alpha_sw") read_field(j, "alpha_sw", d.alpha_sw, where);
    else if (key == "c_dig") read_field(j, "c_dig", d.c_dig, where);
    else unknown_key(where, key);
  }
}

}  // namespace

std::string to_json(const CircuitParams& p, int indent) {
  json j;
  j["i_lsb"] = p.i_lsb;
  j["n_dac_bits"] = p.n_dac_bits;
  j["c_int"] = p.c_int;
  j["v_dd"] = p.v_dd;
  j["v_sat"] = p.v_sat;
  j["t_clk_pulse"] = p.t_clk_pulse;
  j["t_clk_tdc"] = p.t_clk_tdc;
  j["temperature"] = p.temperature;
  j["delay_model"] = delay_model_to_json(p.delay_model);
  if (p.dac_nonideality) {
    json d;
    d["v_early"] = p.dac_nonideality->v_early ? json(*p.dac_nonideality->v_early)
                                               : json(nullptr);
    d["mismatch_sigma"] = p.dac_nonideality->mismatch_sigma;
    j["dac_nonideality"] = d;
  } else {
    j["dac_nonideality"] = nullptr;
  }
  j["noise_enabled"] = p.noise_enabled;
  j["t_meas"] = p.t_meas;
  j["t_ctrl"] = p.t_ctrl;
  j["p_digital"] = {{"alpha_sw", p.p_digital.alpha_sw},
                    {"c_dig", p.p_digital.c_dig}};
  j["seed"] = p.seed;
  return j.dump(indent);
}

CircuitParams from_json(const std::string& text, const CircuitParams& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_object(j, "<root>");

  CircuitParams p = base;
  const std::string root;
  for (const auto& [key, value] : j.items()) {
    if (key == "i_lsb") read_field(j, "i_lsb", p.i_lsb, root);
    else if (key == "n_dac_bits") read_field(j, "n_dac_bits", p.n_dac_bits, root);
    else if (key == "c_int") read_field(j, "c_int", p.c_int, root);
    else if (key == "v_dd") read_field(j, "v_dd", p.v_dd, root);
    else if (key == "v_sat") read_field(j, "v_sat", p.v_sat, root);
    else if (key == "t_clk_pulse") read_field(j, "t_clk_pulse", p.t_clk_pulse, root);
    else if (key == "t_clk_tdc") read_field(j, "t_clk_tdc", p.t_clk_tdc, root);
    else if (key == "temperature") read_field(j, "temperature", p.temperature, root);
    else if (key == "delay_model") apply_delay_model(value, p.delay_model);
    else if (key == "dac_nonideality") apply_nonideality(value, p.dac_nonideality);
    else if (key == "noise_enabled") read_field(j, "noise_enabled", p.noise_enabled, root);
    else if (key == "t_meas") read_field(j, "t_meas", p.t_meas, root);
    else if (key == "t_ctrl") read_field(j, "t_ctrl", p.t_ctrl, root);
    else if (key == "p_digital") apply_digital(value, p.p_digital);
    else if (key == "seed") read_field(j, "seed", p.seed, root);
    else unknown_key(root, key);
  }
  return p;
}

CircuitParams load_config(const std::string& path, const CircuitParams& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return from_json(text.str(), base);
}

void save_config(const CircuitParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  out << to_json(params) << '\n';
}

}  // namespace tdmac
