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

#include "analog_frontend.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace tdmac {

CurrentSteeringDac::CurrentSteeringDac(const CircuitParams& params,
                                       Rng& mismatch_rng)
    : i_lsb_(params.i_lsb), ideal_(true) {
  units_.fill(params.i_lsb);
  const double sigma =
      params.dac_nonideality ? params.dac_nonideality->mismatch_sigma : 0.0;
  if (sigma > 0.0) {
    ideal_ = false;
    std::normal_distribution<double> delta(0.0, sigma);
    for (double& unit : units_) unit = params.i_lsb * (1.0 + delta(mismatch_rng));
  }
}

DacOutput CurrentSteeringDac::dac_current(Code4 code) const {
  DacOutput out;
  out.code = code;
  if (ideal_) {
    out.current = code.value() * i_lsb_;
  } else {
    for (unsigned u = 0; u < code.value(); ++u) out.current += units_[u];
  }
  return out;
}

AnalogSample integrate(const DacOutput& dac, const PulseTrain& pulses,
                       const CircuitParams& params, Rng& rng, int cell_index) {
  const double charge = dac.current * pulses.duration;
  double v = charge / params.c_int;

  if (params.dac_nonideality && params.dac_nonideality->v_early) {
    // dV/dt = I (1 - V / V_A) / C, V(0) = 0
    const double va = *params.dac_nonideality->v_early;
    v = -va * std::expm1(-charge / (params.c_int * va));
  }
  if (params.noise_enabled) {
    std::normal_distribution<double> noise(
        0.0, thermal_noise_sigma(params.c_int, params.temperature));
    v += noise(rng);
  }

  AnalogSample s;
  s.cell_index = cell_index;
  s.saturated = v > params.v_sat;
  s.v_mac = std::clamp(v, 0.0, params.v_sat);
  return s;
}

double thermal_noise_sigma(double capacitance, double temperature) {
  if (!(capacitance > 0.0) || !(temperature > 0.0))
    throw RangeError("capacitance and temperature must be positive");
  return std::sqrt(kBoltzmann * temperature / capacitance);
}

std::vector<AnalogSample> reset_phase(std::vector<AnalogSample> samples) {
  for (auto& s : samples) {
    s.v_mac = 0.0;
    s.saturated = false;
  }
  return samples;
}

}  // namespace tdmac
