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

#include <array>
#include <span>
#include <vector>

#include "config.hpp"
#include "pulsegen.hpp"
#include "rng.hpp"

namespace tdmac {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K

struct DacOutput {
  double current = 0.0;  // A
  Code4 code;
};

struct AnalogSample {
  double v_mac = 0.0;  // V
  bool saturated = false;
  int cell_index = 0;
};

/// 4-bit current-steering DAC decoded as 15 thermometer unit cells. Static
/// mismatch, when enabled, is drawn once at construction.
class CurrentSteeringDac {
 public:
  CurrentSteeringDac(const CircuitParams& params, Rng& mismatch_rng);

  DacOutput dac_current(Code4 code) const;

  bool ideal() const noexcept { return ideal_; }
  std::span<const double> unit_currents() const noexcept { return units_; }

 private:
  double i_lsb_;
  bool ideal_;
  std::array<double, Code4::kMax> units_{};
};

/// Charges c_int with the DAC current for the pulse window. Applies the
/// Early-voltage droop and kT/C noise when configured, then clamps to
/// [0, v_sat]. `rng` is only drawn from when noise is enabled.
AnalogSample integrate(const DacOutput& dac, const PulseTrain& pulses,
                       const CircuitParams& params, Rng& rng,
                       int cell_index = 0);

/// sqrt(k_B T / C). Throws RangeError unless both arguments are positive.
double thermal_noise_sigma(double capacitance, double temperature);

/// Discharges every capacitor to zero.
std::vector<AnalogSample> reset_phase(std::vector<AnalogSample> samples);

}  // namespace tdmac
