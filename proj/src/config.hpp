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
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tdmac {

/// 4-bit unsigned operand code, 0..15.
class Code4 {
 public:
  static constexpr unsigned kMax = 15;

  constexpr Code4() = default;
  /// Throws OperandError when value > 15.
  explicit Code4(unsigned value);

  constexpr unsigned value() const noexcept { return value_; }
  friend constexpr bool operator==(Code4, Code4) = default;

 private:
  std::uint8_t value_ = 0;
};

/// Paired input and weight codes for one length-N dot product.
struct VectorOperands {
  std::vector<Code4> inputs;
  std::vector<Code4> weights;

  std::size_t size() const noexcept { return inputs.size(); }

  /// Builds operands from raw integers; throws OperandError on bad codes or
  /// mismatched / empty vectors.
  static VectorOperands from_values(const std::vector<unsigned>& inputs,
                                    const std::vector<unsigned>& weights);

  friend bool operator==(const VectorOperands&, const VectorOperands&) = default;
};

/// t_d(v) = t0 + alpha v + beta v^2 + gamma v^3.
struct PolynomialDelay {
  double t0 = 0.0;     // s
  double alpha = 0.0;  // s/V
  double beta = 0.0;   // s/V^2
  double gamma = 0.0;  // s/V^3

  friend bool operator==(const PolynomialDelay&, const PolynomialDelay&) = default;
};

/// Inverter chain starved by a square-law PMOS whose gate sits at v_mac.
struct PmosStarvedDelay {
  double k_factor = 0.0;  // A/V^2
  double v_tp = 0.0;      // V, threshold magnitude
  double c_load = 0.0;    // F, per stage
  double v_swing = 0.0;   // V
  int stages = 8;

  friend bool operator==(const PmosStarvedDelay&, const PmosStarvedDelay&) = default;
};

using DelayModel = std::variant<PolynomialDelay, PmosStarvedDelay>;

struct DacNonideality {
  std::optional<double> v_early;  // V; absent means infinite output impedance
  double mismatch_sigma = 0.0;    // relative sigma of each unit cell

  friend bool operator==(const DacNonideality&, const DacNonideality&) = default;
};

struct DigitalPowerParams {
  double alpha_sw = 0.0;  // activity factor, 0..1
  double c_dig = 0.0;     // F, effective switched capacitance

  friend bool operator==(const DigitalPowerParams&, const DigitalPowerParams&) = default;
};

/// Every physical constant and simulation knob. SI units throughout.
struct CircuitParams {
  double i_lsb = 0.0;
  int n_dac_bits = 4;
  double c_int = 0.0;
  double v_dd = 0.0;
  double v_sat = 0.0;
  double t_clk_pulse = 0.0;
  double t_clk_tdc = 0.0;
  double temperature = 0.0;
  DelayModel delay_model = PmosStarvedDelay{};
  std::optional<DacNonideality> dac_nonideality;
  bool noise_enabled = false;
  double t_meas = 0.0;
  double t_ctrl = 0.0;
  DigitalPowerParams p_digital;
  std::uint64_t seed = 0;

  /// Largest code either operand can take (15 for 4 bits).
  int max_code() const noexcept { return (1 << n_dac_bits) - 1; }

  friend bool operator==(const CircuitParams&, const CircuitParams&) = default;
};

CircuitParams default_params();

/// Returns one message per violated invariant; empty means valid.
std::vector<std::string> validate(const CircuitParams& params);

/// Throws ConfigError listing every violation.
void require_valid(const CircuitParams& params);

/// Full-scale integrated voltage, max_code * i_lsb * max_code * t_clk_pulse / c_int.
double full_scale_voltage(const CircuitParams& params);

// JSON config. Field names mirror CircuitParams exactly; unknown keys throw
// ConfigError. Keys absent from the document keep the value in `base`.
std::string to_json(const CircuitParams& params, int indent = 2);
CircuitParams from_json(const std::string& text,
                        const CircuitParams& base = default_params());
CircuitParams load_config(const std::string& path,
                          const CircuitParams& base = default_params());
void save_config(const CircuitParams& params, const std::string& path);

}  // namespace tdmac
