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

#include <span>

#include "analog_frontend.hpp"
#include "config.hpp"

namespace tdmac {

struct DelaySample {
  double t_d = 0.0;  // s
  int cell_index = 0;
  double v_control = 0.0;  // V
};

/// Cubic approximation of the voltage-to-delay curve.
struct PolyFit {
  double t0 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double fit_residual_max = 0.0;  // s, max |physical - cubic| over the range

  double operator()(double v) const noexcept {
    return t0 + v * (alpha + v * (beta + v * gamma));
  }
  PolynomialDelay as_model() const { return {t0, alpha, beta, gamma}; }
};

/// Square-law saturation current k (v_dd - v_mac - v_tp)^2. Throws
/// CutoffError when the overdrive is not positive.
double starved_current(double v_mac, const PmosStarvedDelay& model, double v_dd,
                       int cell_index = 0);

/// Delay of one eight-inverter (configurable) current-starved cell.
DelaySample cell_delay(double v_mac, const CircuitParams& params,
                       int cell_index = 0);

/// Least-squares cubic through n_nodes evenly spaced samples of cell_delay on
/// [v_lo, v_hi]. Throws RangeError on an empty range or n_nodes < 4.
PolyFit fit_polynomial(const CircuitParams& params, double v_lo, double v_hi,
                       int n_nodes = 64);

/// Sum of independent per-cell delays of a cascaded chain. CutoffError names
/// the offending cell.
double cascade_delay(std::span<const AnalogSample> samples,
                     const CircuitParams& params);

/// k_factor that makes the starved cell take `target_delay` at v_mac = 0.
/// Rounded down so that the evaluated delay is never below the target.
double calibrate_k_factor(const PmosStarvedDelay& model, double v_dd,
                          double target_delay);

/// Largest single-cell control voltage reachable with ideal operands.
double max_reachable_voltage(const CircuitParams& params);

/// Largest cell delay over every ideal (weight, input) code pair.
double max_cell_delay(const CircuitParams& params);

/// Affine model matching the physical curve's least-squares line over the
/// reachable range (beta = gamma = 0).
PolynomialDelay linearized_model(const CircuitParams& params);

}  // namespace tdmac
