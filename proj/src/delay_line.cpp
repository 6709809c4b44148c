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

#include "delay_line.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "errors.hpp"

namespace tdmac {

namespace {

double starved_delay(const PmosStarvedDelay& cell, double current) {
  return cell.stages * cell.c_load * cell.v_swing / current;
}

}  // namespace

double starved_current(double v_mac, const PmosStarvedDelay& model, double v_dd,
                       int cell_index) {
  const double overdrive = v_dd - v_mac - model.v_tp;
  if (!(overdrive > 0.0))
    throw CutoffError("cell " + std::to_string(cell_index) +
                          ": starving PMOS is cut off at v_mac = " +
                          std::to_string(v_mac) + " V",
                      cell_index);
  return model.k_factor * overdrive * overdrive;
}

DelaySample cell_delay(double v_mac, const CircuitParams& params, int cell_index) {
  DelaySample s;
  s.cell_index = cell_index;
  s.v_control = v_mac;
  if (const auto* poly = std::get_if<PolynomialDelay>(&params.delay_model)) {
    s.t_d = poly->t0 + v_mac * (poly->alpha + v_mac * (poly->beta + v_mac * poly->gamma));
    if (!(s.t_d > 0.0))
      throw RangeError("cell " + std::to_string(cell_index) +
                       ": polynomial delay model is non-positive at v_mac = " +
                       std::to_string(v_mac) + " V");
  } else {
    const auto& cell = std::get<PmosStarvedDelay>(params.delay_model);
    s.t_d = starved_delay(cell, starved_current(v_mac, cell, params.v_dd, cell_index));
  }
  return s;
}

double calibrate_k_factor(const PmosStarvedDelay& model, double v_dd,
                          double target_delay) {
  const double overdrive = v_dd - model.v_tp;
  if (!(overdrive > 0.0) || !(target_delay > 0.0))
    throw RangeError("cannot calibrate k_factor: need v_dd > v_tp and a positive target");
  PmosStarvedDelay cell = model;
  cell.k_factor = cell.stages * cell.c_load * cell.v_swing /
                  (target_delay * overdrive * overdrive);
  while (starved_delay(cell, starved_current(0.0, cell, v_dd)) < target_delay)
    cell.k_factor = std::nextafter(cell.k_factor, 0.0);
  return cell.k_factor;
}

PolyFit fit_polynomial(const CircuitParams& params, double v_lo, double v_hi,
                       int n_nodes) {
  if (!(v_lo < v_hi)) throw RangeError("fit range must satisfy v_lo < v_hi");
  if (n_nodes < 4) throw RangeError("a cubic fit needs at least 4 nodes");

  auto physical = [&](double v) {
    try {
      return cell_delay(v, params).t_d;
    } catch (const Error& e) {
      throw RangeError(std::string("fit range leaves the delay model's validity: ") +
                       e.what());
    }
  };

  Eigen::MatrixXd a(n_nodes, 4);
  Eigen::VectorXd b(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    const double v = v_lo + (v_hi - v_lo) * i / (n_nodes - 1);
    a(i, 0) = 1.0;
    a(i, 1) = v;
    a(i, 2) = v * v;
    a(i, 3) = v * v * v;
    b(i) = physical(v);
  }
  // Column equilibration keeps the Vandermonde system well scaled.
  Eigen::Vector4d scale;
  for (int c = 0; c < 4; ++c) {
    scale(c) = a.col(c).cwiseAbs().maxCoeff();
    if (scale(c) == 0.0) scale(c) = 1.0;
    a.col(c) /= scale(c);
  }
  const Eigen::Vector4d x = a.colPivHouseholderQr().solve(b).cwiseQuotient(scale);

  PolyFit fit{x(0), x(1), x(2), x(3), 0.0};

  auto err = [&](double v) { return std::abs(physical(v) - fit(v)); };
  constexpr int kScan = 2048;
  std::vector<double> grid(kScan + 1), e(kScan + 1);
  for (int i = 0; i <= kScan; ++i) {
    grid[i] = v_lo + (v_hi - v_lo) * i / kScan;
    e[i] = err(grid[i]);
  }
  double worst = std::max(e.front(), e.back());
  for (int i = 1; i < kScan; ++i) {
    if (e[i] < e[i - 1] || e[i] < e[i + 1]) continue;
    const auto [v_peak, neg] = boost::math::tools::brent_find_minima(
        [&](double v) { return -err(v); }, grid[i - 1], grid[i + 1],
        std::numeric_limits<double>::digits / 2 + 4);
    worst = std::max({worst, e[i], -neg});
    (void)v_peak;
  }
  fit.fit_residual_max = worst;
  return fit;
}

double cascade_delay(std::span<const AnalogSample> samples,
                     const CircuitParams& params) {
  double total = 0.0;
  for (const auto& s : samples) total += cell_delay(s.v_mac, params, s.cell_index).t_d;
  return total;
}

double max_reachable_voltage(const CircuitParams& params) {
  return std::min(params.v_sat, full_scale_voltage(params));
}

double max_cell_delay(const CircuitParams& params) {
  const int m = params.max_code();
  double worst = 0.0;
  for (int w = 0; w <= m; ++w)
    for (int x = 0; x <= m; ++x) {
      const double v = std::min(
          params.v_sat, (w * params.i_lsb) * (x * params.t_clk_pulse) / params.c_int);
      worst = std::max(worst, cell_delay(v, params).t_d);
    }
  return worst;
}

PolynomialDelay linearized_model(const CircuitParams& params) {
  const double v_hi = max_reachable_voltage(params);
  constexpr int kNodes = 64;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < kNodes; ++i) {
    const double v = v_hi * i / (kNodes - 1);
    const double t = cell_delay(v, params).t_d;
    sx += v;
    sy += t;
    sxx += v * v;
    sxy += v * t;
  }
  const double slope = (kNodes * sxy - sx * sy) / (kNodes * sxx - sx * sx);
  return {(sy - slope * sx) / kNodes, slope, 0.0, 0.0};
}

}  // namespace tdmac
