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

#include <doctest.h>

#include <cmath>
#include <random>

#include "delay_line.hpp"
#include "errors.hpp"

using namespace tdmac;

namespace {

std::vector<AnalogSample> cells(const std::vector<double>& volts) {
  std::vector<AnalogSample> out;
  for (std::size_t i = 0; i < volts.size(); ++i)
    out.push_back({volts[i], false, static_cast<int>(i)});
  return out;
}

CircuitParams with_polynomial(double t0, double alpha, double beta, double gamma) {
  CircuitParams p = default_params();
  p.delay_model = PolynomialDelay{t0, alpha, beta, gamma};
  return p;
}

}  // namespace

TEST_SUITE("delay_line") {
  TEST_CASE("square-law starving current") {
    const CircuitParams p = default_params();
    const auto& cell = std::get<PmosStarvedDelay>(p.delay_model);
    CHECK(starved_current(0.0, cell, 1.0) == doctest::Approx(cell.k_factor * 0.36).epsilon(1e-14));
    CHECK(starved_current(0.3, cell, 1.0) ==
          doctest::Approx(starved_current(0.0, cell, 1.0) / 4).epsilon(1e-12));
    CHECK_THROWS_AS(starved_current(0.6, cell, 1.0), CutoffError);
    CHECK_THROWS_AS(starved_current(0.7, cell, 1.0), CutoffError);
  }

  TEST_CASE("cell delay anchors") {
    const CircuitParams p = default_params();
    CHECK(cell_delay(0.0, p).t_d == doctest::Approx(2e-9).epsilon(1e-14));
    CHECK(cell_delay(0.3, p).t_d == doctest::Approx(8e-9).epsilon(1e-12));
    const DelaySample s = cell_delay(0.1, p, 5);
    CHECK(s.cell_index == 5);
    CHECK(s.v_control == 0.1);
    CHECK(s.t_d > 0.0);
  }

  TEST_CASE("cutoff error names the cell") {
    CircuitParams p = default_params();
    try {
      cell_delay(0.65, p, 3);
      FAIL("expected cutoff");
    } catch (const CutoffError& e) {
      CHECK(e.cell_index() == 3);
    }
    try {
      cascade_delay(cells({0.1, 0.2, 0.61}), p);
      FAIL("expected cutoff");
    } catch (const CutoffError& e) {
      CHECK(e.cell_index() == 2);
    }
  }

  TEST_CASE("polynomial model with beta = gamma = 0 is affine") {
    const CircuitParams p = with_polynomial(2e-9, 16e-9, 0, 0);
    for (double v : {0.0, 0.05, 0.1, 0.2, 0.25})
      CHECK(cell_delay(v, p).t_d == doctest::Approx(2e-9 + 16e-9 * v).epsilon(1e-15));
  }

  TEST_CASE("fit of a cubic returns the cubic") {
    const CircuitParams p = with_polynomial(2e-9, 6.7e-9, 1.7e-8, 3.7e-8);
    const PolyFit fit = fit_polynomial(p, 0.0, 0.26, 64);
    CHECK(fit.t0 == doctest::Approx(2e-9).epsilon(1e-9));
    CHECK(fit.alpha == doctest::Approx(6.7e-9).epsilon(1e-9));
    CHECK(fit.beta == doctest::Approx(1.7e-8).epsilon(1e-8));
    CHECK(fit.gamma == doctest::Approx(3.7e-8).epsilon(1e-7));
    CHECK(fit.fit_residual_max < 1e-18);
  }

  TEST_CASE("fit of the starved cell over the operating range has positive alpha and beta") {
    const CircuitParams p = default_params();
    const PolyFit fit = fit_polynomial(p, 0.0, 0.26, 64);
    CHECK(fit.alpha > 0.0);
    CHECK(fit.beta > 0.0);
  }

  TEST_CASE("narrow fits of the starved cell recover its Taylor coefficients") {
    // 2 ns (0.6 / (0.6 - v))^2 = 2 ns (1 + 2v/0.6 + 3v^2/0.36 + 4v^3/0.216 + ...)
    const CircuitParams p = default_params();
    const PolyFit fit = fit_polynomial(p, 0.0, 0.01, 64);
    CHECK(fit.t0 == doctest::Approx(2e-9).epsilon(1e-8));
    CHECK(fit.alpha == doctest::Approx(2e-9 * 2 / 0.6).epsilon(1e-4));
    CHECK(fit.beta == doctest::Approx(2e-9 * 3 / 0.36).epsilon(1e-2));
    CHECK(fit.alpha > 0.0);
    CHECK(fit.beta > 0.0);
  }

  TEST_CASE("narrowing the range shrinks the residual") {
    const CircuitParams p = default_params();
    double prev = INFINITY;
    for (double hi : {0.26, 0.2, 0.15, 0.1, 0.05, 0.02}) {
      const PolyFit fit = fit_polynomial(p, 0.0, hi, 64);
      CAPTURE(hi);
      CHECK(fit.fit_residual_max < prev);
      prev = fit.fit_residual_max;
    }
  }

  TEST_CASE("residual bound holds off the nodes") {
    const CircuitParams p = default_params();
    const double hi = 0.25875;
    const PolyFit fit = fit_polynomial(p, 0.0, hi, 64);
    CHECK(fit.fit_residual_max > 0.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> v(0.0, hi);
    for (int i = 0; i < 1000; ++i) {
      const double x = v(rng);
      CHECK(std::abs(cell_delay(x, p).t_d - fit(x)) <= fit.fit_residual_max);
    }
  }

  TEST_CASE("fit argument errors") {
    const CircuitParams p = default_params();
    CHECK_THROWS_AS(fit_polynomial(p, 0.2, 0.1, 16), RangeError);
    CHECK_THROWS_AS(fit_polynomial(p, 0.0, 0.1, 3), RangeError);
    CHECK_THROWS_AS(fit_polynomial(p, 0.0, 0.7, 16), RangeError);
  }

  TEST_CASE("cascade sums cell delays") {
    const CircuitParams p = default_params();
    CHECK(cascade_delay(cells({0, 0, 0, 0}), p) == doctest::Approx(8e-9).epsilon(1e-14));
    CHECK(cascade_delay(cells({0.17}), p) == cell_delay(0.17, p).t_d);
    CHECK(cascade_delay(cells({}), p) == 0.0);
  }

  TEST_CASE("linear model cascade has the closed form") {
    const double t0 = 2e-9, alpha = 16e-9;
    const CircuitParams p = with_polynomial(t0, alpha, 0, 0);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> v(0.0, 0.25875);
    std::uniform_int_distribution<int> len(1, 16);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<double> volts(len(rng));
      double sum = 0.0;
      for (double& x : volts) sum += (x = v(rng));
      const double closed = volts.size() * t0 + alpha * sum;
      CHECK(cascade_delay(cells(volts), p) == doctest::Approx(closed).epsilon(1e-14));
    }
  }

  TEST_CASE("additivity and monotonicity") {
    const CircuitParams p = default_params();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> v(0.0, 0.25);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> a(4), b(3);
      for (double& x : a) x = v(rng);
      for (double& x : b) x = v(rng);
      std::vector<double> ab = a;
      ab.insert(ab.end(), b.begin(), b.end());
      CHECK(cascade_delay(cells(ab), p) ==
            doctest::Approx(cascade_delay(cells(a), p) + cascade_delay(cells(b), p))
                .epsilon(1e-14));

      std::vector<double> bumped = a;
      bumped[trial % 4] += 1e-3;
      CHECK(cascade_delay(cells(bumped), p) > cascade_delay(cells(a), p));
    }
  }

  TEST_CASE("distortion term separates from the linear term") {
    const double t0 = 2e-9, alpha = 6.7e-9, beta = 1.7e-8, gamma = 3.7e-8;
    const CircuitParams p = with_polynomial(t0, alpha, beta, gamma);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> v(0.0, 0.25875);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> volts(4);
      double s1 = 0, s2 = 0, s3 = 0;
      for (double& x : volts) {
        x = v(rng);
        s1 += x;
        s2 += x * x;
        s3 += x * x * x;
      }
      const double total = cascade_delay(cells(volts), p);
      const double distortion = total - (volts.size() * t0 + alpha * s1);
      CHECK(std::abs(distortion - (beta * s2 + gamma * s3)) / total < 1e-15);
    }
  }

  TEST_CASE("reachable range helpers") {
    const CircuitParams p = default_params();
    CHECK(max_reachable_voltage(p) == doctest::Approx(0.25875).epsilon(1e-12));
    CHECK(max_cell_delay(p) == doctest::Approx(cell_delay(0.25875, p).t_d).epsilon(1e-12));

    const PolynomialDelay line = linearized_model(p);
    CHECK(line.alpha > 0.0);
    CHECK(line.beta == 0.0);
    CHECK(line.gamma == 0.0);
    // The line crosses the convex curve inside the range.
    CHECK(line.t0 < cell_delay(0.0, p).t_d);
  }

  TEST_CASE("k_factor calibration") {
    PmosStarvedDelay cell{0.0, 0.4, 5e-15, 1.0, 8};
    for (double target : {1e-9, 2e-9, 3.3e-9, 7.77e-9}) {
      cell.k_factor = calibrate_k_factor(cell, 1.0, target);
      const double t = cell.stages * cell.c_load * cell.v_swing /
                       starved_current(0.0, cell, 1.0);
      CHECK(t >= target);
      CHECK(t == doctest::Approx(target).epsilon(1e-14));
    }
    CHECK_THROWS_AS(calibrate_k_factor(cell, 0.3, 2e-9), RangeError);
  }
}
