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

#include <stdexcept>
#include <string>

namespace tdmac {

/// Base class for every error raised by the simulator core.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration could not be parsed or failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operand vectors are malformed (code out of range, length mismatch, empty).
class OperandError : public Error {
 public:
  using Error::Error;
};

/// A numeric argument is outside the domain of the operation.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Fit or statistic requested on data that cannot support it.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// The current-starving PMOS is off: v_dd - v_mac - v_tp <= 0.
class CutoffError : public Error {
 public:
  CutoffError(const std::string& what, int cell_index)
      : Error(what), cell_index_(cell_index) {}

  int cell_index() const noexcept { return cell_index_; }

 private:
  int cell_index_;
};

}  // namespace tdmac
