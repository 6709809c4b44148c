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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "metrics.hpp"

namespace tdmac::csv {

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Minimal reader for the unquoted CSVs this library writes.
Table read(std::istream& in);

// Schemas (headers are fixed):
//   transfer:  arch,oracle,d_out,t_acc_ns,saturated
//   linearity: oracle,inl
//   noise:     trial,error_s
//   energy:    field,value,unit
void write_transfer(std::ostream& out, std::span<const TransferRecord> records);
void write_linearity(std::ostream& out, std::span<const TransferRecord> records,
                     const LinearityReport& report);
void write_noise(std::ostream& out, std::span<const double> errors);
void write_energy(std::ostream& out, const EnergyReport& report);

struct TransferRow {
  std::string arch;
  std::int64_t oracle = 0;
  std::uint64_t d_out = 0;
  double t_acc_ns = 0.0;
  bool saturated = false;
};
struct LinearityRow {
  std::int64_t oracle = 0;
  double inl = 0.0;
};

std::vector<TransferRow> read_transfer(std::istream& in);
std::vector<LinearityRow> read_linearity(std::istream& in);
std::vector<double> read_noise(std::istream& in);

}  // namespace tdmac::csv
