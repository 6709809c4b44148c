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

#include "csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "errors.hpp"

namespace tdmac::csv {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw Error("malformed number '" + std::string(text) + "' in CSV");
  return value;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename Int>
Int parse_int(const std::string& text) {
  Int value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw Error("malformed integer '" + text + "' in CSV");
  return value;
}

void expect_header(const Table& t, std::initializer_list<const char*> names) {
  if (t.header.size() != names.size() ||
      !std::equal(names.begin(), names.end(), t.header.begin()))
    throw Error("unexpected CSV header");
  for (const auto& row : t.rows)
    if (row.size() != names.size()) throw Error("CSV row has the wrong column count");
}

}  // namespace

Table read(std::istream& in) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) return t;
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split(line));
  }
  return t;
}

void write_transfer(std::ostream& out, std::span<const TransferRecord> records) {
  out << "arch,oracle,d_out,t_acc_ns,saturated\n";
  for (const auto& r : records)
    out << to_string(r.arch) << ',' << r.oracle << ',' << r.d_out << ','
        << format_double(r.t_acc * 1e9) << ',' << int(r.saturated) << '\n';
}

void write_linearity(std::ostream& out, std::span<const TransferRecord> records,
                     const LinearityReport& report) {
  out << "oracle,inl\n";
  for (std::size_t i = 0; i < records.size(); ++i)
    out << records[i].oracle << ',' << format_double(report.inl.at(i)) << '\n';
}

void write_noise(std::ostream& out, std::span<const double> errors) {
  out << "trial,error_s\n";
  for (std::size_t i = 0; i < errors.size(); ++i)
    out << i << ',' << format_double(errors[i]) << '\n';
}

void write_energy(std::ostream& out, const EnergyReport& r) {
  out << "field,value,unit\n";
  out << "p_analog," << format_double(r.p_analog) << ",W\n";
  out << "p_digital," << format_double(r.p_digital) << ",W\n";
  out << "p_total," << format_double(r.p_total) << ",W\n";
  out << "p_total_source," << (r.p_total_calibrated ? "calibrated" : "model") << ",\n";
  out << "energy_per_mac," << format_double(r.energy_per_mac) << ",J\n";
  out << "f_op," << format_double(r.f_op) << ",Hz\n";
  out << "f_op_max," << format_double(r.f_op_max) << ",Hz\n";
  out << "ops_per_cycle," << r.ops_per_cycle << ",ops\n";
  out << "ops_convention," << to_string(r.convention) << ",\n";
  out << "tops_per_watt," << format_double(r.tops_per_watt) << ",TOPS/W\n";
}

std::vector<TransferRow> read_transfer(std::istream& in) {
  const Table t = read(in);
  expect_header(t, {"arch", "oracle", "d_out", "t_acc_ns", "saturated"});
  std::vector<TransferRow> rows;
  for (const auto& f : t.rows)
    rows.push_back({f[0], parse_int<std::int64_t>(f[1]),
                    parse_int<std::uint64_t>(f[2]), parse_double(f[3]),
                    parse_int<int>(f[4]) != 0});
  return rows;
}

std::vector<LinearityRow> read_linearity(std::istream& in) {
  const Table t = read(in);
  expect_header(t, {"oracle", "inl"});
  std::vector<LinearityRow> rows;
  for (const auto& f : t.rows)
    rows.push_back({parse_int<std::int64_t>(f[0]), parse_double(f[1])});
  return rows;
}

std::vector<double> read_noise(std::istream& in) {
  const Table t = read(in);
  expect_header(t, {"trial", "error_s"});
  std::vector<double> errors;
  for (const auto& f : t.rows) errors.push_back(parse_double(f[1]));
  return errors;
}

}  // namespace tdmac::csv
