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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "tdmac/tdmac.h"

namespace fs = std::filesystem;

namespace {

struct ParamsDeleter {
  void operator()(tdmac_params* p) const { tdmac_params_free(p); }
};
struct EngineDeleter {
  void operator()(tdmac_engine* e) const { tdmac_engine_free(e); }
};
struct TransferDeleter {
  void operator()(tdmac_transfer* t) const { tdmac_transfer_free(t); }
};
using Params = std::unique_ptr<tdmac_params, ParamsDeleter>;
using Engine = std::unique_ptr<tdmac_engine, EngineDeleter>;
using Transfer = std::unique_ptr<tdmac_transfer, TransferDeleter>;

Params default_params() {
  tdmac_params* p = nullptr;
  REQUIRE(tdmac_params_default(&p) == TDMAC_OK);
  return Params(p);
}

fs::path scratch_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "tdmac_capi_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("version and status strings") {
    CHECK(std::strlen(tdmac_version()) > 0);
    CHECK(std::string(tdmac_status_string(TDMAC_OK)) == "ok");
    CHECK(std::strlen(tdmac_status_string(TDMAC_ERR_CUTOFF)) > 0);
    CHECK(std::strlen(tdmac_status_string(12345)) > 0);
  }

  TEST_CASE("null arguments are rejected") {
    CHECK(tdmac_params_default(nullptr) == TDMAC_ERR_INVALID_ARGUMENT);
    CHECK(tdmac_engine_create(nullptr, 0, nullptr) == TDMAC_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(tdmac_last_error()) > 0);
    tdmac_params_free(nullptr);
    tdmac_engine_free(nullptr);
    tdmac_transfer_free(nullptr);
  }

  TEST_CASE("simulate through the C API") {
    Params p = default_params();
    tdmac_engine* raw = nullptr;
    REQUIRE(tdmac_engine_create(p.get(), 0, &raw) == TDMAC_OK);
    Engine e(raw);
    const uint32_t x[] = {7, 3, 15, 0}, w[] = {2, 10, 1, 5};
    tdmac_readout r{};
    REQUIRE(tdmac_engine_run(e.get(), TDMAC_ARCH_COUNTER, x, w, 4, nullptr, &r) == TDMAC_OK);
    CHECK(r.oracle == 59);
    CHECK(r.arch == TDMAC_ARCH_COUNTER);
    CHECK(r.latency == doctest::Approx(452e-9).epsilon(1e-12));
    CHECK(static_cast<double>(r.d_out) * 1e-9 <= r.t_acc);
    CHECK(r.n_saturated == 0);

    double caps[8];
    size_t n = 0;
    REQUIRE(tdmac_engine_capacitors(e.get(), caps, 8, &n) == TDMAC_OK);
    CHECK(n == 4);
    for (size_t i = 0; i < n; ++i) CHECK(caps[i] == 0.0);
    CHECK(tdmac_engine_capacitors(e.get(), caps, 2, &n) == TDMAC_ERR_BUFFER_TOO_SMALL);
    CHECK(n == 4);

    const uint32_t bad[] = {16, 0, 0, 0};
    CHECK(tdmac_engine_run(e.get(), TDMAC_ARCH_CASCADE, bad, w, 4, nullptr, &r) ==
          TDMAC_ERR_OPERANDS);
    CHECK(std::string(tdmac_last_error()).find("15") != std::string::npos);
    CHECK(tdmac_engine_run(e.get(), 7, x, w, 4, nullptr, &r) == TDMAC_ERR_INVALID_ARGUMENT);
    CHECK(tdmac_engine_run(e.get(), TDMAC_ARCH_CASCADE, x, w, 0, nullptr, &r) ==
          TDMAC_ERR_OPERANDS);
  }

  TEST_CASE("trace file") {
    const fs::path dir = scratch_dir("trace");
    Params p = default_params();
    tdmac_engine* raw = nullptr;
    REQUIRE(tdmac_engine_create(p.get(), 0, &raw) == TDMAC_OK);
    Engine e(raw);
    const uint32_t x[] = {1, 2}, w[] = {3, 4};
    tdmac_readout r{};
    const std::string path = (dir / "trace.csv").string();
    REQUIRE(tdmac_engine_run(e.get(), TDMAC_ARCH_CASCADE, x, w, 2, path.c_str(), &r) ==
            TDMAC_OK);
    CHECK(slurp(path).rfind("arch,phase,cell,v_mac,t_d,count,saturated,t_end\n", 0) == 0);
    const std::string missing = (dir / "no" / "such" / "dir" / "t.csv").string();
    CHECK(tdmac_engine_run(e.get(), TDMAC_ARCH_CASCADE, x, w, 2, missing.c_str(), &r) ==
          TDMAC_ERR_IO);
  }

  TEST_CASE("params JSON, seed and validation") {
    Params p = default_params();
    size_t needed = 0;
    CHECK(tdmac_params_to_json(p.get(), nullptr, 0, &needed) == TDMAC_ERR_BUFFER_TOO_SMALL);
    REQUIRE(needed > 1);
    std::string json(needed, '\0');
    REQUIRE(tdmac_params_to_json(p.get(), json.data(), json.size(), &needed) == TDMAC_OK);
    CHECK(json.find("\"i_lsb\"") != std::string::npos);

    REQUIRE(tdmac_params_set_seed(p.get(), 1234) == TDMAC_OK);
    uint64_t seed = 0;
    REQUIRE(tdmac_params_get_seed(p.get(), &seed) == TDMAC_OK);
    CHECK(seed == 1234);

    CHECK(tdmac_params_apply_json(p.get(), "{\"c_int\": 0}") == TDMAC_OK);
    size_t count = 0;
    char buf[1024];
    REQUIRE(tdmac_params_validate(p.get(), &count, buf, sizeof buf, &needed) == TDMAC_OK);
    CHECK(count >= 1);
    CHECK(std::string(buf).find("c_int") != std::string::npos);
    tdmac_engine* raw = nullptr;
    CHECK(tdmac_engine_create(p.get(), 0, &raw) == TDMAC_ERR_CONFIG);
    CHECK(raw == nullptr);

    CHECK(tdmac_params_apply_json(p.get(), "{\"no_such_key\": 1}") == TDMAC_ERR_CONFIG);
    CHECK(tdmac_params_apply_json(p.get(), "{not json") == TDMAC_ERR_CONFIG);
  }

  TEST_CASE("params file round trip and clone") {
    const fs::path dir = scratch_dir("params");
    Params p = default_params();
    REQUIRE(tdmac_params_apply_json(p.get(), "{\"t_clk_tdc\": 5e-10, \"seed\": 77}") ==
            TDMAC_OK);
    const std::string path = (dir / "cfg.json").string();
    REQUIRE(tdmac_params_save(p.get(), path.c_str()) == TDMAC_OK);
    tdmac_params* loaded = nullptr;
    REQUIRE(tdmac_params_load(path.c_str(), &loaded) == TDMAC_OK);
    Params q(loaded);
    tdmac_params* cloned = nullptr;
    REQUIRE(tdmac_params_clone(q.get(), &cloned) == TDMAC_OK);
    Params c(cloned);

    size_t needed = 0;
    tdmac_params_to_json(p.get(), nullptr, 0, &needed);
    std::string a(needed, '\0'), b(needed, '\0');
    REQUIRE(tdmac_params_to_json(p.get(), a.data(), a.size(), &needed) == TDMAC_OK);
    REQUIRE(tdmac_params_to_json(c.get(), b.data(), b.size(), &needed) == TDMAC_OK);
    CHECK(a == b);

    tdmac_params* none = nullptr;
    CHECK(tdmac_params_load((dir / "missing.json").string().c_str(), &none) ==
          TDMAC_ERR_CONFIG);
  }

  TEST_CASE("latency and pulse helpers") {
    Params p = default_params();
    double t = 0;
    REQUIRE(tdmac_latency_model(p.get(), TDMAC_ARCH_COUNTER, 4, &t) == TDMAC_OK);
    CHECK(t == doctest::Approx(452e-9).epsilon(1e-12));
    double cascade = 0;
    REQUIRE(tdmac_latency_model(p.get(), TDMAC_ARCH_CASCADE, 4, &cascade) == TDMAC_OK);
    CHECK(cascade < t);
    CHECK(tdmac_latency_model(p.get(), TDMAC_ARCH_CASCADE, 0, &t) == TDMAC_ERR_RANGE);
    REQUIRE(tdmac_pulse_duration(15, 20e-9, &t) == TDMAC_OK);
    CHECK(t == doctest::Approx(300e-9));
    CHECK(tdmac_pulse_duration(16, 20e-9, &t) == TDMAC_ERR_OPERANDS);
    CHECK(tdmac_pulse_duration(3, 0.0, &t) == TDMAC_ERR_RANGE);

    const fs::path dir = scratch_dir("pulse");
    const std::string path = (dir / "wave.csv").string();
    REQUIRE(tdmac_pulsegen_write_csv(2, 5, path.c_str()) == TDMAC_OK);
    CHECK(slurp(path).rfind("cycle,enable,counter,match_out\n", 0) == 0);
  }

  TEST_CASE("transfer curves and linearity") {
    const fs::path dir = scratch_dir("transfer");
    Params p = default_params();
    const tdmac_sampling diag{TDMAC_SAMPLING_DIAGONAL, 4, 0, 0};
    tdmac_transfer* raw = nullptr;
    REQUIRE(tdmac_transfer_run(p.get(), TDMAC_ARCH_CASCADE, &diag, 2, &raw) == TDMAC_OK);
    Transfer t(raw);
    REQUIRE(tdmac_transfer_size(t.get()) == 16);
    tdmac_transfer_record rec{};
    REQUIRE(tdmac_transfer_get(t.get(), 15, &rec) == TDMAC_OK);
    CHECK(rec.oracle == 900);
    CHECK(tdmac_transfer_get(t.get(), 16, &rec) == TDMAC_ERR_RANGE);
    tdmac_linearity lin{};
    REQUIRE(tdmac_transfer_linearity(t.get(), &lin) == TDMAC_OK);
    CHECK(lin.gain > 0.0);
    CHECK(lin.r_squared > 0.9);
    CHECK(lin.inl_max > 0.0);

    const std::string tpath = (dir / "transfer.csv").string();
    const std::string lpath = (dir / "linearity.csv").string();
    REQUIRE(tdmac_transfer_write_csv(t.get(), tpath.c_str()) == TDMAC_OK);
    REQUIRE(tdmac_linearity_write_csv(t.get(), lpath.c_str()) == TDMAC_OK);
    CHECK(slurp(tpath).rfind("arch,oracle,d_out,t_acc_ns,saturated\ncascade,0,8,", 0) == 0);
    CHECK(slurp(lpath).rfind("oracle,inl\n0,", 0) == 0);

    const tdmac_sampling big{TDMAC_SAMPLING_EXHAUSTIVE, 3, 0, 0};
    tdmac_transfer* none = nullptr;
    CHECK(tdmac_transfer_run(p.get(), TDMAC_ARCH_CASCADE, &big, 1, &none) == TDMAC_ERR_RANGE);
    CHECK(none == nullptr);

    const tdmac_sampling flat{TDMAC_SAMPLING_EXHAUSTIVE, 1, 0, 0};
    REQUIRE(tdmac_transfer_run(p.get(), TDMAC_ARCH_COUNTER, &flat, 4, &raw) == TDMAC_OK);
    Transfer e(raw);
    CHECK(tdmac_transfer_size(e.get()) == 256);
  }

  TEST_CASE("noise and energy") {
    const fs::path dir = scratch_dir("noise");
    Params p = default_params();
    tdmac_noise_stats ns{};
    const std::string npath = (dir / "noise.csv").string();
    REQUIRE(tdmac_quantization_stats(p.get(), 4, 100000, npath.c_str(), &ns) == TDMAC_OK);
    CHECK(ns.ratio == doctest::Approx(1.0).epsilon(0.05));
    CHECK(ns.predicted_variance == doctest::Approx(4e-18 / 12));
    CHECK(slurp(npath).rfind("trial,error_s\n0,", 0) == 0);
    CHECK(tdmac_quantization_stats(p.get(), 4, 10, nullptr, &ns) == TDMAC_ERR_RANGE);

    tdmac_thermal_stats th{};
    REQUIRE(tdmac_thermal_monte_carlo(p.get(), 1000, &th) == TDMAC_OK);
    CHECK(th.sigma_observed == 0.0);

    tdmac_energy en{};
    REQUIRE(tdmac_energy_report(p.get(), TDMAC_ARCH_COUNTER, 4, 40e6, 8, 42e-6, 0, &en) ==
            TDMAC_OK);
    CHECK(en.tops_per_watt == doctest::Approx(7.62).epsilon(0.01));
    CHECK(en.ops_back_solved);
    CHECK(en.p_total_calibrated);
    CHECK(std::string(en.ops_convention) == "back-solved");
    const std::string epath = (dir / "energy.csv").string();
    REQUIRE(tdmac_energy_write_csv(&en, epath.c_str()) == TDMAC_OK);
    CHECK(slurp(epath).rfind("field,value,unit\n", 0) == 0);

    REQUIRE(tdmac_energy_report(p.get(), TDMAC_ARCH_CASCADE, 4, 1e6, 0, 0.0, 0, &en) ==
            TDMAC_OK);
    CHECK(en.ops_per_cycle == 8);
    CHECK_FALSE(en.ops_back_solved);
    CHECK(tdmac_energy_report(p.get(), TDMAC_ARCH_CASCADE, 4, -1.0, 0, 0.0, 0, &en) ==
          TDMAC_ERR_RANGE);
  }

  TEST_CASE("linearized delay model") {
    Params p = default_params();
    REQUIRE(tdmac_params_linearize_delay(p.get()) == TDMAC_OK);
    size_t needed = 0;
    tdmac_params_to_json(p.get(), nullptr, 0, &needed);
    std::string json(needed, '\0');
    REQUIRE(tdmac_params_to_json(p.get(), json.data(), json.size(), &needed) == TDMAC_OK);
    CHECK(json.find("\"polynomial\"") != std::string::npos);
    CHECK(json.find("\"beta\": 0.0") != std::string::npos);
  }
}
