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

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int exit_code = -1;
  std::string out;  // stdout and stderr, interleaved
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" TDMAC_SIM_PATH "\" " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "tdmac_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void check_same_csvs(const fs::path& a, const fs::path& b) {
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    CAPTURE(entry.path().filename().string());
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    ++compared;
  }
  CHECK(compared == 5);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("simulate prints the readout") {
    const Result r = run("simulate --arch counter --inputs 7,3,15,0 --weights 2,10,1,5");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("oracle:   59") != std::string::npos);
    CHECK(r.out.find("d_out:") != std::string::npos);
    CHECK(r.out.find("latency:  452 ns") != std::string::npos);
    CHECK(r.out.find("energy:") != std::string::npos);

    const Result zero = run("simulate --inputs 0,0 --weights 0,0");
    CHECK(zero.exit_code == 0);
    CHECK(zero.out.find("oracle:   0") != std::string::npos);
  }

  TEST_CASE("simulate writes a manifest and readout") {
    const fs::path dir = scratch("simulate");
    const Result r = run("simulate --inputs 1,2 --weights 3,4 --seed 9 -o " + dir.string());
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir / "readout.csv"));
    const std::string manifest = slurp(dir / "manifest.json");
    for (const char* key : {"\"command\"", "\"seed\"", "\"config_path\"", "\"output_dir\"",
                            "\"tool_version\"", "\"timestamp\"", "\"params\""})
      CHECK(manifest.find(key) != std::string::npos);
    CHECK(manifest.find("\"seed\": 9") != std::string::npos);
  }

  TEST_CASE("error exit codes") {
    const Result ragged = run("simulate --inputs 1,2 --weights 3");
    CHECK(ragged.exit_code == 3);
    CHECK(ragged.out.find("differ in length") != std::string::npos);
    CHECK(run("simulate --inputs 16 --weights 3").exit_code == 3);
    CHECK(run("simulate --inputs x --weights 3").exit_code == 3);
    CHECK(run("frobnicate").exit_code == 3);

    const Result bad = run("simulate --inputs 1 --weights 3 --set c_int=0");
    CHECK(bad.exit_code == 2);
    CHECK(bad.out.find("c_int must be positive") != std::string::npos);
    CHECK(run("simulate --inputs 1 --weights 3 --set no_such=1").exit_code == 2);
    CHECK(run("simulate --inputs 1 --weights 3 -c /nonexistent/cfg.json").exit_code == 2);
  }

  TEST_CASE("config file and overrides") {
    const fs::path dir = scratch("config");
    fs::create_directories(dir);
    std::ofstream(dir / "cfg.json") << R"({"t_clk_tdc": 5e-10, "seed": 3})";
    const Result r =
        run("simulate --inputs 0,0,0,0 --weights 0,0,0,0 --arch cascade -c " +
            (dir / "cfg.json").string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("d_out:    16") != std::string::npos);
    const Result s = run("simulate --inputs 0,0,0,0 --weights 0,0,0,0 --t-clk-tdc 2e-9");
    CHECK(s.out.find("d_out:    4") != std::string::npos);
  }

  TEST_CASE("compare is reproducible across runs and worker counts") {
    const fs::path a = scratch("compare_a"), b = scratch("compare_b"), c = scratch("compare_c");
    const std::string common = "compare --noise --sampling random --count 400 --sample-seed 4 ";
    const Result ra = run(common + "-j 1 -o " + a.string());
    REQUIRE(ra.exit_code == 0);
    CHECK(ra.out.find("verdict: ") != std::string::npos);
    REQUIRE(run(common + "-j 1 -o " + b.string()).exit_code == 0);
    REQUIRE(run(common + "-j 8 -o " + c.string()).exit_code == 0);
    check_same_csvs(a, b);
    check_same_csvs(a, c);
    CHECK(slurp(a / "transfer_cascade.csv").rfind("arch,oracle,d_out,t_acc_ns,saturated\n", 0) ==
          0);
    CHECK(slurp(a / "linearity_counter.csv").rfind("oracle,inl\n", 0) == 0);
  }

  TEST_CASE("seed precedence: flag over environment over file") {
    const fs::path dir = scratch("seed");
    REQUIRE(run("simulate --inputs 1 --weights 1 -o " + dir.string(), "TDMAC_SEED=42")
                .exit_code == 0);
    CHECK(slurp(dir / "manifest.json").find("\"seed\": 42") != std::string::npos);
    REQUIRE(run("simulate --inputs 1 --weights 1 --seed 5 -o " + dir.string(), "TDMAC_SEED=42")
                .exit_code == 0);
    CHECK(slurp(dir / "manifest.json").find("\"seed\": 5") != std::string::npos);
  }

  TEST_CASE("noise summary") {
    const fs::path dir = scratch("noise");
    const Result r = run("noise --trials 100000 -n 4 -o " + dir.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("ratio") != std::string::npos);
    CHECK(slurp(dir / "noise.csv").rfind("trial,error_s\n", 0) == 0);
    CHECK(run("noise --trials 10").exit_code == 3);
  }

  TEST_CASE("energy calibration reproduces the efficiency figure") {
    const fs::path dir = scratch("energy");
    const Result r = run("energy --calibrate-power 42e-6 --f-op 40e6 --ops-per-cycle 8 -o " +
                         dir.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("7.619") != std::string::npos);
    CHECK(r.out.find("back-solved") != std::string::npos);
    const std::string csv = slurp(dir / "energy.csv");
    CHECK(csv.rfind("field,value,unit\n", 0) == 0);
    CHECK(csv.find("tops_per_watt,7.619") != std::string::npos);

    const Result wide = run("energy --calibrate-power 42e-6 --f-op 40e6 --ops-per-cycle 32");
    CHECK(wide.out.find("30.47") != std::string::npos);
  }

  TEST_CASE("sweep writes one transfer curve") {
    const fs::path dir = scratch("sweep");
    const Result r = run("sweep --arch counter -o " + dir.string());
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir / "transfer_counter.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
  }
}
