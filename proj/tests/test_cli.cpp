// Copyright 2026 The qetsim developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qet/cli.hpp"

using namespace qet;
using namespace qet::cli;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct BinaryRunner {
  std::string path;
  bool available() const { return !path.empty(); }
  int run(const std::string& args) const {
    const std::string cmd = path + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
  }
};

BinaryRunner binary() {
  const char* p = std::getenv("QET_BINARY");
  return {p ? p : ""};
}

}  // namespace

TEST_CASE("real formatting round-trips", "[cli]") {
  for (double v : {1.0 / 3.0, -0.0180063, 1e-17, 12345.678901234567, -2.5e300}) {
    const std::string s = format_real(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("result table shape is enforced", "[cli]") {
  ResultTable t;
  t.columns = {"a", "b"};
  CHECK_THROWS_AS(t.add_row({"only-one"}), std::runtime_error);
  t.add_row({"1", "2"});
  std::ostringstream os;
  write_csv(t, os);
  CHECK(os.str() == "a,b\n1,2\n");
}

TEST_CASE("minimal subcommand emits the closed-form row", "[cli]") {
  RunConfig cfg;
  cfg.subcommand = "minimal";
  cfg.h = 1.0;
  cfg.k = 0.2;
  const ResultTable t = run_minimal(cfg);
  REQUIRE(t.rows.size() == 1);
  const double e_ub = std::strtod(t.rows[0][7].c_str(), nullptr);
  CHECK(e_ub == Catch::Approx(-0.0180).margin(1e-4));

  cfg.k = -1.0;
  CHECK_THROWS_WITH(run_minimal(cfg), Catch::Matchers::ContainsSubstring("--k"));

  // user-supplied angle: theta = 0 means Bob does nothing and pays nothing
  RunConfig zero;
  zero.subcommand = "minimal";
  zero.theta = 0.0;
  const ResultTable t0 = run_minimal(zero);
  CHECK(std::strtod(t0.rows[0][7].c_str(), nullptr) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("hardware subcommand emits the pinned column set", "[cli]") {
  RunConfig cfg;
  cfg.subcommand = "hardware";
  cfg.shots = 2000;
  cfg.seed = 5;
  const ResultTable t = run_hardware(cfg);
  CHECK(t.columns == std::vector<std::string>{"h", "k", "quantity", "exact", "shot_estimate",
                                              "std_err", "mitigated"});
  CHECK(t.rows.size() == 4);
}

TEST_CASE("cooling subcommand covers every method", "[cli]") {
  for (const std::string method : {"pvm", "povm", "ancilla", "optimized", "ppa2", "ppa3"}) {
    RunConfig cfg;
    cfg.subcommand = "cooling";
    cfg.method = method;
    cfg.beta_grid = {0.5};
    cfg.restarts = method == "optimized" ? 2 : 1;
    const ResultTable t = run_cooling(cfg);
    REQUIRE(t.rows.size() == 1);
    const double p0 = std::strtod(t.rows[0][2].c_str(), nullptr);
    const double pf = std::strtod(t.rows[0][3].c_str(), nullptr);
    CHECK(p0 >= 0.5 - 1e-12);
    CHECK(pf >= 0.5 - 1e-9);
    CHECK(pf <= 1.0 + 1e-12);
  }
  RunConfig bad;
  bad.subcommand = "cooling";
  bad.method = "freeze-ray";
  CHECK_THROWS_AS(run_cooling(bad), std::invalid_argument);

  RunConfig infeasible;
  infeasible.subcommand = "cooling";
  infeasible.method = "povm";
  infeasible.povm_m1 = 0.9;
  infeasible.povm_l1 = 0.9;  // outcome probability above one
  CHECK_THROWS_AS(run_cooling(infeasible), std::invalid_argument);

  // feedback angles re-optimized for the thermal input never do worse on e_ub
  RunConfig re;
  re.subcommand = "cooling";
  re.method = "pvm";
  re.beta_grid = {0.8};
  re.reoptimize_omega = true;
  const ResultTable t2 = run_cooling(re);
  REQUIRE(t2.rows.size() == 1);
}

TEST_CASE("slp subcommand reports the ground-state verdict", "[cli]") {
  RunConfig cfg;
  cfg.subcommand = "slp";
  cfg.trials = 40;
  const ResultTable t = run_slp(cfg);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][2] == "true");
  const double pstar = std::strtod(t.rows[0][6].c_str(), nullptr);
  CHECK(pstar > 0.9);
  CHECK(pstar < 1.0);
}

TEST_CASE("qft subcommand produces table and metrics", "[cli]") {
  RunConfig cfg;
  cfg.subcommand = "qft";
  cfg.family = "lorentz";
  cfg.grid_points = 700;
  const QftOutputs out = run_qft(cfg);
  CHECK(out.table.columns == std::vector<std::string>{"x", "t", "density"});
  CHECK(out.table.rows.size() == 700);
  CHECK(out.metrics_json.find("\"norm_alpha\"") != std::string::npos);
  CHECK(out.metrics_json.find("\"delta_e\"") != std::string::npos);

  RunConfig bad = cfg;
  bad.family = "sinc";
  CHECK_THROWS_AS(run_qft(bad), std::invalid_argument);
}

TEST_CASE("metadata carries version, seed and a reparsable config echo", "[cli]") {
  RunConfig cfg;
  cfg.subcommand = "minimal";
  cfg.deterministic = true;
  cfg.seed = 9;
  const QftOutputs out = run(cfg);
  bool has_version = false, has_seed = false, has_timestamp = false;
  for (const auto& [k, v] : out.table.metadata) {
    if (k == "version") has_version = true;
    if (k == "seed") has_seed = true;
    if (k == "timestamp") has_timestamp = true;
  }
  CHECK(has_version);
  CHECK(has_seed);
  CHECK_FALSE(has_timestamp);  // suppressed under --deterministic
}

TEST_CASE("binary: determinism, config round-trip and exit codes", "[cli]") {
  const BinaryRunner bin = binary();
  if (!bin.available()) {
    WARN("QET_BINARY not set; skipping end-to-end binary checks");
    return;
  }
  const std::string dir = "/tmp/qet_cli_test";
  const int prep_rc = std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
  REQUIRE(prep_rc == 0);

  // determinism: identical invocations are byte-identical
  CHECK(bin.run("minimal --h 1 --k 0.2 --deterministic -o " + dir + "/a.csv") == 0);
  CHECK(bin.run("minimal --h 1 --k 0.2 --deterministic -o " + dir + "/b.csv") == 0);
  const std::string a = slurp(dir + "/a.csv");
  CHECK(a == slurp(dir + "/b.csv"));
  CHECK(a.find("e_ub") != std::string::npos);

  // config echo round-trip: extract the echoed config, rerun from it alone
  std::ofstream cfgf(dir + "/echo.conf");
  std::istringstream lines(a);
  std::string line;
  while (std::getline(lines, line)) {
    const std::string prefix = "# config = ";
    if (line.rfind(prefix, 0) == 0) cfgf << line.substr(prefix.size()) << "\n";
  }
  cfgf.close();
  CHECK(bin.run("minimal --config " + dir + "/echo.conf --deterministic -o " + dir + "/c.csv") ==
        0);
  CHECK(slurp(dir + "/c.csv") == a);

  // flag overrides file value
  CHECK(bin.run("minimal --config " + dir + "/echo.conf --k 0.5 --deterministic -o " + dir +
                "/d.csv") == 0);
  CHECK(slurp(dir + "/d.csv") != a);

  // hardware determinism at real shot counts
  CHECK(bin.run("hardware --shots 20000 --seed 7 --deterministic -o " + dir + "/h1.csv") == 0);
  CHECK(bin.run("hardware --shots 20000 --seed 7 --deterministic -o " + dir + "/h2.csv") == 0);
  CHECK(slurp(dir + "/h1.csv") == slurp(dir + "/h2.csv"));

  // qft writes the sidecar; the optimized run must report a negative well
  CHECK(bin.run("qft --family gauss --grid 400 --deterministic -o " + dir + "/q.csv") == 0);
  CHECK(slurp(dir + "/q.csv.metrics.json").find("depth") != std::string::npos);
  CHECK(bin.run("qft --family lorentz --optimize --restarts 1 --grid 200 --seed 3 "
                "--deterministic -o " +
                dir + "/qo.csv") == 0);
  const std::string metrics = slurp(dir + "/qo.csv.metrics.json");
  const std::size_t pos = metrics.find("\"delta_e\": ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::strtod(metrics.c_str() + pos + 11, nullptr) < 0.0);

  // unknown keys in a config file are rejected
  std::ofstream badf(dir + "/bad.conf");
  badf << "[minimal]\nh = 1\nwarp_factor = 9\n";
  badf.close();
  CHECK(bin.run("minimal --config " + dir + "/bad.conf") == 2);

  // list-valued options round-trip through config files too
  std::ofstream cf(dir + "/cool.conf");
  cf << "[cooling]\nbeta-grid = 0.3,0.7\nmethod = pvm\n";
  cf.close();
  CHECK(bin.run("cooling --beta-grid 0.3,0.7 --method pvm --deterministic -o " + dir +
                "/cool1.csv") == 0);
  CHECK(bin.run("cooling --config " + dir + "/cool.conf --deterministic -o " + dir +
                "/cool2.csv") == 0);
  CHECK(slurp(dir + "/cool1.csv") == slurp(dir + "/cool2.csv"));

  // budget couplings are readable from a config file
  std::ofstream uf(dir + "/unitary.conf");
  uf << "[unitary]\nj-an-a = 72.27\nj-an-b = 69.68\nt-pulse = 0.0095\nj-ab = 1.16\n";
  uf.close();
  CHECK(bin.run("unitary --config " + dir + "/unitary.conf --deterministic -o " + dir +
                "/u.csv") == 0);
  const std::string ucsv = slurp(dir + "/u.csv");
  CHECK(ucsv.find("budget_valid") != std::string::npos);
  CHECK(ucsv.find("true") != std::string::npos);

  // exit codes: validation = 2, unknown flag = 2, io = 4
  CHECK(bin.run("minimal --k -1") == 2);
  CHECK(bin.run("minimal --no-such-flag 1") == 2);
  CHECK(bin.run("minimal --h 1 --k 1 -o /nonexistent-dir/x.csv") == 4);
  CHECK(bin.run("--help") == 0);

  // QET_SEED env fallback
  CHECK(std::system((std::string("QET_SEED=33 ") + bin.path +
                     " hardware --shots 5000 --deterministic -o " + dir +
                     "/env1.csv >/dev/null 2>&1")
                        .c_str()) == 0);
  const std::string env1 = slurp(dir + "/env1.csv");
  CHECK(env1.find("seed = 33") != std::string::npos);
}
