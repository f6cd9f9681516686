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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "qet/cli.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

CLI::App* make_sub(CLI::App& app, const std::string& name, const std::string& desc) {
  CLI::App* sub = app.add_subcommand(name, desc);
  // the default short help flag -h would shadow the --h coupling option
  sub->set_help_flag("--help", "print help");
  // lets `qet <sub> --config file` reach the parent's --config option
  sub->fallthrough();
  return sub;
}

void add_common(CLI::App* sub, qet::cli::RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "PRNG seed")->envname("QET_SEED");
  sub->add_option("-o,--out", cfg.output_path, "output CSV path ('-' for stdout)");
  sub->add_flag("--deterministic", cfg.deterministic,
                "suppress the timestamp line so identical runs are byte-identical");
}

}  // namespace

int main(int argc, char** argv) {
  qet::cli::RunConfig cfg;
  CLI::App app{"Exact desk-scale simulations of quantum energy teleportation protocols"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value config with one [section] per subcommand");
  app.allow_config_extras(false);

  CLI::App* minimal = make_sub(app, "minimal", "two-qubit protocol with classical feedback");
  minimal->add_option("--h", cfg.h, "local gap h")->capture_default_str();
  minimal->add_option("--k", cfg.k, "coupling k")->capture_default_str();
  double theta_opt_value = 0;
  CLI::Option* theta_flag =
      minimal->add_option("--theta", theta_opt_value, "feedback angle (default: optimal)");
  add_common(minimal, cfg);

  CLI::App* unitaryc = make_sub(app, "unitary", "fully unitary protocol and NMR timescales");
  unitaryc->add_option("--ha", cfg.h_a, "gap h_A")->capture_default_str();
  unitaryc->add_option("--hb", cfg.h_b, "gap h_B")->capture_default_str();
  unitaryc->add_option("--k", cfg.k_u, "coupling k")->capture_default_str();
  unitaryc->add_option("--j-an-a", cfg.j_an_a, "J coupling An-A in Hz")->capture_default_str();
  unitaryc->add_option("--j-an-b", cfg.j_an_b, "J coupling An-B in Hz")->capture_default_str();
  unitaryc->add_option("--t-pulse", cfg.t_pulse, "pulse budget in seconds")->capture_default_str();
  unitaryc->add_option("--j-ab", cfg.j_ab, "direct J coupling A-B in Hz")->capture_default_str();
  add_common(unitaryc, cfg);

  CLI::App* hardware = make_sub(app, "hardware", "shot-based circuit simulation of the table");
  hardware->add_option("--h", cfg.h, "local gap h")->capture_default_str();
  hardware->add_option("--k", cfg.k, "coupling k")->capture_default_str();
  hardware->add_option("--shots", cfg.shots, "shots per circuit")->capture_default_str();
  hardware->add_option("--noise", cfg.noise, "per-qubit readout flip probability")
      ->capture_default_str();
  hardware->add_flag("--mitigate", cfg.mitigate, "apply confusion-matrix mitigation");
  add_common(hardware, cfg);

  CLI::App* cooling = make_sub(app, "cooling", "measurement-based cooling and baselines");
  cooling->add_option("--beta-grid", cfg.beta_grid, "inverse temperatures")
      ->delimiter(',')
      ->capture_default_str();
  cooling->add_option("--k-over-h", cfg.k_over_h, "relative coupling strength")
      ->capture_default_str();
  cooling->add_option("--method", cfg.method, "povm|pvm|ancilla|optimized|ppa2|ppa3")
      ->capture_default_str();
  cooling->add_option("--h-an", cfg.h_an, "ancilla gap")->capture_default_str();
  cooling->add_option("--povm-m1", cfg.povm_m1, "outcome -1 coefficient m")->capture_default_str();
  cooling->add_option("--povm-l1", cfg.povm_l1, "outcome -1 coefficient l")->capture_default_str();
  cooling->add_flag("--reoptimize-omega", cfg.reoptimize_omega,
                    "re-optimize feedback angles for each thermal input");
  cooling->add_option("--restarts", cfg.restarts, "optimizer restarts")->capture_default_str();
  add_common(cooling, cfg);

  CLI::App* qftc = make_sub(app, "qft", "field energy density after the protocol");
  qftc->add_option("--family", cfg.family, "bump|gauss|lorentz")->capture_default_str();
  qftc->add_flag("--optimize", cfg.optimize, "optimize smearing parameters for the deepest well");
  qftc->add_option("--upsilon-list", cfg.upsilon_list, "scaling factors for the study")
      ->delimiter(',');
  qftc->add_option("--grid", cfg.grid_points, "number of CSV grid points");
  qftc->add_option("--restarts", cfg.restarts, "optimizer restarts")->capture_default_str();
  add_common(qftc, cfg);

  CLI::App* slpc = make_sub(app, "slp", "passivity verdict for the protocol ground state");
  slpc->add_option("--h", cfg.h, "local gap h")->capture_default_str();
  slpc->add_option("--k", cfg.k, "coupling k")->capture_default_str();
  slpc->add_option("--trials", cfg.trials, "oracle channel samples")->capture_default_str();
  add_common(slpc, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (theta_flag->count() > 0) cfg.theta = theta_opt_value;

  try {
    const qet::cli::QftOutputs out = qet::cli::run(cfg);
    if (cfg.output_path == "-") {
      qet::cli::write_csv(out.table, std::cout);
      if (!out.metrics_json.empty()) std::cout << "# metrics\n" << out.metrics_json;
    } else {
      std::ofstream os(cfg.output_path);
      if (!os) throw std::ios_base::failure("cannot open output file " + cfg.output_path);
      qet::cli::write_csv(out.table, os);
      if (!os) throw std::ios_base::failure("failed writing " + cfg.output_path);
      if (!out.metrics_json.empty()) {
        std::ofstream js(cfg.output_path + ".metrics.json");
        if (!js) throw std::ios_base::failure("cannot open metrics sidecar");
        js << out.metrics_json;
      }
    }
  } catch (const std::ios_base::failure& e) {
    std::cerr << cfg.subcommand << ": " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << cfg.subcommand << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    std::cerr << cfg.subcommand << ": " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
