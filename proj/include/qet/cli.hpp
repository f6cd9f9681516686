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

#pragma once

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qet/cooling.hpp"
#include "qet/hardware_sim.hpp"
#include "qet/minimal_qet.hpp"
#include "qet/qft1d.hpp"
#include "qet/slp.hpp"
#include "qet/unitary_qet.hpp"

namespace qet::cli {

/** Round-trip-safe real formatting (17 significant digits, '.' decimal). */
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;  // emitted as comments

  void add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw std::runtime_error("ResultTable: ragged row");
    rows.push_back(std::move(row));
  }
};

struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 0;
  std::string output_path = "-";
  bool deterministic = false;

  // minimal / hardware / slp
  double h = 1.0, k = 1.0;
  std::optional<double> theta;

  // unitary
  double h_a = 1.0, h_b = 0.4, k_u = 1.0;
  double j_an_a = 72.27, j_an_b = 69.68, t_pulse = 0.0095, j_ab = 1.16;

  // hardware
  std::uint64_t shots = 100000;
  double noise = 0.0;
  bool mitigate = false;

  // cooling
  std::vector<double> beta_grid{0.2, 0.4, 0.6, 0.8, 1.0};
  double k_over_h = 5.0;
  std::string method = "pvm";
  double h_an = 1.0;
  double povm_m1 = 0.65, povm_l1 = 0.25;
  bool reoptimize_omega = false;
  int restarts = 4;

  // qft
  std::string family = "lorentz";
  bool optimize = false;
  std::vector<double> upsilon_list;
  std::size_t grid_points = 0;  // 0 = default grid

  // slp
  int trials = 500;
};

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/** Emit the flat config-echo block re-parsable by the config reader. */
inline std::vector<std::string> config_echo_lines(const RunConfig& c) {
  std::vector<std::string> lines;
  lines.push_back("[" + c.subcommand + "]");
  auto put = [&](const std::string& k2, const std::string& v) { lines.push_back(k2 + " = " + v); };
  auto putr = [&](const std::string& k2, double v) { put(k2, format_real(v)); };
  auto putlist = [&](const std::string& k2, const std::vector<double>& vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + format_real(vs[i]);
    put(k2, s);
  };
  if (c.subcommand == "minimal") {
    putr("h", c.h); putr("k", c.k);
    if (c.theta) putr("theta", *c.theta);
  } else if (c.subcommand == "unitary") {
    putr("ha", c.h_a); putr("hb", c.h_b); putr("k", c.k_u);
    putr("j-an-a", c.j_an_a); putr("j-an-b", c.j_an_b); putr("t-pulse", c.t_pulse);
    putr("j-ab", c.j_ab);
  } else if (c.subcommand == "hardware") {
    putr("h", c.h); putr("k", c.k);
    put("shots", std::to_string(c.shots));
    putr("noise", c.noise);
    put("mitigate", c.mitigate ? "true" : "false");
  } else if (c.subcommand == "cooling") {
    putlist("beta-grid", c.beta_grid);
    putr("k-over-h", c.k_over_h);
    put("method", c.method);
    putr("h-an", c.h_an);
    putr("povm-m1", c.povm_m1); putr("povm-l1", c.povm_l1);
    put("reoptimize-omega", c.reoptimize_omega ? "true" : "false");
    put("restarts", std::to_string(c.restarts));
  } else if (c.subcommand == "qft") {
    put("family", c.family);
    put("optimize", c.optimize ? "true" : "false");
    if (!c.upsilon_list.empty()) putlist("upsilon-list", c.upsilon_list);
    if (c.grid_points) put("grid", std::to_string(c.grid_points));
  } else if (c.subcommand == "slp") {
    putr("h", c.h); putr("k", c.k);
    put("trials", std::to_string(c.trials));
  }
  put("seed", std::to_string(c.seed));
  return lines;
}

inline void write_csv(const ResultTable& t, std::ostream& os) {
  for (const auto& [k2, v] : t.metadata) os << "# " << k2 << " = " << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << csv_escape(t.columns[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
    os << "\n";
  }
}

// ---------------------------------------------------------------------------
// Subcommand runners
// ---------------------------------------------------------------------------

inline ResultTable run_minimal(const RunConfig& c) {
  if (!(c.h > 0)) throw std::invalid_argument("minimal: --h must be positive");
  if (!(c.k > 0)) throw std::invalid_argument("minimal: --k must be positive");
  const minimal::MinimalModel model({c.h, c.k});
  const double theta = c.theta.value_or(minimal::optimal_theta(model.params()));
  const minimal::EnergyLedger led = minimal::run_protocol(model, theta);
  ResultTable t;
  t.columns = {"h", "k", "theta", "f", "e_pa", "e_hb", "e_vab", "e_ub"};
  t.add_row({format_real(c.h), format_real(c.k), format_real(theta), format_real(model.f()),
             format_real(led.e_pa), format_real(led.e_hb), format_real(led.e_vab),
             format_real(led.e_ub)});
  return t;
}

inline ResultTable run_unitary(const RunConfig& c) {
  const unitary::UnitaryParams p{c.h_a, c.h_b, c.k_u};
  const unitary::UnitaryModel model(p);
  const unitary::NmrUnitaries nmr = unitary::nmr_extraction_unitaries(p);
  const StateVector out = unitary::loqc_state_after(model, nmr.u_rot * nmr.u_diag, false);
  const double extraction = unitary::extraction_of(model, out);
  const unitary::TimescaleBudget budget =
      unitary::timescale_budget(c.j_an_a, c.j_an_b, c.t_pulse, c.j_ab);
  ResultTable t;
  t.columns = {"h_a", "h_b", "k", "f3", "alice_energy", "max_extraction_bound",
               "nmr_extraction", "t_total_s", "t_ab_s", "budget_valid"};
  t.add_row({format_real(p.h_a), format_real(p.h_b), format_real(p.k), format_real(model.f3()),
             format_real(unitary::alice_energy(p)), format_real(unitary::max_extraction_bound(p)),
             format_real(extraction), format_real(budget.t_total), format_real(budget.t_ab),
             budget.valid ? "true" : "false"});
  return t;
}

inline ResultTable run_hardware(const RunConfig& c) {
  if (!(c.h > 0) || !(c.k > 0)) throw std::invalid_argument("hardware: couplings must be positive");
  if (c.noise < 0 || c.noise > 1) throw std::invalid_argument("hardware: --noise must be in [0, 1]");
  std::optional<hardware::ConfusionMatrix> cm;
  if (c.noise > 0) cm = hardware::ConfusionMatrix::symmetric_flip(c.noise);
  const hardware::TableReport rep = hardware::table_reproduction(
      {c.h, c.k}, c.shots, c.seed, cm ? &*cm : nullptr, c.mitigate);
  ResultTable t;
  t.columns = {"h", "k", "quantity", "exact", "shot_estimate", "std_err", "mitigated"};
  auto row = [&](const char* name, const hardware::QuantityReport& q) {
    t.add_row({format_real(c.h), format_real(c.k), name, format_real(q.exact),
               format_real(q.raw.value), format_real(q.raw.std_err),
               format_real(q.mitigated.value)});
  };
  row("e_pa", rep.e_pa);
  row("hb", rep.e_hb);
  row("vab", rep.e_vab);
  row("e_ub", rep.e_ub);
  return t;
}

inline ResultTable run_cooling(const RunConfig& c) {
  if (!(c.k_over_h > 0)) throw std::invalid_argument("cooling: --k-over-h must be positive");
  const double h = 1.0, k = c.k_over_h;
  ResultTable t;
  t.columns = {"beta", "method", "p_initial", "p_final"};

  const minimal::MinimalModel model({h, k});
  cooling::PovmParams povm;
  if (c.method == "pvm") {
    povm = cooling::PovmParams::pvm();
  } else if (c.method == "povm") {
    const double p1 = c.povm_m1 * c.povm_m1 + c.povm_l1 * c.povm_l1;
    const double q1 = 2 * c.povm_m1 * c.povm_l1;
    const double p0 = 1.0 - p1, q0 = -q1;
    if (!(p0 > 0) || p0 < std::abs(q0))
      throw std::invalid_argument("cooling: --povm-m1/--povm-l1 violate completeness");
    povm.minus = {c.povm_m1, c.povm_l1, 0, 0};
    povm.plus = {0.5 * (std::sqrt(p0 + q0) + std::sqrt(p0 - q0)),
                 0.5 * (std::sqrt(p0 + q0) - std::sqrt(p0 - q0)), 0, 0};
  }

  for (double beta : c.beta_grid) {
    if (beta < 0) throw std::invalid_argument("cooling: beta must be >= 0");
    double p0 = 0, pf = 0;
    if (c.method == "pvm" || c.method == "povm") {
      const DensityOperator input = cooling::thermal_state(model.h_total(), beta);
      double om_p = cooling::optimal_omega(model.params(), povm, +1);
      double om_m = cooling::optimal_omega(model.params(), povm, -1);
      if (c.reoptimize_omega) {
        auto cost = [&](const std::vector<double>& x) {
          return cooling::run_povm_protocol(model, povm, x[0], x[1], input).e_ub;
        };
        const OptimResult r = nelder_mead(cost, {om_p, om_m}, {-M_PI, -M_PI}, {M_PI, M_PI});
        om_p = r.x[0];
        om_m = r.x[1];
      }
      const cooling::ProtocolResult res =
          cooling::run_povm_protocol(model, povm, om_p, om_m, input);
      p0 = res.purity_b_initial;
      pf = res.purity_b_final;
    } else if (c.method == "ancilla") {
      const cooling::AncillaScenario sc{h, h, k, c.h_an};
      const cooling::PurityReport rep = cooling::ancilla_protocol_purity(sc, beta);
      p0 = rep.p_initial;
      pf = rep.p_final;
    } else if (c.method == "optimized") {
      const cooling::AncillaScenario sc{h, h, k, c.h_an};
      const auto [probes, rep] = cooling::optimize_probes(sc, beta, c.restarts, c.seed);
      p0 = rep.p_initial;
      pf = rep.p_final;
    } else if (c.method == "ppa2") {
      const DensityOperator input = cooling::thermal_state(model.h_total(), beta);
      p0 = partial_trace(input, {1}, 2).purity();
      pf = cooling::ppa_fixed_point_purity(input, 2, 1, beta, h);
    } else if (c.method == "ppa3") {
      const cooling::AncillaScenario sc{h, h, k, c.h_an};
      const DensityOperator rho3 = cooling::ancilla_input_state(sc, beta);
      p0 = partial_trace(rho3, {2}, 3).purity();
      pf = cooling::ppa_fixed_point_purity(rho3, 3, 2, beta, h);
    } else {
      throw std::invalid_argument("cooling: unknown --method '" + c.method + "'");
    }
    t.add_row({format_real(beta), c.method, format_real(p0), format_real(pf)});
  }
  return t;
}

struct QftOutputs {
  ResultTable table;
  std::string metrics_json;
};

inline QftOutputs run_qft(const RunConfig& c) {
  qft::SmearingFamily fam;
  if (c.family == "bump") fam = qft::SmearingFamily::CompactBump;
  else if (c.family == "gauss") fam = qft::SmearingFamily::Gaussian;
  else if (c.family == "lorentz") fam = qft::SmearingFamily::Lorentzian;
  else throw std::invalid_argument("qft: unknown --family '" + c.family + "'");

  qft::FieldScenario scn = [&] {
    if (c.optimize) {
      qft::OptimizeOptions opt;
      opt.restarts = c.restarts;
      return qft::optimize_scenario(fam, {}, c.seed, opt);
    }
    // plotting defaults in the spirit of the published figure
    const double T = 15.29;
    std::vector<double> p{T, 1.0, 1.0, T, 1.0, 1.0, 1.0, 1.0};
    return qft::scenario_from_params(fam, p, -1.0);
  }();

  const double t_eval = 2.0 * scn.t_signal;
  const qft::WellGrid metric_grid = qft::focused_grid(scn, t_eval);
  qft::WellGrid csv_grid = metric_grid;
  if (c.grid_points > 0) csv_grid.points = std::max<std::size_t>(c.grid_points, 8);

  ResultTable t;
  t.columns = {"x", "t", "density"};
  const double dx = (csv_grid.hi - csv_grid.lo) / static_cast<double>(csv_grid.points - 1);
  for (std::size_t i = 0; i < csv_grid.points; ++i) {
    const double x = csv_grid.lo + dx * static_cast<double>(i);
    t.add_row({format_real(x), format_real(t_eval),
               format_real(qft::energy_density(scn, x, t_eval))});
  }

  const qft::WellMetrics m = qft::well_metrics(scn, t_eval, metric_grid);
  std::ostringstream js;
  js << "{\n"
     << "  \"family\": \"" << c.family << "\",\n"
     << "  \"has_well\": " << (m.has_well ? "true" : "false") << ",\n"
     << "  \"depth\": " << format_real(m.depth) << ",\n"
     << "  \"width\": " << format_real(m.width) << ",\n"
     << "  \"delta_x\": " << format_real(m.delta_x) << ",\n"
     << "  \"delta_e\": " << format_real(m.delta_e) << ",\n"
     << "  \"norm_alpha\": " << format_real(scn.norm_alpha_value) << ",\n"
     << "  \"t_eval\": " << format_real(t_eval) << ",\n"
     << "  \"sigma_y\": " << format_real(scn.sigma_y_expect);
  if (!c.upsilon_list.empty()) {
    const std::vector<qft::ScalingRow> rows =
        qft::scaling_study(scn, t_eval, metric_grid, c.upsilon_list);
    js << ",\n  \"scaling\": [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      js << (i ? "," : "") << "\n    {\"upsilon\": " << format_real(r.upsilon)
         << ", \"depth\": " << format_real(r.metrics.depth)
         << ", \"width\": " << format_real(r.metrics.width)
         << ", \"delta_e\": " << format_real(r.metrics.delta_e)
         << ", \"delta_x\": " << format_real(r.metrics.delta_x)
         << ", \"norm_alpha\": " << format_real(r.norm_alpha_value) << "}";
    }
    js << "\n  ]";
  }
  js << "\n}\n";
  return {std::move(t), js.str()};
}

inline ResultTable run_slp(const RunConfig& c) {
  if (!(c.h > 0) || !(c.k > 0)) throw std::invalid_argument("slp: couplings must be positive");
  if (c.trials < 0) throw std::invalid_argument("slp: --trials must be >= 0");
  const minimal::MinimalModel model({c.h, c.k});
  const slp::SlpInstance inst(DensityOperator::pure(model.ground()), model.h_total(), 2, 2);
  const slp::SlpVerdict v = slp::slp_check(inst);
  const double gain = slp::brute_force_extraction_oracle(inst, c.trials, c.seed);
  const double pstar = slp::ground_population_threshold(model.h_total(), 2, 2);
  ResultTable t;
  t.columns = {"h", "k", "is_slp", "condition_min_eigenvalue", "hermiticity_defect",
               "oracle_gain", "p_star"};
  t.add_row({format_real(c.h), format_real(c.k), v.is_slp ? "true" : "false",
             format_real(v.condition_min_eigenvalue), format_real(v.hermiticity_defect),
             format_real(gain), format_real(pstar)});
  return t;
}

/** Dispatch. Returns the CSV table plus (for qft) a metrics JSON sidecar. */
inline QftOutputs run(const RunConfig& c) {
  QftOutputs out;
  if (c.subcommand == "minimal") out.table = run_minimal(c);
  else if (c.subcommand == "unitary") out.table = run_unitary(c);
  else if (c.subcommand == "hardware") out.table = run_hardware(c);
  else if (c.subcommand == "cooling") out.table = run_cooling(c);
  else if (c.subcommand == "qft") out = run_qft(c);
  else if (c.subcommand == "slp") out.table = run_slp(c);
  else throw std::invalid_argument("unknown subcommand '" + c.subcommand + "'");

  out.table.metadata.emplace_back("version", "0.1.0");
  out.table.metadata.emplace_back("seed", std::to_string(c.seed));
  if (!c.deterministic) {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out.table.metadata.emplace_back("timestamp", buf);
  }
  for (const std::string& line : config_echo_lines(c))
    out.table.metadata.emplace_back("config", line);
  return out;
}

}  // namespace qet::cli
