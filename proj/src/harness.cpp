// Copyright 2026 The dpmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpmech/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "dpmech/central_solver.hpp"
#include "dpmech/errors.hpp"
#include "dpmech/estimators.hpp"
#include "dpmech/local_solver.hpp"
#include "dpmech/oracle.hpp"
#include "dpmech/payments.hpp"
#include "dpmech/rng.hpp"

namespace dpmech {
namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << text;
}

SensitivityDistribution prior_from_json(const json& j) {
  if (!j.contains("kind")) throw ParseError("prior needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "uniform")
      return SensitivityDistribution::uniform(j.at("a").get<double>(),
                                              j.at("b").get<double>());
    if (kind == "exponential")
      return SensitivityDistribution::exponential(
          j.at("rate").get<double>(), j.at("truncate").get<double>());
    if (kind == "truncated_normal")
      return SensitivityDistribution::truncated_normal(
          j.at("mean").get<double>(), j.at("sd").get<double>(),
          j.at("lo").get<double>(), j.at("hi").get<double>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("prior fields: ") + e.what());
  }
  throw ParseError("unknown prior kind: " + kind);
}

ProblemInput problem_from_json(const json& j) {
  ProblemInput in;
  try {
    in.profile.n = j.at("n").get<int>();
    in.profile.var = j.at("var").get<double>();
    in.profile.c = j.at("sensitivities").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("problem fields: ") + e.what());
  }
  if (j.contains("priors")) {
    for (const json& p : j.at("priors"))
      in.priors.dists.push_back(prior_from_json(p));
  } else if (j.contains("prior")) {
    in.priors = Priors::homogeneous(prior_from_json(j.at("prior")));
  } else {
    throw ParseError("input needs 'prior' or 'priors'");
  }
  in.profile.validate();
  return in;
}

SolverConfig solver_config(const RunConfig& rc) {
  SolverConfig cfg;
  cfg.ptas_eps = rc.ptas_eps;
  cfg.seed = rc.seed;
  cfg.parallel = rc.parallel;
  if (rc.grid > 0) cfg.payment_grid = rc.grid;
  if (rc.mc > 0) cfg.mc_samples = static_cast<int>(rc.mc);
  return cfg;
}

std::string out_path(const RunConfig& rc, const std::string& name) {
  std::filesystem::create_directories(rc.out_dir);
  return (std::filesystem::path(rc.out_dir) / name).string();
}

json input_echo(const json& j) {
  json echo;
  for (const char* key : {"n", "var", "sensitivities", "prior", "priors"})
    if (j.contains(key)) echo[key] = j.at(key);
  return echo;
}

int run_solve(const RunConfig& rc, bool central) {
  const json in_json = read_json_file(rc.input_path);
  const ProblemInput in = problem_from_json(in_json);
  const SolverConfig cfg = solver_config(rc);
  const VirtualProfile vp = make_virtual_profile(in.profile, in.priors, cfg);

  json out = input_echo(in_json);
  std::vector<double> psi_user(in.profile.n);
  for (int k = 0; k < in.profile.n; ++k) psi_user[vp.perm[k]] = vp.psi[k];
  out["psi"] = psi_user;
  out["seed"] = rc.seed;
  if (central) {
    const CentralSolution s = solve_central_virtual(vp, in.profile.var, cfg);
    out["mode"] = "solve-central";
    out["y"] = s.y;
    out["lambda"] = s.lambda_star;
    out["active_count"] = s.active_count;
    out["objective"] = s.objective;
    out["estimator"] = {{"weights", s.weights}, {"eta", s.eta}};
  } else {
    const LocalSolution s =
        solve_local_virtual(vp, in.profile.var, rc.ptas_eps, cfg);
    out["mode"] = "solve-local";
    out["y"] = s.y;
    out["lambda"] = s.lambda;
    out["active_count"] = s.active_count;
    out["objective"] = s.objective;
    out["ptas_eps"] = s.ptas_eps;
    out["estimator"] = {{"weights", optimal_local_weights(s.y, in.profile.var)},
                        {"epsilons", s.y}};
  }
  write_text(out_path(rc, "allocation.json"), out.dump(2) + "\n");
  return 0;
}

int run_oracle(const RunConfig& rc, bool central) {
  const json in_json = read_json_file(rc.input_path);
  const ProblemInput in = problem_from_json(in_json);
  const SolverConfig scfg = solver_config(rc);
  const VirtualProfile vp = make_virtual_profile(in.profile, in.priors, scfg);

  OracleConfig cfg;
  cfg.parallel = rc.parallel;
  if (rc.grid > 0) cfg.grid_points_per_dim = rc.grid;
  const OracleResult res =
      central ? brute_force_central(vp.psi, in.profile.var, in.profile.n, cfg)
              : brute_force_local(vp.psi, in.profile.var, in.profile.n, cfg);
  std::vector<double> y_user(in.profile.n);
  for (int k = 0; k < in.profile.n; ++k) y_user[vp.perm[k]] = res.y[k];

  json out = input_echo(in_json);
  out["mode"] = central ? "oracle-central" : "oracle-local";
  out["y"] = y_user;
  out["objective"] = res.objective;
  write_text(out_path(rc, "allocation.json"), out.dump(2) + "\n");
  return 0;
}

int run_payments(const RunConfig& rc) {
  const json in_json = read_json_file(rc.input_path);
  const ProblemInput in = problem_from_json(in_json);
  const SolverConfig cfg = solver_config(rc);
  const MechanismKind kind =
      in_json.value("mechanism", std::string("central")) == "local"
          ? MechanismKind::kLocal
          : MechanismKind::kCentral;

  std::ostringstream csv;
  csv << "user,type,eps_bar,interim_mse,info_rent,payment\n";
  char buf[256];
  for (int user = 0; user < in.profile.n; ++user) {
    const InterimCurve curve =
        interim_curve(kind, user, in.priors, in.profile.n, in.profile.var,
                      cfg.payment_grid, cfg.mc_samples, rc.seed, cfg);
    for (std::size_t k = 0; k < curve.grid.size(); ++k) {
      const PaymentComponents pc =
          payment(curve, curve.grid[k], in.profile.var);
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    user, curve.grid[k], curve.eps_bar[k], pc.interim_mse,
                    pc.info_rent, pc.t);
      csv << buf;
    }
  }
  write_text(out_path(rc, "payments.csv"), csv.str());
  return 0;
}

int run_audit_ic(const RunConfig& rc) {
  const json in_json = read_json_file(rc.input_path);
  const ProblemInput in = problem_from_json(in_json);
  const SolverConfig cfg = solver_config(rc);
  const MechanismKind kind =
      in_json.value("mechanism", std::string("central")) == "local"
          ? MechanismKind::kLocal
          : MechanismKind::kCentral;
  const int grid = rc.grid > 0 ? rc.grid : 21;
  const IcIrReport rep =
      audit_ic_ir(kind, in.priors, in.profile.n, in.profile.var, grid,
                  cfg.mc_samples, rc.seed, cfg);
  json out = {{"mode", "audit-ic"},
              {"max_ic_violation", rep.max_ic_violation},
              {"max_ir_violation", rep.max_ir_violation},
              {"mc_se_scale", rep.mc_se_scale},
              {"objective_scale", rep.objective_scale}};
  write_text(out_path(rc, "audit_ic.json"), out.dump(2) + "\n");
  return 0;
}

int run_audit_dp(const RunConfig& rc) {
  const json in_json = read_json_file(rc.input_path);
  const long trials = rc.mc > 0 ? rc.mc : 1000000;
  json rows = json::array();
  if (!in_json.contains("estimator"))
    throw ParseError("audit-dp input needs an 'estimator' record");
  const json est = in_json.at("estimator");
  if (est.contains("eta")) {
    CentralEstimator ce;
    ce.weights = est.at("weights").get<std::vector<double>>();
    ce.eta = est.at("eta").get<double>();
    const std::vector<double> losses = privacy_losses_central(ce);
    for (std::size_t u = 0; u < ce.weights.size(); ++u) {
      const AuditReport rep = empirical_privacy_audit(
          ce, static_cast<int>(u), losses[u], trials, rc.seed + u);
      rows.push_back({{"user", u},
                      {"claimed_eps", rep.claimed_eps},
                      {"audit", rep.max_log_ratio},
                      {"slack", rep.slack},
                      {"ok", rep.within_claim()}});
    }
  } else {
    const std::vector<double> eps =
        est.at("epsilons").get<std::vector<double>>();
    for (std::size_t u = 0; u < eps.size(); ++u) {
      const AuditReport rep =
          empirical_privacy_audit_local(eps[u], eps[u], trials, rc.seed + u);
      rows.push_back({{"user", u},
                      {"claimed_eps", rep.claimed_eps},
                      {"audit", rep.max_log_ratio},
                      {"slack", rep.slack},
                      {"ok", rep.within_claim()}});
    }
  }
  json out = {{"mode", "audit-dp"}, {"trials", trials}, {"users", rows}};
  write_text(out_path(rc, "audit_dp.json"), out.dump(2) + "\n");
  return 0;
}

int run_surface(const RunConfig& rc) {
  SensitivityDistribution prior = SensitivityDistribution::uniform(1.0, 2.0);
  double var = 0.25;
  if (!rc.input_path.empty()) {
    const json in_json = read_json_file(rc.input_path);
    if (in_json.contains("prior")) prior = prior_from_json(in_json.at("prior"));
    var = in_json.value("var", 0.25);
  }
  SolverConfig cfg = solver_config(rc);
  cfg.max_lambda_grid = 512;  // cells are tiny 2-user problems
  const int grid = rc.grid > 0 ? rc.grid : 101;
  const std::vector<SurfaceCell> cells = compute_surface(prior, var, grid, cfg);

  std::ostringstream csv;
  csv << "c1,c2,metric,value\n";
  char buf[160];
  const char* names[6] = {"central_mse",       "local_mse",
                          "central_objective", "local_objective",
                          "eps1_central",      "eps1_local"};
  for (const SurfaceCell& cell : cells) {
    const double vals[6] = {cell.central_mse,       cell.local_mse,
                            cell.central_objective, cell.local_objective,
                            cell.eps1_central,      cell.eps1_local};
    for (int m = 0; m < 6; ++m) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g\n", cell.c1,
                    cell.c2, names[m], vals[m]);
      csv << buf;
    }
  }
  write_text(out_path(rc, "surface.csv"), csv.str());
  return 0;
}

int run_threshold_sweep(const RunConfig& rc) {
  const json in_json = read_json_file(rc.input_path);
  int n;
  double psi1, var;
  try {
    n = in_json.at("n").get<int>();
    psi1 = in_json.at("psi1").get<double>();
    var = in_json.at("var").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("threshold-sweep fields: ") + e.what());
  }
  std::vector<double> psis;
  const json& grid_spec = in_json.at("psi_n");
  if (grid_spec.is_array()) {
    psis = grid_spec.get<std::vector<double>>();
  } else {
    const double lo = grid_spec.at("min").get<double>();
    const double hi = grid_spec.at("max").get<double>();
    const int count = grid_spec.at("count").get<int>();
    const bool logscale = grid_spec.value("log", false);
    for (int k = 0; k < count; ++k) {
      const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
      psis.push_back(logscale ? lo * std::pow(hi / lo, t)
                              : lo + (hi - lo) * t);
    }
  }
  const ThresholdSweep sweep =
      threshold_sweep(n, psi1, var, psis, solver_config(rc));

  std::ostringstream csv;
  csv << "psi_n,central_yn,local_yn,central_zero,local_zero\n";
  char buf[160];
  for (const ThresholdRow& row : sweep.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%d\n", row.psi_n,
                  row.central_yn, row.local_yn, row.central_zero ? 1 : 0,
                  row.local_zero ? 1 : 0);
    csv << buf;
  }
  write_text(out_path(rc, "sweep.csv"), csv.str());

  json out = {{"mode", "threshold-sweep"},
              {"eq52_bound", sweep.eq52_bound},
              {"central_zero_threshold", sweep.central_zero_threshold},
              {"local_zero_threshold", sweep.local_zero_threshold},
              {"central_positive_below_bound",
               sweep.central_positive_below_bound}};
  write_text(out_path(rc, "sweep_summary.json"), out.dump(2) + "\n");
  return 0;
}

int run_bench(const RunConfig& rc) {
  using clock = std::chrono::steady_clock;
  json entries = json::array();
  double t_serial[2] = {0, 0};
  const long sizes[2] = {100000, 1000000};
  for (int s = 0; s < 2; ++s) {
    const long n = sizes[s];
    std::vector<double> psi(n);
    SplitMix64 rng(derive_seed(rc.seed, 0xbe7c, n));
    for (long i = 0; i < n; ++i) psi[i] = rng.next_uniform(0.5, 5.0);

    SolverConfig cfg;
    cfg.parallel = false;
    auto t0 = clock::now();
    const CentralSolution serial = solve_central_psi(psi, 0.25, cfg);
    auto t1 = clock::now();
    cfg.parallel = true;
    const CentralSolution parallel = solve_central_psi(psi, 0.25, cfg);
    auto t2 = clock::now();

    t_serial[s] = std::chrono::duration<double>(t1 - t0).count();
    const double t_par = std::chrono::duration<double>(t2 - t1).count();
    entries.push_back({{"n", n},
                       {"seconds_serial", t_serial[s]},
                       {"seconds_parallel", t_par},
                       {"objective", serial.objective},
                       {"parallel_matches_serial",
                        serial.objective == parallel.objective &&
                            serial.y == parallel.y}});
  }
  json out = {{"mode", "bench"},
              {"entries", entries},
              {"serial_ratio_1e6_over_1e5", t_serial[1] / t_serial[0]}};
  write_text(out_path(rc, "bench.json"), out.dump(2) + "\n");
  return 0;
}

}  // namespace

ProblemInput parse_problem(const std::string& path) {
  return problem_from_json(read_json_file(path));
}

std::vector<SurfaceCell> compute_surface(const SensitivityDistribution& prior,
                                         double var, int grid,
                                         const SolverConfig& cfg) {
  const double lo = prior.support_lo(), hi = prior.support_hi();
  const long total = static_cast<long>(grid) * grid;
  std::vector<SurfaceCell> cells(total);
#pragma omp parallel for schedule(dynamic, 16) if (cfg.parallel)
  for (long idx = 0; idx < total; ++idx) {
    const int r = static_cast<int>(idx / grid), q = static_cast<int>(idx % grid);
    SurfaceCell cell;
    cell.c1 = lo + (hi - lo) * static_cast<double>(r) / (grid - 1);
    cell.c2 = lo + (hi - lo) * static_cast<double>(q) / (grid - 1);
    const double psi[2] = {virtual_cost(prior, cell.c1),
                           virtual_cost(prior, cell.c2)};
    SolverConfig serial_cfg = cfg;
    serial_cfg.parallel = false;  // cells themselves run in parallel

    const CentralSolution cs = solve_central_psi(psi, var, serial_cfg);
    double w2 = 0.0;
    for (double w : cs.weights) w2 += w * w;
    cell.central_mse = 2.0 / (cs.eta * cs.eta) + var * w2;
    cell.central_objective = cs.objective;
    cell.eps1_central = cs.y[0];
    cell.max_weight_central = std::max(cs.weights[0], cs.weights[1]);

    const LocalSolution ls =
        solve_local_psi(psi, var, serial_cfg.ptas_eps, serial_cfg);
    const std::vector<double> w = optimal_local_weights(ls.y, var);
    double mse = 0.0;
    for (int j = 0; j < 2; ++j)
      if (w[j] > 0.0)
        mse += w[j] * w[j] * (var + 2.0 / (ls.y[j] * ls.y[j]));
    cell.local_mse = mse;
    cell.local_objective = ls.objective;
    cell.eps1_local = ls.y[0];
    cell.max_weight_local = std::max(w[0], w[1]);
    cells[idx] = cell;
  }
  return cells;
}

ThresholdSweep threshold_sweep(int n, double psi1, double var,
                               const std::vector<double>& psi_n_grid,
                               const SolverConfig& cfg) {
  if (n < 2) throw ParseError("threshold_sweep needs n >= 2");
  ThresholdSweep sweep;
  // Corner KKT threshold: y_n = 0 optimal requires psi_n >= this. At var = 1
  // it is psi_1 + cbrt(2 psi_1 (n+1)^2)/(n-1); general var multiplies the
  // gap by var (substitution y -> y sqrt(var), psi -> psi var^{3/2}).
  sweep.eq52_bound =
      psi1 + var * std::cbrt(2.0 * psi1 * (n + 1) * (n + 1)) / (n - 1);
  const double inf = std::numeric_limits<double>::infinity();
  sweep.central_zero_threshold = inf;
  sweep.local_zero_threshold = inf;

  std::vector<double> psi(n, psi1);
  for (double pn : psi_n_grid) {
    psi[n - 1] = pn;
    ThresholdRow row;
    row.psi_n = pn;
    const CentralSolution cs = solve_central_psi(psi, var, cfg);
    const LocalSolution ls = solve_local_psi(psi, var, cfg.ptas_eps, cfg);
    row.central_yn = cs.y[n - 1];
    row.local_yn = ls.y[n - 1];
    row.central_zero = cs.y[n - 1] == 0.0;
    row.local_zero = ls.y[n - 1] == 0.0;
    if (row.central_zero)
      sweep.central_zero_threshold =
          std::min(sweep.central_zero_threshold, pn);
    if (row.local_zero)
      sweep.local_zero_threshold = std::min(sweep.local_zero_threshold, pn);
    if (pn < sweep.eq52_bound && row.central_zero)
      sweep.central_positive_below_bound = false;
    sweep.rows.push_back(row);
  }
  return sweep;
}

int run(const RunConfig& rc) {
  try {
    if (rc.mode == "solve-central") return run_solve(rc, true);
    if (rc.mode == "solve-local") return run_solve(rc, false);
    if (rc.mode == "oracle-central") return run_oracle(rc, true);
    if (rc.mode == "oracle-local") return run_oracle(rc, false);
    if (rc.mode == "payments") return run_payments(rc);
    if (rc.mode == "audit-ic") return run_audit_ic(rc);
    if (rc.mode == "audit-dp") return run_audit_dp(rc);
    if (rc.mode == "surface") return run_surface(rc);
    if (rc.mode == "threshold-sweep") return run_threshold_sweep(rc);
    if (rc.mode == "bench") return run_bench(rc);
    throw ParseError("unknown mode: " + rc.mode);
  } catch (const Error& e) {
    const json rec = {{"error", e.what()},
                      {"code", static_cast<int>(e.code())},
                      {"mode", rc.mode}};
    std::cerr << rec.dump() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    const json rec = {{"error", e.what()}, {"code", 4}, {"mode", rc.mode}};
    std::cerr << rec.dump() << "\n";
    return 4;
  }
}

}  // namespace dpmech
