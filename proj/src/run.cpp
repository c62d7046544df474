#include "solwave/run.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

#include "solwave/io.hpp"
#include "solwave/probes.hpp"

namespace solwave {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context {
  const RunConfig& cfg;
  fs::path out;
  std::ostream& log;
  bool quiet;

  void say(const std::string& line) const {
    if (!quiet) log << line << '\n';
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void write_verdict(const Context& ctx, const std::string& probe, bool pass, const json& metrics) {
  io::write_json(ctx.out / (probe + ".json"), {{"probe", probe}, {"pass", pass}, {"metrics", metrics}});
  ctx.say(probe + ": " + (pass ? "PASS" : "FAIL"));
}

void dump_solution(const Context& ctx, const WaveSolution& sol, const std::string& stem) {
  io::write_field_csv(ctx.out / (stem + ".csv"), sol.u);
  io::write_spectrum_csv(ctx.out / (stem + "_spectrum.csv"), sol.u);
  json j = io::solution_json(sol);
  j["tail_mass"] = tail_mass(sol.u);
  io::write_json(ctx.out / (stem + ".json"), j);
}

int run_solve(const Context& ctx) {
  const WaveSolution sol = solve(ctx.cfg.solve_config());
  dump_solution(ctx, sol, "solution");
  ctx.say("mu=" + io::format_double(sol.mu) + " nu=" + io::format_double(sol.nu) +
          " residual=" + sci(sol.residual_l2) + " iterations=" + std::to_string(sol.iterations) +
          " (" + sol.message + ")");
  return sol.converged ? exit_pass : exit_failed;
}

int run_sweep(const Context& ctx) {
  const SolveConfig sc = ctx.cfg.solve_config();
  const SweepResult res = continuation_sweep(sc);
  bool ok = true;
  json all = json::array();
  for (std::size_t i = 0; i < res.solutions.size(); ++i) {
    dump_solution(ctx, res.solutions[i], "solution_" + std::to_string(i));
    all.push_back(io::record_json(res.records[i]));
    ok = ok && res.records[i].converged;
    ctx.say("mu=" + io::format_double(res.records[i].mu) + " nu=" + io::format_double(res.records[i].nu) +
            (res.records[i].converged ? "" : " NOT CONVERGED"));
  }
  io::write_sweep_csv(ctx.out / "sweep.csv", res.records);
  io::write_json(ctx.out / "sweep.json", all);
  return ok ? exit_pass : exit_failed;
}

int run_evolve(const Context& ctx) {
  const SolveConfig sc = ctx.cfg.solve_config();
  const WaveSolution sol = solve(sc);
  dump_solution(ctx, sol, "solution");
  if (!sol.converged) {
    ctx.say("initial solve did not converge: " + sol.message);
    return exit_failed;
  }
  EvolveConfig ec = ctx.cfg.evolve_config();
  const double m0 = sc.dispersive(0.0);
  ec.T = ctx.cfg.evolve.T.value_or(ctx.cfg.evolve.horizon_factor / (m0 - sol.nu));
  const Trajectory traj =
      evolve_within(sol.u, ec, {ctx.cfg.evolve.mass_tolerance, ctx.cfg.evolve.energy_tolerance},
                    ctx.cfg.evolve.max_halvings);

  Spectrum c = traj.final_state().spectrum();
  spectral::translate(c, sol.u.grid(), -sol.nu * traj.field_times.back());
  const Field back = Field::from_spectrum(sol.u.grid_ptr(), c);
  const Field diff = back - sol.u;
  const double frame = std::sqrt(inner(diff, diff) / inner(sol.u, sol.u));

  json manifest;
  json times = json::array(), qs = json::array(), es = json::array(), files = json::array();
  for (const auto& s : traj.series) {
    times.push_back(s.time);
    qs.push_back(s.mass);
    es.push_back(s.energy);
  }
  for (std::size_t i = 0; i < traj.fields.size(); ++i) {
    const std::string name = "snapshot_" + std::to_string(i) + ".csv";
    io::write_field_csv(ctx.out / name, traj.fields[i]);
    files.push_back({{"time", traj.field_times[i]}, {"file", name}});
  }
  const bool pass = !traj.blew_up && frame <= ctx.cfg.evolve.frame_tolerance &&
                    traj.mass_drift() <= ctx.cfg.evolve.mass_tolerance &&
                    traj.energy_drift() <= ctx.cfg.evolve.energy_tolerance;
  manifest["times"] = times;
  manifest["Q_series"] = qs;
  manifest["E_series"] = es;
  manifest["snapshots"] = files;
  manifest["config"] = {{"dt", traj.dt}, {"T", ec.T}, {"steps", traj.steps}, {"halvings", traj.halvings},
                        {"record_every", ec.record_every}, {"nu", sol.nu}};
  manifest["traveling_frame_error"] = frame;
  manifest["mass_drift"] = traj.mass_drift();
  manifest["energy_drift"] = traj.energy_drift();
  manifest["blew_up"] = traj.blew_up;
  manifest["message"] = traj.message;
  manifest["pass"] = pass;
  io::write_json(ctx.out / "trajectory.json", manifest);
  ctx.say("T=" + io::format_double(ec.T) + " dt=" + sci(traj.dt) + " frame_error=" + sci(frame) +
          " Q_drift=" + sci(traj.mass_drift()) + " E_drift=" + sci(traj.energy_drift()));
  return pass ? exit_pass : exit_failed;
}

int probe_nonlinear_bound_cmd(const Context& ctx) {
  const auto& p = ctx.cfg.probe;
  NonlinearBoundOptions base;
  base.points = p.points;
  base.band_limit = p.band_limit;
  NonlinearBoundOptions doubled = base;
  doubled.points = 2 * p.points;
  doubled.band_limit = 2 * p.band_limit;
  const double s = ctx.cfg.problem.s, r = ctx.cfg.problem.r;
  const auto a = probe_nonlinear_bound(s, r, p.ensemble, ctx.cfg.seed, base);
  const auto b = probe_nonlinear_bound(s, r, p.ensemble, ctx.cfg.seed, doubled);
  std::vector<std::vector<double>> rows;
  for (const auto* st : {&a, &b}) {
    rows.push_back({static_cast<double>(st == &a ? base.band_limit : doubled.band_limit), st->gamma,
                    st->min_ratio, st->median_ratio, st->max_ratio,
                    static_cast<double>(st->samples), static_cast<double>(st->skipped)});
  }
  io::write_table_csv(ctx.out / "nonlinear_bound.csv",
                      {"band_limit", "gamma", "min_ratio", "median_ratio", "max_ratio", "samples", "skipped"},
                      rows);
  const bool pass = std::isfinite(a.max_ratio) && std::isfinite(b.max_ratio) && a.samples > 0 &&
                    b.max_ratio < 2.0 * a.max_ratio;
  write_verdict(ctx, "nonlinear_bound", pass,
                {{"gamma", a.gamma}, {"max_ratio", a.max_ratio}, {"median_ratio", a.median_ratio},
                 {"max_ratio_doubled_band", b.max_ratio}, {"median_ratio_doubled_band", b.median_ratio}});
  return pass ? exit_pass : exit_failed;
}

int probe_gamma_cmd(const Context& ctx) {
  const auto& p = ctx.cfg.probe;
  const SolveConfig sc = ctx.cfg.solve_config();
  std::vector<double> mus = p.mu_values.empty() ? std::vector<double>{ctx.cfg.mu} : p.mu_values;
  std::vector<double> thetas = p.thetas;
  if (thetas.empty() && p.c3_values.empty()) {
    for (int i = 0; i < 60; ++i) thetas.push_back(std::pow(10.0, -3.0 + 3.0 * i / 60.0) * 0.99);
  }
  std::vector<GammaEstimate> est;
  std::vector<std::vector<double>> rows;
  bool below = true;
  for (double mu : mus) {
    est.push_back(p.c3_values.empty()
                      ? probe_gamma_upper(mu, thetas, sc.dispersive, sc.nonlinear, sc.grid)
                      : probe_gamma_upper_scaled(mu, p.c3_values, sc.dispersive, sc.nonlinear, sc.grid));
    below = below && est.back().below_mu;
  }
  const InfimumGap gap = infimum_gap(est, sc.dispersive(0.0));
  for (std::size_t i = 0; i < est.size(); ++i) {
    rows.push_back({est[i].mu, est[i].gamma_upper, est[i].best_theta, gap.ratio[i]});
  }
  io::write_table_csv(ctx.out / "gamma_upper.csv", {"mu", "gamma_upper", "best_theta", "gap_ratio"}, rows);
  io::write_columns(ctx.out / "gamma_gap.dat", "mu", "gap_ratio", gap.mu, gap.ratio);
  const bool pass = below && gap.positive;
  write_verdict(ctx, "gamma_upper", pass,
                {{"all_below_mu", below}, {"kappa_min", gap.kappa_min}, {"kappa_max", gap.kappa_max}});
  return pass ? exit_pass : exit_failed;
}

int probe_subadditivity_cmd(const Context& ctx) {
  const auto& p = ctx.cfg.probe;
  std::vector<double> splits = p.splits;
  if (splits.empty()) splits = {0.25 * ctx.cfg.mu, 0.5 * ctx.cfg.mu, 0.75 * ctx.cfg.mu};
  const auto res = probe_subadditivity(ctx.cfg.mu, splits, ctx.cfg.solve_config());
  std::vector<std::vector<double>> rows;
  bool pass = true;
  json margins = json::array();
  for (const auto& s : res) {
    rows.push_back({s.lambda, s.gamma_mu, s.gamma_lambda, s.gamma_rest, s.margin, s.conclusive ? 1.0 : 0.0});
    pass = pass && s.conclusive && s.margin < -p.margin;
    margins.push_back(s.margin);
  }
  io::write_table_csv(ctx.out / "subadditivity.csv",
                      {"lambda", "gamma_mu", "gamma_lambda", "gamma_rest", "margin", "conclusive"}, rows);
  write_verdict(ctx, "subadditivity", pass, {{"mu", ctx.cfg.mu}, {"margins", margins}, {"required", p.margin}});
  return pass ? exit_pass : exit_failed;
}

int probe_commutator_cmd(const Context& ctx) {
  const auto& p = ctx.cfg.probe;
  const GridPtr grid = make_grid(ctx.cfg.length, ctx.cfg.points);
  const double wu = p.width, wv = p.v_width;
  const Field u = Field::from_function(grid, [wu](double x) { return 1.0 / std::cosh(x / wu); });
  const Field v = Field::from_function(grid, [wv](double x) { return 1.0 / std::cosh(x / wv); });
  std::vector<double> radii = p.radii.empty() ? std::vector<double>{5, 10, 20, 40} : p.radii;
  const double r = ctx.cfg.problem.r;
  const auto rows = probe_commutator_decay(u, v, r, radii, p.constant_cutoff ? Cutoff::constant : Cutoff::gaussian);
  std::vector<double> rs, is;
  for (const auto& row : rows) {
    rs.push_back(row.radius);
    is.push_back(row.value);
  }
  std::vector<std::vector<double>> table;
  for (const auto& row : rows) table.push_back({row.radius, row.value});
  io::write_table_csv(ctx.out / "commutator.csv", {"R", "I"}, table);
  io::write_columns(ctx.out / "commutator.dat", "R", "I", rs, is);
  bool pass;
  const bool expect_zero = r == 0.0 || p.constant_cutoff;
  if (expect_zero) {
    pass = std::all_of(is.begin(), is.end(), [](double v) { return v == 0.0; });
  } else {
    pass = is.size() >= 2 && is.back() < is.front() / 10.0;
    for (std::size_t i = 1; i < is.size(); ++i) pass = pass && is[i] < is[i - 1];
  }
  write_verdict(ctx, "commutator", pass, {{"r", r}, {"R", rs}, {"I", is}, {"expect_zero", expect_zero}});
  return pass ? exit_pass : exit_failed;
}

int probe_scaling_cmd(const Context& ctx) {
  const auto& p = ctx.cfg.probe;
  SolveConfig sc = ctx.cfg.solve_config();
  sc.continuation = !p.mu_values.empty() ? p.mu_values : ctx.cfg.continuation;
  if (sc.continuation.empty()) {
    for (int i = 0; i < 8; ++i) sc.continuation.push_back(0.05 * std::pow(10.0, i / 7.0));
  }
  const SweepResult res = continuation_sweep(sc);
  io::write_sweep_csv(ctx.out / "sweep.csv", res.records);
  std::map<std::string, FitResult> fits;
  try {
    fits = probe_scaling_laws(res.records);
  } catch (const std::invalid_argument& e) {
    ctx.say(std::string("scaling: ") + e.what());
    write_verdict(ctx, "scaling", false, {{"error", e.what()}});
    return exit_failed;
  }
  struct Expect {
    const char* key;
    double slope;
    double tol;
  };
  const Expect expects[] = {{"speed_gap", 2.0, 0.1}, {"h_half_s_norm", 0.5, 0.05}, {"nonlinearity", 3.0, 0.1}};
  bool pass = true;
  json metrics;
  for (const auto& [key, fit] : fits) {
    metrics[key] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared},
                    {"window", {fit.x_min, fit.x_max}}, {"count", fit.count}};
  }
  for (const auto& e : expects) {
    const auto& fit = fits.at(e.key);
    const bool ok = std::abs(fit.slope - e.slope) <= e.tol && fit.r_squared >= 0.995;
    metrics[e.key]["expected"] = e.slope;
    metrics[e.key]["pass"] = ok;
    pass = pass && ok;
  }
  std::vector<double> mu;
  std::map<std::string, std::vector<double>> cols;
  for (const auto& r : res.records) {
    if (!admitted(r)) continue;
    mu.push_back(r.mu);
    cols["speed_gap"].push_back(r.speed_gap);
    cols["h_half_s_norm"].push_back(r.h_half_s_norm);
    cols["nonlinearity"].push_back(r.nonlinearity);
    cols["sup_norm"].push_back(r.sup_norm);
  }
  json manifest = json::array();
  for (const auto& [name, ys] : cols) {
    io::write_columns(ctx.out / ("scaling_" + name + ".dat"), "mu", name, mu, ys);
    manifest.push_back({{"file", "scaling_" + name + ".dat"}, {"x", "mu"}, {"y", name}, {"scale", "loglog"}});
  }
  io::write_json(ctx.out / "plots.json", manifest);
  write_verdict(ctx, "scaling", pass, metrics);
  return pass ? exit_pass : exit_failed;
}

int probe_smoothness_cmd(const Context& ctx) {
  const WaveSolution sol = solve(ctx.cfg.solve_config());
  dump_solution(ctx, sol, "solution");
  const SmoothnessReport rep = probe_smoothness(sol.u);
  const bool pass = sol.converged && rep.admitted;
  write_verdict(ctx, "smoothness", pass,
                {{"converged", sol.converged}, {"peak", rep.peak}, {"top_band_ratio", rep.top_band_ratio},
                 {"decay_rate", rep.decay_rate}, {"r_squared", rep.r_squared},
                 {"window", {rep.window_lo, rep.window_hi}}});
  return pass ? exit_pass : exit_failed;
}

int run_probe(const Context& ctx) {
  const std::string& name = ctx.cfg.probe.name;
  if (name == "nonlinear_bound") return probe_nonlinear_bound_cmd(ctx);
  if (name == "gamma_upper") return probe_gamma_cmd(ctx);
  if (name == "subadditivity") return probe_subadditivity_cmd(ctx);
  if (name == "commutator") return probe_commutator_cmd(ctx);
  if (name == "scaling") return probe_scaling_cmd(ctx);
  if (name == "smoothness") return probe_smoothness_cmd(ctx);
  throw ConfigError("probe.name", 0, "unknown probe " + name);
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log, bool quiet) {
  const Context ctx{cfg, fs::path(cfg.output_dir), log, quiet};
  fs::create_directories(ctx.out);
  io::write_text(ctx.out / "config_echo.yaml", echo_config(cfg));
  switch (cfg.command) {
    case Command::solve: return run_solve(ctx);
    case Command::sweep: return run_sweep(ctx);
    case Command::evolve: return run_evolve(ctx);
    case Command::probe: return run_probe(ctx);
  }
  return exit_usage;
}

}  // namespace solwave
