#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "solwave/config.hpp"
#include "solwave/evolution.hpp"
#include "solwave/functionals.hpp"
#include "solwave/probes.hpp"
#include "solwave/run.hpp"
#include "solwave/solver.hpp"
#include "solwave/spectral.hpp"

namespace py = pybind11;
using namespace solwave;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field to_field(const Array& u, double length) {
  if (u.ndim() != 1) throw std::invalid_argument("expected a 1-d array of samples");
  const auto grid = make_grid(length, static_cast<int>(u.shape(0)));
  return Field(grid, std::vector<double>(u.data(), u.data() + u.shape(0)));
}

Array to_array(std::span<const double> v) {
  return Array(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())}, v.data());
}

py::dict values_dict(const FunctionalValues& v) {
  py::dict d;
  d["Q"] = v.mass;
  d["L"] = v.dispersion;
  d["N"] = v.nonlinearity;
  d["E"] = v.energy;
  return d;
}

py::dict solution_dict(const WaveSolution& sol) {
  py::dict d;
  d["x"] = to_array(sol.u.grid().nodes());
  d["u"] = to_array(sol.u.values());
  d["L"] = sol.u.grid().length();
  d["N"] = sol.u.grid().points();
  d["mu"] = sol.mu;
  d["nu"] = sol.nu;
  d["residual_l2"] = sol.residual_l2;
  d["iterations"] = sol.iterations;
  d["method"] = to_string(sol.method);
  d["converged"] = sol.converged;
  d["subcritical"] = sol.subcritical;
  d["values"] = values_dict(sol.values);
  d["message"] = sol.message;
  return d;
}

py::dict record_dict(const SweepRecord& r) {
  py::dict d;
  d["mu"] = r.mu;
  d["nu"] = r.nu;
  d["speed_gap"] = r.speed_gap;
  d["h_half_s_norm"] = r.h_half_s_norm;
  d["sup_norm"] = r.sup_norm;
  d["nonlinearity"] = r.nonlinearity;
  d["energy"] = r.energy;
  d["residual_l2"] = r.residual_l2;
  d["tail_mass"] = r.tail_mass;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  return d;
}

SolveConfig solve_config(double s, double r, double mu, double length, int points, const std::string& method,
                         std::optional<double> nu, double tol_residual, bool auto_enlarge) {
  SolveConfig cfg;
  cfg.mu = mu;
  cfg.dispersive = Symbol::bessel(s);
  cfg.nonlinear = Symbol::bessel(r);
  cfg.grid = make_grid(length, points);
  cfg.method = parse_method(method);
  cfg.speed = nu;
  cfg.tol_residual = tol_residual;
  cfg.auto_enlarge = auto_enlarge;
  return cfg;
}

EvolveConfig evolve_config(double s, double r, double T, double dt, int record_every) {
  EvolveConfig cfg;
  cfg.dispersive = Symbol::bessel(s);
  cfg.nonlinear = Symbol::bessel(r);
  cfg.T = T;
  cfg.dt = dt;
  cfg.record_every = record_every;
  return cfg;
}

constexpr double kPi = 3.141592653589793;

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pseudo-spectral solitary waves of u_t + (Lambda^s u - u Lambda^r u^2)_x = 0";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "solve",
      [](double s, double r, double mu, double L, int N, const std::string& method, std::optional<double> nu,
         double tol_residual, bool auto_enlarge) {
        const SolveConfig cfg = solve_config(s, r, mu, L, N, method, nu, tol_residual, auto_enlarge);
        py::gil_scoped_release release;
        WaveSolution sol = solve(cfg);
        py::gil_scoped_acquire acquire;
        return solution_dict(sol);
      },
      py::arg("s") = 2.0, py::arg("r") = 0.0, py::arg("mu") = 0.4, py::arg("L") = 200 * kPi, py::arg("N") = 4096,
      py::arg("method") = "descent", py::arg("nu") = py::none(), py::arg("tol_residual") = 1e-10,
      py::arg("auto_enlarge") = true, "Solitary wave of mass mu (or speed nu for petviashvili).");

  m.def(
      "sweep",
      [](const std::vector<double>& mus, double s, double r, double L, int N) {
        SolveConfig cfg = solve_config(s, r, mus.empty() ? 1.0 : mus.front(), L, N, "descent", std::nullopt, 1e-10, true);
        cfg.continuation = mus;
        SweepResult res;
        {
          py::gil_scoped_release release;
          res = continuation_sweep(cfg);
        }
        py::list out;
        for (const auto& rec : res.records) out.append(record_dict(rec));
        return out;
      },
      py::arg("mus"), py::arg("s") = 2.0, py::arg("r") = 0.0, py::arg("L") = 200 * kPi, py::arg("N") = 4096,
      "Warm-started continuation in mu; one record per value.");

  m.def(
      "functionals",
      [](const Array& u, double L, double s, double r) {
        return values_dict(energy(to_field(u, L), Symbol::bessel(s), Symbol::bessel(r)));
      },
      py::arg("u"), py::arg("L"), py::arg("s") = 2.0, py::arg("r") = 0.0, "Q, L, N~ and E~ of samples on [-L/2, L/2).");

  m.def(
      "residual",
      [](const Array& u, double L, double nu, double s, double r) {
        const Field res = el_residual(to_field(u, L), nu, Symbol::bessel(s), Symbol::bessel(r));
        return to_array(res.values());
      },
      py::arg("u"), py::arg("L"), py::arg("nu"), py::arg("s") = 2.0, py::arg("r") = 0.0);

  m.def(
      "wave_speed",
      [](const Array& u, double L, double s, double r) {
        return wave_speed_rayleigh(to_field(u, L), Symbol::bessel(s), Symbol::bessel(r));
      },
      py::arg("u"), py::arg("L"), py::arg("s") = 2.0, py::arg("r") = 0.0);

  m.def(
      "evolve",
      [](const Array& u, double L, double T, double dt, double s, double r, int record_every) {
        const Field u0 = to_field(u, L);
        const EvolveConfig cfg = evolve_config(s, r, T, dt, record_every);
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = evolve(u0, cfg);
        }
        std::vector<double> t, q, e;
        for (const auto& snap : tr.series) {
          t.push_back(snap.time);
          q.push_back(snap.mass);
          e.push_back(snap.energy);
        }
        py::dict d;
        d["times"] = to_array(t);
        d["mass"] = to_array(q);
        d["energy"] = to_array(e);
        d["final"] = to_array(tr.final_state().values());
        d["dt"] = tr.dt;
        d["steps"] = tr.steps;
        d["blew_up"] = tr.blew_up;
        d["mass_drift"] = tr.mass_drift();
        d["energy_drift"] = tr.energy_drift();
        return d;
      },
      py::arg("u"), py::arg("L"), py::arg("T"), py::arg("dt") = 0.0, py::arg("s") = 2.0, py::arg("r") = 0.0,
      py::arg("record_every") = 100, "ETDRK4 integration to time T; dt = 0 picks the default step.");

  m.def(
      "traveling_frame_error",
      [](const Array& u, double L, double nu, double T, double dt, double s, double r) {
        const Field u0 = to_field(u, L);
        const EvolveConfig cfg = evolve_config(s, r, T, dt, 100);
        py::gil_scoped_release release;
        return traveling_frame_error(u0, nu, T, cfg);
      },
      py::arg("u"), py::arg("L"), py::arg("nu"), py::arg("T"), py::arg("dt") = 0.0, py::arg("s") = 2.0,
      py::arg("r") = 0.0);

  m.def(
      "tail_mass", [](const Array& u, double L) { return tail_mass(to_field(u, L)); }, py::arg("u"), py::arg("L"));

  m.def(
      "smoothness",
      [](const Array& u, double L) {
        const auto rep = probe_smoothness(to_field(u, L));
        py::dict d;
        d["top_band_ratio"] = rep.top_band_ratio;
        d["decay_rate"] = rep.decay_rate;
        d["r_squared"] = rep.r_squared;
        d["exponential"] = rep.exponential;
        d["admitted"] = rep.admitted;
        return d;
      },
      py::arg("u"), py::arg("L"));

  m.def(
      "nonlinear_bound",
      [](double s, double r, int ensemble, std::uint64_t seed, int band_limit, int points) {
        NonlinearBoundOptions opt;
        opt.band_limit = band_limit;
        opt.points = points;
        const auto st = probe_nonlinear_bound(s, r, ensemble, seed, opt);
        py::dict d;
        d["gamma"] = st.gamma;
        d["max"] = st.max_ratio;
        d["median"] = st.median_ratio;
        d["min"] = st.min_ratio;
        d["samples"] = st.samples;
        return d;
      },
      py::arg("s"), py::arg("r"), py::arg("ensemble") = 1000, py::arg("seed") = 1, py::arg("band_limit") = 32,
      py::arg("points") = 256);

  m.def(
      "commutator_decay",
      [](const Array& u, const Array& v, double L, double r, const std::vector<double>& radii, bool constant) {
        const auto rows = probe_commutator_decay(to_field(u, L), to_field(v, L), r, radii,
                                                 constant ? Cutoff::constant : Cutoff::gaussian);
        std::vector<double> out;
        for (const auto& row : rows) out.push_back(row.value);
        return to_array(out);
      },
      py::arg("u"), py::arg("v"), py::arg("L"), py::arg("r"), py::arg("radii"), py::arg("constant_cutoff") = false);

  m.def(
      "echo_config", [](const std::string& text) { return echo_config(parse_config(text)); }, py::arg("text"),
      "Parses a YAML configuration and returns it with every default explicit.");

  m.def(
      "run_config",
      [](const std::string& text, std::optional<std::string> output_dir, bool quiet) {
        RunConfig cfg = parse_config(text);
        if (output_dir) cfg.output_dir = *output_dir;
        std::ostringstream log;
        int status;
        {
          py::gil_scoped_release release;
          status = run(cfg, log, quiet);
        }
        return py::make_tuple(status, log.str());
      },
      py::arg("text"), py::arg("output_dir") = py::none(), py::arg("quiet") = true,
      "Runs a configuration like the command-line tool; returns (exit status, log).");
}
