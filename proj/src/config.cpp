#include "solwave/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace solwave {

ConfigError::ConfigError(const std::string& key, int line, const std::string& what)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         "'" + key + "': " + what),
      key_(key),
      line_(line) {}

std::string to_string(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::sweep: return "sweep";
    case Command::evolve: return "evolve";
    case Command::probe: return "probe";
  }
  return "?";
}

Symbol ProblemConfig::dispersive_symbol() const {
  if (dispersion) return Symbol::general(*dispersion, s, s_prime.value_or(2.0));
  return Symbol::bessel(s);
}

Symbol ProblemConfig::nonlinear_symbol() const {
  if (nonlinear) return Symbol::general(*nonlinear, r);
  return Symbol::bessel(r);
}

SolveConfig RunConfig::solve_config() const {
  SolveConfig c;
  c.mu = mu;
  c.dispersive = problem.dispersive_symbol();
  c.nonlinear = problem.nonlinear_symbol();
  c.grid = make_grid(length, points);
  c.method = method;
  c.theta0 = theta0;
  c.speed = nu;
  c.tol_residual = tol_residual;
  c.tol_step = tol_step;
  c.max_iter = max_iter;
  c.continuation = continuation;
  c.evenize = evenize;
  c.auto_enlarge = auto_enlarge;
  c.max_enlargements = max_enlargements;
  c.nonmonotone_window = nonmonotone_window;
  return c;
}

EvolveConfig RunConfig::evolve_config() const {
  EvolveConfig c;
  c.dt = evolve.dt;
  c.T = evolve.T.value_or(1.0);
  c.dispersive = problem.dispersive_symbol();
  c.nonlinear = problem.nonlinear_symbol();
  c.record_every = evolve.record_every;
  c.store_fields = evolve.store_fields;
  return c;
}

Command parse_command(const std::string& name) {
  if (name == "solve") return Command::solve;
  if (name == "sweep") return Command::sweep;
  if (name == "evolve") return Command::evolve;
  if (name == "probe") return Command::probe;
  throw std::invalid_argument("unknown command '" + name + "' (expected solve, sweep, evolve or probe)");
}

namespace {

int line_of(const YAML::Node& n) {
  const auto m = n.Mark();
  return m.line >= 0 ? m.line + 1 : 0;
}

template <class T>
T as(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::BadConversion&) {
    std::string want = std::is_same_v<T, bool>          ? "a boolean"
                       : std::is_integral_v<T>          ? "an integer"
                       : std::is_floating_point_v<T>    ? "a number"
                                                        : "a string";
    throw ConfigError(key, line_of(node), "expected " + want);
  }
}

std::vector<double> as_list(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ConfigError(key, line_of(node), "expected a list of numbers");
  std::vector<double> out;
  for (const auto& item : node) out.push_back(as<double>(item, key));
  return out;
}

using Handler = std::function<void(const YAML::Node&, const std::string&)>;

void dispatch(const YAML::Node& map, const std::string& prefix,
              const std::map<std::string, Handler>& handlers) {
  if (!map.IsMap()) throw ConfigError(prefix.empty() ? "<root>" : prefix, line_of(map), "expected a mapping");
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    const std::string full = prefix.empty() ? key : prefix + "." + key;
    auto it = handlers.find(key);
    if (it == handlers.end()) throw ConfigError(full, line_of(kv.first), "unknown key");
    it->second(kv.second, full);
  }
}

void require(bool ok, const std::string& key, int line, const std::string& what) {
  if (!ok) throw ConfigError(key, line, what);
}

}  // namespace

RunConfig parse_config(const std::string& text, std::optional<Command> command) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("<syntax>", e.mark.line + 1, e.msg);
  }
  RunConfig cfg;
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);

  std::map<std::string, int> lines;
  auto num = [&](double& dst) {
    return [&dst, &lines](const YAML::Node& n, const std::string& k) {
      dst = as<double>(n, k);
      lines[k] = line_of(n);
    };
  };
  auto integer = [&](int& dst) {
    return [&dst, &lines](const YAML::Node& n, const std::string& k) {
      dst = as<int>(n, k);
      lines[k] = line_of(n);
    };
  };
  auto flag = [](bool& dst) {
    return [&dst](const YAML::Node& n, const std::string& k) { dst = as<bool>(n, k); };
  };
  auto list = [](std::vector<double>& dst) {
    return [&dst](const YAML::Node& n, const std::string& k) { dst = as_list(n, k); };
  };
  auto opt_num = [&](std::optional<double>& dst) {
    return [&dst, &lines](const YAML::Node& n, const std::string& k) {
      dst = as<double>(n, k);
      lines[k] = line_of(n);
    };
  };

  bool have_l = false, have_l_pi = false;
  dispatch(root, "", {
    {"command", [&](const YAML::Node& n, const std::string& k) {
       try {
         cfg.command = parse_command(as<std::string>(n, k));
       } catch (const std::invalid_argument&) {
         throw ConfigError(k, line_of(n), "expected solve, sweep, evolve or probe");
       }
     }},
    {"s", num(cfg.problem.s)},
    {"r", num(cfg.problem.r)},
    {"s_prime", opt_num(cfg.problem.s_prime)},
    {"dispersion", [&](const YAML::Node& n, const std::string& k) {
       cfg.problem.dispersion = as<std::string>(n, k);
       lines[k] = line_of(n);
     }},
    {"nonlinear", [&](const YAML::Node& n, const std::string& k) {
       cfg.problem.nonlinear = as<std::string>(n, k);
       lines[k] = line_of(n);
     }},
    {"mu", num(cfg.mu)},
    {"nu", opt_num(cfg.nu)},
    {"output_dir", [&](const YAML::Node& n, const std::string& k) { cfg.output_dir = as<std::string>(n, k); }},
    {"seed", [&](const YAML::Node& n, const std::string& k) { cfg.seed = as<std::uint64_t>(n, k); }},
    {"grid", [&](const YAML::Node& n, const std::string& k) {
       dispatch(n, k, {
         {"L", [&](const YAML::Node& v, const std::string& kk) { num(cfg.length)(v, kk); have_l = true; }},
         {"L_over_pi", [&](const YAML::Node& v, const std::string& kk) {
            cfg.length = as<double>(v, kk) * std::numbers::pi;
            lines["grid.L"] = line_of(v);
            have_l_pi = true;
          }},
         {"N", integer(cfg.points)},
         {"auto_enlarge", flag(cfg.auto_enlarge)},
         {"max_enlargements", integer(cfg.max_enlargements)},
       });
     }},
    {"solver", [&](const YAML::Node& n, const std::string& k) {
       dispatch(n, k, {
         {"method", [&](const YAML::Node& v, const std::string& kk) {
            try {
              cfg.method = parse_method(as<std::string>(v, kk));
            } catch (const std::invalid_argument&) {
              throw ConfigError(kk, line_of(v), "expected descent, petviashvili or hybrid");
            }
          }},
         {"tol_residual", num(cfg.tol_residual)},
         {"tol_step", num(cfg.tol_step)},
         {"max_iter", integer(cfg.max_iter)},
         {"theta0", opt_num(cfg.theta0)},
         {"continuation", list(cfg.continuation)},
         {"evenize", flag(cfg.evenize)},
         {"nonmonotone_window", integer(cfg.nonmonotone_window)},
       });
     }},
    {"evolve", [&](const YAML::Node& n, const std::string& k) {
       dispatch(n, k, {
         {"dt", num(cfg.evolve.dt)},
         {"T", opt_num(cfg.evolve.T)},
         {"horizon_factor", num(cfg.evolve.horizon_factor)},
         {"record_every", integer(cfg.evolve.record_every)},
         {"store_fields", flag(cfg.evolve.store_fields)},
         {"frame_tolerance", num(cfg.evolve.frame_tolerance)},
         {"mass_tolerance", num(cfg.evolve.mass_tolerance)},
         {"energy_tolerance", num(cfg.evolve.energy_tolerance)},
         {"max_halvings", integer(cfg.evolve.max_halvings)},
       });
     }},
    {"probe", [&](const YAML::Node& n, const std::string& k) {
       auto& p = cfg.probe;
       dispatch(n, k, {
         {"name", [&](const YAML::Node& v, const std::string& kk) {
            p.name = as<std::string>(v, kk);
            static const std::vector<std::string> names{"nonlinear_bound", "gamma_upper",
                                                        "subadditivity", "commutator",
                                                        "scaling", "smoothness"};
            if (std::find(names.begin(), names.end(), p.name) == names.end()) {
              throw ConfigError(kk, line_of(v),
                                "expected nonlinear_bound, gamma_upper, subadditivity, "
                                "commutator, scaling or smoothness");
            }
          }},
         {"ensemble", integer(p.ensemble)},
         {"band_limit", integer(p.band_limit)},
         {"points", integer(p.points)},
         {"mu_values", list(p.mu_values)},
         {"thetas", list(p.thetas)},
         {"c3_values", list(p.c3_values)},
         {"splits", list(p.splits)},
         {"radii", list(p.radii)},
         {"margin", num(p.margin)},
         {"width", num(p.width)},
         {"v_width", num(p.v_width)},
         {"constant_cutoff", flag(p.constant_cutoff)},
       });
     }},
  });

  if (command) cfg.command = *command;
  auto line = [&](const std::string& k) {
    auto it = lines.find(k);
    return it == lines.end() ? 0 : it->second;
  };
  require(!(have_l && have_l_pi), "grid.L", line("grid.L"), "give either L or L_over_pi, not both");

  const double s = cfg.problem.s, r = cfg.problem.r;
  require(std::isfinite(s) && s > 0.0, "s", line("s"),
          "assumption s > 0, r < s - 1 violated: s = " + std::to_string(s));
  require(std::isfinite(r) && r < s - 1.0, "r", line("r"),
          "assumption s > 0, r < s - 1 violated: r = " + std::to_string(r) +
              " is not below s - 1 = " + std::to_string(s - 1.0));
  if (cfg.problem.s_prime) {
    require(*cfg.problem.s_prime > 0.0, "s_prime", line("s_prime"), "must be positive");
    require(cfg.problem.dispersion.has_value(), "s_prime", line("s_prime"),
            "only meaningful with a general dispersion symbol");
  }
  if (cfg.problem.dispersion) {
    Symbol sym = Symbol::bessel(s);
    try {
      sym = cfg.problem.dispersive_symbol();
    } catch (const std::exception& e) {
      throw ConfigError("dispersion", line("dispersion"), e.what());
    }
    const auto rep = check_symbol_assumptions(sym, s, cfg.problem.s_prime.value_or(2.0));
    if (!rep.pass()) {
      std::string why;
      for (const auto& f : rep.failures) why += (why.empty() ? "" : "; ") + f;
      throw ConfigError("dispersion", line("dispersion"), "symbol fails the growth assumptions: " + why);
    }
  }
  if (cfg.problem.nonlinear) {
    Symbol sym = Symbol::bessel(r);
    try {
      sym = cfg.problem.nonlinear_symbol();
    } catch (const std::exception& e) {
      throw ConfigError("nonlinear", line("nonlinear"), e.what());
    }
    const auto rep = check_nonlinear_symbol(sym, r);
    if (!rep.pass()) {
      std::string why;
      for (const auto& f : rep.failures) why += (why.empty() ? "" : "; ") + f;
      throw ConfigError("nonlinear", line("nonlinear"), "symbol fails the order assumptions: " + why);
    }
  }

  require(std::isfinite(cfg.mu) && cfg.mu > 0.0, "mu", line("mu"), "must be positive");
  require(std::isfinite(cfg.length) && cfg.length > 0.0, "grid.L", line("grid.L"), "must be positive");
  require(cfg.points >= 8 && cfg.points % 2 == 0, "grid.N", line("grid.N"), "must be an even integer >= 8");
  require(cfg.max_enlargements >= 0, "grid.max_enlargements", line("grid.max_enlargements"), "must be >= 0");
  require(cfg.tol_residual > 0.0, "solver.tol_residual", line("solver.tol_residual"), "must be positive");
  require(cfg.tol_step > 0.0, "solver.tol_step", line("solver.tol_step"), "must be positive");
  require(cfg.max_iter >= 1, "solver.max_iter", line("solver.max_iter"), "must be >= 1");
  require(cfg.nonmonotone_window >= 1, "solver.nonmonotone_window", line("solver.nonmonotone_window"), "must be >= 1");
  if (cfg.theta0) {
    require(*cfg.theta0 > 0.0 && *cfg.theta0 <= 1.0, "solver.theta0", line("solver.theta0"), "must lie in (0, 1]");
  }
  if (cfg.method == Method::petviashvili && cfg.command != Command::probe) {
    require(cfg.nu.has_value(), "nu", 0, "the petviashvili method needs a prescribed speed nu");
  }
  if (cfg.nu) {
    const double m0 = cfg.problem.dispersive_symbol()(0.0);
    require(*cfg.nu < m0, "nu", line("nu"), "speed must be subcritical (below m(0))");
  }
  require(cfg.evolve.dt >= 0.0, "evolve.dt", line("evolve.dt"), "must be >= 0 (0 selects the default)");
  if (cfg.evolve.T) require(*cfg.evolve.T > 0.0, "evolve.T", line("evolve.T"), "must be positive");
  require(cfg.evolve.horizon_factor > 0.0, "evolve.horizon_factor", line("evolve.horizon_factor"), "must be positive");
  require(cfg.evolve.max_halvings >= 0, "evolve.max_halvings", line("evolve.max_halvings"), "must be >= 0");
  require(cfg.evolve.record_every >= 1, "evolve.record_every", line("evolve.record_every"), "must be >= 1");
  if (cfg.command == Command::sweep) {
    require(!cfg.continuation.empty(), "solver.continuation", 0, "sweep needs a continuation list of mu values");
  }
  if (cfg.command == Command::probe) {
    require(!cfg.probe.name.empty(), "probe.name", 0, "probe needs a name");
  }
  return cfg;
}

RunConfig load_config(const std::string& path, std::optional<Command> command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", 0, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), command);
}

std::string echo_config(const RunConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  auto seq = [&](const std::vector<double>& v) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double x : v) out << x;
    out << YAML::EndSeq;
  };
  out << YAML::BeginMap;
  out << YAML::Key << "command" << YAML::Value << to_string(cfg.command);
  out << YAML::Key << "s" << YAML::Value << cfg.problem.s;
  out << YAML::Key << "r" << YAML::Value << cfg.problem.r;
  if (cfg.problem.s_prime) out << YAML::Key << "s_prime" << YAML::Value << *cfg.problem.s_prime;
  if (cfg.problem.dispersion) out << YAML::Key << "dispersion" << YAML::Value << *cfg.problem.dispersion;
  if (cfg.problem.nonlinear) out << YAML::Key << "nonlinear" << YAML::Value << *cfg.problem.nonlinear;
  out << YAML::Key << "mu" << YAML::Value << cfg.mu;
  if (cfg.nu) out << YAML::Key << "nu" << YAML::Value << *cfg.nu;
  out << YAML::Key << "output_dir" << YAML::Value << cfg.output_dir;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;

  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "L" << YAML::Value << cfg.length;
  out << YAML::Key << "N" << YAML::Value << cfg.points;
  out << YAML::Key << "auto_enlarge" << YAML::Value << cfg.auto_enlarge;
  out << YAML::Key << "max_enlargements" << YAML::Value << cfg.max_enlargements;
  out << YAML::EndMap;

  out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "method" << YAML::Value << to_string(cfg.method);
  out << YAML::Key << "tol_residual" << YAML::Value << cfg.tol_residual;
  out << YAML::Key << "tol_step" << YAML::Value << cfg.tol_step;
  out << YAML::Key << "max_iter" << YAML::Value << cfg.max_iter;
  out << YAML::Key << "theta0" << YAML::Value << cfg.solve_config().theta();
  out << YAML::Key << "continuation" << YAML::Value;
  seq(cfg.continuation);
  out << YAML::Key << "evenize" << YAML::Value << cfg.evenize;
  out << YAML::Key << "nonmonotone_window" << YAML::Value << cfg.nonmonotone_window;
  out << YAML::EndMap;

  out << YAML::Key << "evolve" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt" << YAML::Value << cfg.evolve.dt;
  if (cfg.evolve.T) out << YAML::Key << "T" << YAML::Value << *cfg.evolve.T;
  out << YAML::Key << "horizon_factor" << YAML::Value << cfg.evolve.horizon_factor;
  out << YAML::Key << "record_every" << YAML::Value << cfg.evolve.record_every;
  out << YAML::Key << "store_fields" << YAML::Value << cfg.evolve.store_fields;
  out << YAML::Key << "frame_tolerance" << YAML::Value << cfg.evolve.frame_tolerance;
  out << YAML::Key << "mass_tolerance" << YAML::Value << cfg.evolve.mass_tolerance;
  out << YAML::Key << "energy_tolerance" << YAML::Value << cfg.evolve.energy_tolerance;
  out << YAML::Key << "max_halvings" << YAML::Value << cfg.evolve.max_halvings;
  out << YAML::EndMap;

  const auto& p = cfg.probe;
  out << YAML::Key << "probe" << YAML::Value << YAML::BeginMap;
  if (!p.name.empty()) out << YAML::Key << "name" << YAML::Value << p.name;
  out << YAML::Key << "ensemble" << YAML::Value << p.ensemble;
  out << YAML::Key << "band_limit" << YAML::Value << p.band_limit;
  out << YAML::Key << "points" << YAML::Value << p.points;
  out << YAML::Key << "mu_values" << YAML::Value;
  seq(p.mu_values);
  out << YAML::Key << "thetas" << YAML::Value;
  seq(p.thetas);
  out << YAML::Key << "c3_values" << YAML::Value;
  seq(p.c3_values);
  out << YAML::Key << "splits" << YAML::Value;
  seq(p.splits);
  out << YAML::Key << "radii" << YAML::Value;
  seq(p.radii);
  out << YAML::Key << "margin" << YAML::Value << p.margin;
  out << YAML::Key << "width" << YAML::Value << p.width;
  out << YAML::Key << "v_width" << YAML::Value << p.v_width;
  out << YAML::Key << "constant_cutoff" << YAML::Value << p.constant_cutoff;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace solwave
