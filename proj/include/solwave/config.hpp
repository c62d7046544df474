#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "solwave/evolution.hpp"
#include "solwave/solver.hpp"

namespace solwave {

/// Configuration error carrying the offending key and source line (0 when
/// unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, const std::string& what);
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

enum class Command { solve, sweep, evolve, probe };

std::string to_string(Command c);

struct ProblemConfig {
  double s = 2.0;
  double r = 0.0;
  /// Optional general-symbol overrides (closed-form expressions in xi).
  std::optional<std::string> dispersion;
  std::optional<std::string> nonlinear;
  /// Low-frequency exponent s' of a general dispersive symbol.
  std::optional<double> s_prime;

  Symbol dispersive_symbol() const;
  Symbol nonlinear_symbol() const;
};

struct EvolveSettings {
  double dt = 0.0;
  /// Horizon; when unset, T = horizon_factor / (m(0) - nu).
  std::optional<double> T;
  double horizon_factor = 10.0;
  int record_every = 100;
  bool store_fields = false;
  double frame_tolerance = 1e-3;
  double mass_tolerance = 1e-10;
  double energy_tolerance = 1e-8;
  /// Step halvings allowed to meet the drift tolerances.
  int max_halvings = 8;
};

struct ProbeSettings {
  std::string name;  // nonlinear_bound | gamma_upper | subadditivity | commutator | scaling | smoothness
  int ensemble = 1000;
  int band_limit = 32;
  int points = 256;
  std::vector<double> mu_values;
  std::vector<double> thetas;
  std::vector<double> c3_values;
  std::vector<double> splits;
  std::vector<double> radii;
  double margin = 1e-4;
  /// Widths of u = sech(x/width) and v = sech(x/v_width) for the commutator;
  /// u = v makes the integral vanish identically by self-adjointness.
  double width = 1.0;
  double v_width = 2.0;
  bool constant_cutoff = false;
};

struct RunConfig {
  Command command = Command::solve;
  ProblemConfig problem;
  double mu = 0.4;
  std::optional<double> nu;
  double length = 200.0 * 3.141592653589793;
  int points = 4096;
  bool auto_enlarge = true;
  int max_enlargements = 4;
  Method method = Method::descent;
  double tol_residual = 1e-10;
  double tol_step = 1e-13;
  int max_iter = 5000;
  std::optional<double> theta0;
  std::vector<double> continuation;
  bool evenize = false;
  int nonmonotone_window = 8;
  EvolveSettings evolve;
  ProbeSettings probe;
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  SolveConfig solve_config() const;
  EvolveConfig evolve_config() const;
};

Command parse_command(const std::string& name);

/// Parses YAML text. Unknown keys, type mismatches and violations of
/// s > 0, r < s - 1 raise ConfigError with key and line. `command`, when
/// given, overrides the file's `command` key.
RunConfig parse_config(const std::string& text, std::optional<Command> command = std::nullopt);
RunConfig load_config(const std::string& path, std::optional<Command> command = std::nullopt);

/// YAML echo with every default made explicit; parses back to the same
/// configuration.
std::string echo_config(const RunConfig& cfg);

}  // namespace solwave
