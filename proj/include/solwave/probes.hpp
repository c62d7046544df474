#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "solwave/field.hpp"
#include "solwave/solver.hpp"
#include "solwave/symbol.hpp"

namespace solwave {

/// 1/2 of the integral of u^2 over the outer 10% of the box (|x| >= 0.45 L),
/// integrated exactly on the trigonometric interpolant of u^2.
double tail_mass(const Field& u);

// ---------------------------------------------------------------------------
// Nonlinear upper bound ||u^2||_{H^{r/2}} <~ ||u||^{2-g} ||u||_{H^{s/2}}^g

/// Exponent g < 1 from the constructive bound: (r + tau)/s with tau the
/// midpoint of (1, s - r) when s > 1, (r + 1)/s when s <= 1. Out-of-range r
/// is replaced by the midpoint of the admissible interval.
double nonlinear_bound_exponent(double s, double r);

/// ||u^2||_{H^{r/2}} / (||u||_{L^2}^{2-g} ||u||_{H^{s/2}}^g); NaN for u = 0.
double nonlinear_bound_ratio(const Field& u, double s, double r, double gamma);

enum class Envelope { flat, algebraic, gaussian };

struct NonlinearBoundOptions {
  double length = 2.0 * 3.141592653589793;
  int points = 256;
  /// Highest excited mode index; must be <= points/4 so u^2 stays resolved.
  int band_limit = 32;
};

struct NonlinearBoundStats {
  double gamma = 0.0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  double min_ratio = 0.0;
  int samples = 0;
  int skipped = 0;
};

/// Random band-limited fields with envelopes cycling flat / algebraic /
/// Gaussian; reproducible for a given seed.
Field random_band_limited(const GridPtr& grid, int band_limit, Envelope env, std::uint64_t seed);

NonlinearBoundStats probe_nonlinear_bound(double s, double r, int ensemble_size,
                                          std::uint64_t seed,
                                          const NonlinearBoundOptions& opt = {});

// ---------------------------------------------------------------------------
// Upper bounds for the constrained infimum

struct GammaEstimate {
  double mu = 0.0;
  double gamma_upper = 0.0;
  double best_theta = 0.0;
  std::string provenance;
  bool below_mu = false;
};

/// min over theta of E~(ansatz); flags whether it falls below m(0) mu.
GammaEstimate probe_gamma_upper(double mu, std::span<const double> thetas, const Symbol& disp,
                                const Symbol& nl, const GridPtr& grid);

/// Same scan with theta = c3 mu for each c3 in `c3_values`.
GammaEstimate probe_gamma_upper_scaled(double mu, std::span<const double> c3_values,
                                       const Symbol& disp, const Symbol& nl,
                                       const GridPtr& grid);

/// Gap ratios (m(0) mu - Gamma)/mu^3 across a sweep.
struct InfimumGap {
  std::vector<double> mu;
  std::vector<double> ratio;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  bool positive = false;
};

InfimumGap infimum_gap(std::span<const GammaEstimate> estimates, double m0 = 1.0);

// ---------------------------------------------------------------------------
// Strict subadditivity

struct SubadditivitySplit {
  double lambda = 0.0;
  double gamma_mu = 0.0;
  double gamma_lambda = 0.0;
  double gamma_rest = 0.0;
  /// Gamma(mu) - Gamma(lambda) - Gamma(mu - lambda); negative when strict.
  double margin = 0.0;
  bool conclusive = false;
};

std::vector<SubadditivitySplit> probe_subadditivity(double mu, std::span<const double> splits,
                                                    const SolveConfig& base);

// ---------------------------------------------------------------------------
// Commutator decay |int v^2 (rho_R n(D) u^2 - n(D)(rho_R u^2)) dx|

enum class Cutoff { gaussian, constant };

struct CommutatorRow {
  double radius = 0.0;
  double value = 0.0;
};

std::vector<CommutatorRow> probe_commutator_decay(const Field& u, const Field& v, double r,
                                                  std::span<const double> radii,
                                                  Cutoff rho = Cutoff::gaussian);

// ---------------------------------------------------------------------------
// Scaling laws

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  int count = 0;
};

/// Least-squares fit of log y = slope log x + intercept.
FitResult loglog_fit(std::span<const double> x, std::span<const double> y);

/// A record is admitted when converged with tail_mass/mu <= 1e-8.
bool admitted(const SweepRecord& rec);

/// Fits keyed "speed_gap" (expected 2), "h_half_s_norm" (1/2),
/// "nonlinearity" (3) and "sup_norm". Throws std::invalid_argument with
/// fewer than 5 admitted records or less than a decade in mu.
std::map<std::string, FitResult> probe_scaling_laws(std::span<const SweepRecord> records);

// ---------------------------------------------------------------------------
// Spectral smoothness

struct SmoothnessReport {
  double peak = 0.0;
  double top_band_ratio = 0.0;
  double decay_rate = 0.0;
  double r_squared = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  bool exponential = false;
  /// top_band_ratio <= 1e-10 and an exponential fit with r^2 >= 0.99
  bool admitted = false;
};

/// Fits log|c_k| against xi_k over the upper half of the decaying range
/// (from the spectral peak to the first coefficient below 1e-11 of the peak, above solver noise).
SmoothnessReport probe_smoothness(const Field& u);

}  // namespace solwave
