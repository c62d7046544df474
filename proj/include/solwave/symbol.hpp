#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "solwave/grid.hpp"

namespace solwave {

namespace detail {
struct ExprNode;
}

/// Even, real Fourier multiplier symbol.
///
/// Either the Bessel symbol <xi>^alpha = (1 + xi^2)^(alpha/2), or a general
/// closed-form expression in xi built from numbers, `xi`, `<xi>` (also
/// `jb(e)` for (1 + e^2)^(1/2)), `abs(e)`, `exp(e)`, `+ - * /` and `^`.
/// General symbols carry a declared order (growth exponent) and, for
/// dispersive symbols, a declared low-frequency exponent.
class Symbol {
 public:
  static Symbol bessel(double order);
  static Symbol general(const std::string& expression, double order,
                        std::optional<double> low_order = std::nullopt);
  /// The zero symbol (used to switch off a term).
  static Symbol zero();

  double operator()(double xi) const;

  /// Symbol values at the half-spectrum wavenumbers of `grid`.
  std::vector<double> weights(const Grid& grid) const;

  bool is_bessel() const { return !expr_; }
  /// Bessel order, or the declared order of a general symbol.
  double order() const { return order_; }
  std::optional<double> low_order() const { return low_order_; }
  const std::string& expression() const { return text_; }
  std::string describe() const;

  /// Smallest value over the grid's wavenumbers.
  double min_on(const Grid& grid) const;

 private:
  Symbol() = default;

  double order_ = 0.0;
  std::optional<double> low_order_;
  std::string text_;
  std::shared_ptr<const detail::ExprNode> expr_;
};

/// Outcome of checking a dispersive symbol m against the growth conditions
/// m(xi) - m(0) ~ |xi|^s on |xi| >= 1 and ~ |xi|^s' on |xi| < 1.
struct SymbolReport {
  bool even = true;
  bool positive = true;
  bool finite = true;
  double high_ratio_min = 0.0;
  double high_ratio_max = 0.0;
  double low_ratio_min = 0.0;
  double low_ratio_max = 0.0;
  bool high_ok = true;
  bool low_ok = true;
  double bound = 0.0;
  std::vector<std::string> failures;

  bool pass() const { return failures.empty(); }
};

/// Samples the symbol on log-spaced |xi| in [1e-3, 1e3] and reports the
/// ratios (m(xi) - m(0))/|xi|^s (|xi| >= 1) and /|xi|^s' (|xi| < 1); a ratio
/// outside [1/bound, bound] fails the corresponding growth check.
SymbolReport check_symbol_assumptions(const Symbol& sym, double s, double s_prime,
                                      double bound = 100.0);

/// Same sampling for a nonlinear symbol n: n(xi)/<xi>^r within
/// [1/bound, bound] and |n'(xi)| <= bound <xi>^(r-1).
SymbolReport check_nonlinear_symbol(const Symbol& sym, double r, double bound = 100.0);

}  // namespace solwave
