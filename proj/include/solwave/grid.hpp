#pragma once

#include <memory>
#include <vector>

namespace solwave {

/// Uniform periodic grid on [-L/2, L/2) with N nodes.
///
/// Nodes are x_j = -L/2 + j L/N. Wavenumbers are xi_k = 2 pi k / L for
/// k = -N/2 .. N/2-1; the half-spectrum used internally stores k = 0 .. N/2,
/// where the last entry is the unpaired Nyquist mode.
class Grid {
 public:
  Grid(double length, int points);

  double length() const { return length_; }
  int points() const { return points_; }
  double spacing() const { return length_ / points_; }

  /// Number of entries in a half-spectrum (N/2 + 1).
  int modes() const { return points_ / 2 + 1; }

  double node(int j) const { return -0.5 * length_ + j * spacing(); }
  std::vector<double> nodes() const;

  /// Wavenumber of half-spectrum index k, 0 <= k <= N/2.
  double wavenumber(int k) const;
  /// Signed wavenumbers -N/2 .. N/2-1 in ascending order.
  std::vector<double> wavenumbers() const;
  /// |xi| of the Nyquist mode, pi N / L.
  double max_wavenumber() const;

  /// Index of the node at x = 0.
  int origin_index() const { return points_ / 2; }

  bool operator==(const Grid& other) const {
    return length_ == other.length_ && points_ == other.points_;
  }

 private:
  double length_;
  int points_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validated grid factory: L > 0, N even, N >= 8.
GridPtr make_grid(double length, int points);

}  // namespace solwave
