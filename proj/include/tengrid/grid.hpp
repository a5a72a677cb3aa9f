#pragma once

#include <array>
#include <cmath>

#include <Eigen/Core>

#include "tengrid/common.hpp"

namespace tg {

/// Uniform Cartesian grid on the box [-b1,b1] x [-b2,b2] x [-b3,b3].
///
/// Per axis there are n cell centers with mesh size h = 2b/(n+1),
/// placed symmetrically about the origin:
///   x_i = (i - (n-1)/2) * h,  i = 0..n-1.
/// Sampled functions are collocated at cell centers.
struct Grid3 {
  std::array<index_t, 3> n{};
  std::array<double, 3> b_half{};
  std::array<double, 3> h{};

  bool cubic() const { return n[0] == n[1] && n[1] == n[2] && b_half[0] == b_half[1] && b_half[1] == b_half[2]; }

  double coord(int axis, index_t i) const {
    return (static_cast<double>(i) - 0.5 * static_cast<double>(n[axis] - 1)) * h[axis];
  }

  /// Nearest node index along `axis`; may fall outside [0, n).
  index_t nearest_index(int axis, double x) const {
    return static_cast<index_t>(std::llround(x / h[axis] + 0.5 * static_cast<double>(n[axis] - 1)));
  }

  /// Position of entry j of a doubled-grid reference vector (j = 0..2n-1).
  /// Doubled-grid nodes sit at integer multiples of h so that windowing a
  /// reference vector reproduces node-aligned translates exactly.
  double ref_coord(int axis, index_t j) const {
    return (static_cast<double>(j) - static_cast<double>(n[axis] - 1)) * h[axis];
  }

  Eigen::VectorXd axis_coords(int axis) const {
    Eigen::VectorXd x(n[axis]);
    for (index_t i = 0; i < n[axis]; ++i) x[i] = coord(axis, i);
    return x;
  }

  Eigen::VectorXd ref_axis_coords(int axis) const {
    Eigen::VectorXd x(2 * n[axis]);
    for (index_t j = 0; j < 2 * n[axis]; ++j) x[j] = ref_coord(axis, j);
    return x;
  }
};

Grid3 make_grid(double b_half, index_t n);
Grid3 make_grid(const std::array<double, 3>& b_half, const std::array<index_t, 3>& n);

/// Per-axis source offsets into doubled-grid reference vectors.
///
/// apply() extracts the n-entry slice ref[offset .. offset+n-1]; the slice of
/// a reference vector holding kernel values at positions ref_coord(j) then
/// holds the kernel translated to the window's center, restricted to the box.
struct WindowMap {
  std::array<index_t, 3> offset{};
  std::array<index_t, 3> dest_len{};

  Eigen::VectorXd apply(int axis, const Eigen::VectorXd& ref) const {
    require(ref.size() == 2 * dest_len[axis], "WindowMap: reference vector must have 2n entries");
    return ref.segment(offset[axis], dest_len[axis]);
  }
};

/// Snap `x` to the nearest node on `axis`; throws if outside the box or
/// farther than h/2 from every node.
index_t snap_to_node(const Grid3& grid, int axis, double x);

/// Window selecting the translate of a doubled-grid reference tensor centered
/// at `center` (which must snap to a grid node on every axis).
WindowMap window_for_center(const Grid3& grid, const std::array<double, 3>& center);

/// Offset for a single-axis shift; used by the lattice assembly loops.
index_t window_offset(const Grid3& grid, int axis, double center);

}  // namespace tg
