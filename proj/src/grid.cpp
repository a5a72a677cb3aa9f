#include "tengrid/grid.hpp"

#include <cmath>

namespace tg {

Grid3 make_grid(const std::array<double, 3>& b_half, const std::array<index_t, 3>& n) {
  Grid3 g;
  for (int ax = 0; ax < 3; ++ax) {
    require(b_half[ax] > 0.0, "make_grid: box half-width must be positive");
    require(n[ax] >= 2, "make_grid: need at least 2 grid points per axis");
    g.n[ax] = n[ax];
    g.b_half[ax] = b_half[ax];
    g.h[ax] = 2.0 * b_half[ax] / static_cast<double>(n[ax] + 1);
  }
  return g;
}

Grid3 make_grid(double b_half, index_t n) {
  return make_grid({b_half, b_half, b_half}, {n, n, n});
}

index_t snap_to_node(const Grid3& grid, int axis, double x) {
  if (std::abs(x) > grid.b_half[axis])
    throw std::domain_error("snap_to_node: point outside the computational box");
  const index_t i = grid.nearest_index(axis, x);
  if (i < 0 || i >= grid.n[axis] || std::abs(x - grid.coord(axis, i)) > 0.5 * grid.h[axis] * (1.0 + 1e-12))
    throw SnapError("snap_to_node: point farther than h/2 from every node; refine the grid");
  return i;
}

index_t window_offset(const Grid3& grid, int axis, double center) {
  const index_t i0 = snap_to_node(grid, axis, center);
  // windowed[i] = ref[i + ofs] must sit at coord(i) - center = ref_coord(i + ofs)
  const index_t ofs = (grid.n[axis] - 1) - i0;
  require(ofs >= 0 && ofs + grid.n[axis] <= 2 * grid.n[axis], "window_offset: window escapes the doubled grid");
  return ofs;
}

WindowMap window_for_center(const Grid3& grid, const std::array<double, 3>& center) {
  WindowMap w;
  for (int ax = 0; ax < 3; ++ax) {
    w.offset[ax] = window_offset(grid, ax, center[ax]);
    w.dest_len[ax] = grid.n[ax];
  }
  return w;
}

}  // namespace tg
