#pragma once

#include <optional>
#include <vector>

#include "tengrid/kernel.hpp"
#include "tengrid/reduction.hpp"

namespace tg {

/// Axis-aligned sub-block of a lattice, inclusive node index ranges.
struct LatticeBlock {
  std::array<index_t, 3> lo{0, 0, 0};
  std::array<index_t, 3> hi{0, 0, 0};
  bool include = true;
  double charge_scale = 1.0;  // per-block multiplier on the lattice charge
};

/// Nuclei of uniform charge on an L1 x L2 x L3 lattice with spacing b,
/// centered in the computational box.  Optional include/exclude blocks carve
/// composite geometries out of the full rectangle.
struct LatticeSpec {
  std::array<index_t, 3> counts{1, 1, 1};
  double spacing = 2.0;       // bohr
  double charge = 1.0;
  std::vector<LatticeBlock> blocks;
  index_t n0 = 64;            // grid points per unit cell (must be even)
  index_t margin_cells = 1;   // empty unit cells per side between lattice and box

  /// Node position along `axis` for lattice index m in [0, counts[axis]).
  double position(int axis, index_t m) const {
    return (static_cast<double>(m) - 0.5 * static_cast<double>(counts[axis] - 1)) * spacing;
  }
};

/// Grid sized n = n0 * (L - 1 + 2*margin) - 1 per axis so every lattice node
/// lands exactly on a cell center.
Grid3 lattice_grid(const LatticeSpec& spec);

/// Resolve the block list into disjoint included rectangles (the full lattice
/// when no blocks are given).  Throws on overlapping includes.
std::vector<LatticeBlock> resolve_blocks(const LatticeSpec& spec);

/// Included node centers (for oracles and probes).
std::vector<std::array<double, 3>> lattice_nodes(const LatticeSpec& spec);

struct AssembledPotential {
  std::optional<CanonicalTensor3> canonical;
  std::optional<TuckerTensor3> tucker;
  index_t window_ops = 0;  // windowed-vector additions performed
};

/// Rank-preserving assembled summation: per axis and per canonical term, the
/// windowed translates of the doubled-grid reference vector are accumulated;
/// the output rank equals the reference rank.
AssembledPotential lattice_sum_canonical(const LatticeSpec& spec, const Grid3& grid,
                                         const KernelTensor& reference);

/// Same assembly on the Tucker side vectors of the master tensor; the core is
/// copied unchanged.  Note the assembled side matrices are no longer
/// orthonormal, so norms must go through the dense or canonical route.
AssembledPotential lattice_sum_tucker(const LatticeSpec& spec, const Grid3& grid,
                                      const TuckerTensor3& master);

/// Composite geometries: per-block assembled sums concatenated (rank R per
/// block), then optionally rank-reduced.
AssembledPotential lattice_sum_composite(const LatticeSpec& spec, const Grid3& grid,
                                         const KernelTensor& reference,
                                         std::optional<double> reduce_eps = std::nullopt);

struct LatticeEnergyResult {
  double energy = 0.0;
  double self_term = 0.0;     // subtracted on-node correction
  double mesh = 0.0;
  index_t kernel_rank = 0;
};

/// Interaction energy of the uniform-charge rectangular lattice from the
/// lattice-traced assembled kernel:
///   E_L = Z^2 h^-3 / 2 * (<P_hat, 1> - <P_0, 1>),
/// evaluated in O(R L^2) by tracing the reference kernel on the difference
/// lattice; matches the direct double sum within the kernel accuracy budget.
LatticeEnergyResult lattice_interaction_energy(const LatticeSpec& spec, const ExpSum& es);

/// Exact double sum 1/2 sum_{j != k} Z^2 / |x_j - x_k| with compensated,
/// deterministically partitioned accumulation.
double direct_energy_oracle(const LatticeSpec& spec, index_t max_pairs = index_t{2'000'000'000});

}  // namespace tg
