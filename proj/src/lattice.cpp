#include "tengrid/lattice.hpp"

#include <cmath>

#include "tengrid/parallel.hpp"

namespace tg {

namespace {

void validate(const LatticeSpec& spec) {
  for (int ax = 0; ax < 3; ++ax) require(spec.counts[ax] >= 1, "LatticeSpec: counts must be >= 1");
  require(spec.spacing > 0.0, "LatticeSpec: spacing must be positive");
  require(spec.n0 >= 2 && spec.n0 % 2 == 0, "LatticeSpec: n0 must be even (node alignment)");
  require(spec.margin_cells >= 1, "LatticeSpec: need at least one margin cell");
}

bool blocks_overlap(const LatticeBlock& a, const LatticeBlock& b) {
  for (int ax = 0; ax < 3; ++ax)
    if (a.hi[ax] < b.lo[ax] || b.hi[ax] < a.lo[ax]) return false;
  return true;
}

/// Cut `box` by removing its intersection with `cut`, appending the remaining
/// disjoint rectangles to `out`.
void subtract_block(const LatticeBlock& box, const LatticeBlock& cut, std::vector<LatticeBlock>& out) {
  if (!blocks_overlap(box, cut)) {
    out.push_back(box);
    return;
  }
  LatticeBlock rest = box;
  for (int ax = 0; ax < 3; ++ax) {
    if (cut.lo[ax] > rest.lo[ax]) {
      LatticeBlock below = rest;
      below.hi[ax] = cut.lo[ax] - 1;
      out.push_back(below);
      rest.lo[ax] = cut.lo[ax];
    }
    if (cut.hi[ax] < rest.hi[ax]) {
      LatticeBlock above = rest;
      above.lo[ax] = cut.hi[ax] + 1;
      out.push_back(above);
      rest.hi[ax] = cut.hi[ax];
    }
  }
  // what is left of `rest` lies inside `cut` and is dropped
}

/// Assembled axis vectors of the reference for a contiguous index range.
Eigen::MatrixXd assemble_axis(const LatticeSpec& spec, const Grid3& grid,
                              const Eigen::MatrixXd& ref_cols, int ax, index_t m_lo, index_t m_hi,
                              index_t* window_ops) {
  const index_t n = grid.n[ax];
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, ref_cols.cols());
  for (index_t m = m_lo; m <= m_hi; ++m) {
    const index_t ofs = window_offset(grid, ax, spec.position(ax, m));
    out += ref_cols.middleRows(ofs, n);
    if (window_ops) *window_ops += 1;
  }
  return out;
}

}  // namespace

Grid3 lattice_grid(const LatticeSpec& spec) {
  validate(spec);
  std::array<double, 3> b_half{};
  std::array<index_t, 3> n{};
  for (int ax = 0; ax < 3; ++ax) {
    const index_t cells = spec.counts[ax] - 1 + 2 * spec.margin_cells;
    n[ax] = spec.n0 * cells - 1;
    b_half[ax] = 0.5 * static_cast<double>(cells) * spec.spacing;
  }
  return make_grid(b_half, n);
}

std::vector<LatticeBlock> resolve_blocks(const LatticeSpec& spec) {
  validate(spec);
  LatticeBlock full;
  for (int ax = 0; ax < 3; ++ax) {
    full.lo[ax] = 0;
    full.hi[ax] = spec.counts[ax] - 1;
  }
  std::vector<LatticeBlock> included;
  for (const auto& b : spec.blocks) {
    if (!b.include) continue;
    require(b.charge_scale > 0.0, "resolve_blocks: charge scale must be positive");
    for (int ax = 0; ax < 3; ++ax)
      require(b.lo[ax] >= 0 && b.hi[ax] < spec.counts[ax] && b.lo[ax] <= b.hi[ax],
              "resolve_blocks: block outside the lattice");
    for (const auto& prev : included)
      require(!blocks_overlap(prev, b), "resolve_blocks: overlapping include blocks");
    included.push_back(b);
  }
  if (included.empty()) included.push_back(full);
  for (const auto& b : spec.blocks) {
    if (b.include) continue;
    std::vector<LatticeBlock> next;
    for (const auto& rect : included) subtract_block(rect, b, next);
    included = std::move(next);
  }
  require(!included.empty(), "resolve_blocks: empty composite lattice");
  return included;
}

std::vector<std::array<double, 3>> lattice_nodes(const LatticeSpec& spec) {
  std::vector<std::array<double, 3>> nodes;
  for (const auto& rect : resolve_blocks(spec))
    for (index_t k = rect.lo[2]; k <= rect.hi[2]; ++k)
      for (index_t j = rect.lo[1]; j <= rect.hi[1]; ++j)
        for (index_t i = rect.lo[0]; i <= rect.hi[0]; ++i)
          nodes.push_back({spec.position(0, i), spec.position(1, j), spec.position(2, k)});
  return nodes;
}

AssembledPotential lattice_sum_canonical(const LatticeSpec& spec, const Grid3& grid,
                                         const KernelTensor& reference) {
  validate(spec);
  require(reference.doubled, "lattice_sum_canonical: reference must live on the doubled grid");
  require(spec.blocks.empty(), "lattice_sum_canonical: use lattice_sum_composite for block geometries");
  AssembledPotential out;
  CanonicalTensor3 t;
  t.weight = spec.charge * reference.tensor.weight;
  for (int ax = 0; ax < 3; ++ax)
    t.factor[ax] = assemble_axis(spec, grid, reference.tensor.factor[ax], ax, 0,
                                 spec.counts[ax] - 1, &out.window_ops);
  out.canonical = std::move(t);
  return out;
}

AssembledPotential lattice_sum_tucker(const LatticeSpec& spec, const Grid3& grid,
                                      const TuckerTensor3& master) {
  validate(spec);
  require(spec.blocks.empty(), "lattice_sum_tucker: use lattice_sum_composite for block geometries");
  for (int ax = 0; ax < 3; ++ax)
    require(master.extent(ax) == 2 * grid.n[ax], "lattice_sum_tucker: master must live on the doubled grid");
  AssembledPotential out;
  TuckerTensor3 t;
  t.core = master.core;
  t.core.data *= spec.charge;
  for (int ax = 0; ax < 3; ++ax)
    t.side[ax] = assemble_axis(spec, grid, master.side[ax], ax, 0, spec.counts[ax] - 1, &out.window_ops);
  out.tucker = std::move(t);
  return out;
}

AssembledPotential lattice_sum_composite(const LatticeSpec& spec, const Grid3& grid,
                                         const KernelTensor& reference,
                                         std::optional<double> reduce_eps) {
  require(reference.doubled, "lattice_sum_composite: reference must live on the doubled grid");
  const auto rects = resolve_blocks(spec);
  AssembledPotential out;
  CanonicalTensor3 total = CanonicalTensor3::zero({grid.n[0], grid.n[1], grid.n[2]});
  for (const auto& rect : rects) {
    CanonicalTensor3 part;
    part.weight = spec.charge * rect.charge_scale * reference.tensor.weight;
    for (int ax = 0; ax < 3; ++ax)
      part.factor[ax] = assemble_axis(spec, grid, reference.tensor.factor[ax], ax, rect.lo[ax],
                                      rect.hi[ax], &out.window_ops);
    total = add(total, part);
  }
  if (reduce_eps) total = reduce_rank(total, ReductionConfig::tolerance(*reduce_eps));
  out.canonical = std::move(total);
  return out;
}

LatticeEnergyResult lattice_interaction_energy(const LatticeSpec& spec, const ExpSum& es) {
  validate(spec);
  require(spec.blocks.empty(), "lattice_interaction_energy: uniform rectangular lattices only");
  const double h = spec.spacing / static_cast<double>(spec.n0);
  LatticeEnergyResult res;
  res.mesh = h;
  res.kernel_rank = es.terms();

  // traced reference vectors on the per-axis difference lattices
  // y_j = (j - (L-1)) * b, j = 0..2L-2, evaluated from the closed-form cell
  // integrals (identical to subsampling the materialized doubled tensor)
  double bracket = 0.0;
  double self_value = 0.0;  // h^-3-free reference entry at the origin
  const index_t rank = es.terms();
  for (index_t q = 0; q < rank; ++q) {
    const double t = std::abs(es.nodes[q]);
    const double aq = std::cbrt(es.weights[q]);
    double term = 1.0;
    double self = 1.0;
    for (int ax = 0; ax < 3; ++ax) {
      const index_t l = spec.counts[ax];
      Eigen::VectorXd trace(2 * l - 1);
      for (index_t j = 0; j < 2 * l - 1; ++j)
        trace[j] = aq * gauss_cell_integral(t, (static_cast<double>(j) - (l - 1)) * spec.spacing, h);
      // assembled traced vector: A[i] = sum_m trace[i - m + L - 1]
      double axis_sum = 0.0;
      for (index_t i = 0; i < l; ++i)
        for (index_t m = 0; m < l; ++m) axis_sum += trace[i - m + l - 1];
      term *= axis_sum;
      self *= trace[l - 1];
    }
    bracket += term;
    self_value += self;
  }
  const double n_nodes = static_cast<double>(spec.counts[0]) * static_cast<double>(spec.counts[1]) *
                         static_cast<double>(spec.counts[2]);
  const double hm3 = 1.0 / (h * h * h);
  res.self_term = 0.5 * spec.charge * spec.charge * hm3 * n_nodes * self_value;
  res.energy = 0.5 * spec.charge * spec.charge * hm3 * (bracket - n_nodes * self_value);
  return res;
}

double direct_energy_oracle(const LatticeSpec& spec, index_t max_pairs) {
  const auto nodes = lattice_nodes(spec);
  const index_t n = static_cast<index_t>(nodes.size());
  require(n * n <= max_pairs, "direct_energy_oracle: pair count guard exceeded");
  std::vector<double> partial(num_threads(), 0.0);
  parallel_for(n, [&](index_t lo, index_t hi) {
    // locate the partition slot deterministically by range start
    const index_t chunk = (n + num_threads() - 1) / num_threads();
    const index_t slot = lo / std::max<index_t>(chunk, 1);
    double sum = 0.0, comp = 0.0;  // Kahan accumulation
    for (index_t j = lo; j < hi; ++j)
      for (index_t k = j + 1; k < n; ++k) {
        const double dx = nodes[j][0] - nodes[k][0];
        const double dy = nodes[j][1] - nodes[k][1];
        const double dz = nodes[j][2] - nodes[k][2];
        const double term = 1.0 / std::sqrt(dx * dx + dy * dy + dz * dz);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
      }
    partial[std::min<index_t>(slot, partial.size() - 1)] += sum;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return spec.charge * spec.charge * total;
}

}  // namespace tg
