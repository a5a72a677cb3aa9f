#include <doctest.h>

#include <cmath>
#include <random>

#include "tengrid/lattice.hpp"
#include "oracles.hpp"

using namespace tg;

namespace {

LatticeSpec cubic_spec(index_t l, double b, index_t n0) {
  LatticeSpec s;
  s.counts = {l, l, l};
  s.spacing = b;
  s.n0 = n0;
  s.margin_cells = 1;
  return s;
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("lattice grid aligns every node with a cell center") {
  LatticeSpec spec = cubic_spec(4, 2.0, 16);
  Grid3 g = lattice_grid(spec);
  for (int ax = 0; ax < 3; ++ax)
    for (index_t m = 0; m < spec.counts[ax]; ++m) {
      const index_t i = snap_to_node(g, ax, spec.position(ax, m));
      CHECK(g.coord(ax, i) == doctest::Approx(spec.position(ax, m)).epsilon(1e-14));
    }
  CHECK_THROWS_AS(lattice_grid(cubic_spec(4, 2.0, 15)), std::invalid_argument);  // odd n0
}

TEST_CASE("single-site lattice equals the windowed kernel") {
  LatticeSpec spec = cubic_spec(1, 2.0, 16);
  Grid3 g = lattice_grid(spec);
  ExpSum es = expsum_for_interval(g.h[0], 12.0, 1e-6);
  KernelTensor ref = kernel_tensor(g, es, true);
  auto sum = lattice_sum_canonical(spec, g, ref);
  REQUIRE(sum.canonical.has_value());
  CHECK(sum.canonical->rank() == ref.rank());

  WindowMap w = window_for_center(g, {0.0, 0.0, 0.0});
  CanonicalTensor3 direct;
  direct.weight = ref.tensor.weight;
  for (int ax = 0; ax < 3; ++ax)
    direct.factor[ax] = ref.tensor.factor[ax].middleRows(w.offset[ax], g.n[ax]);
  CHECK(relative_error(*sum.canonical, direct) <= 1e-13);
}

TEST_CASE("two-site lattice equals the explicit two-shift sum") {
  LatticeSpec spec;
  spec.counts = {2, 1, 1};
  spec.spacing = 2.0;
  spec.n0 = 16;
  spec.margin_cells = 1;
  Grid3 g = lattice_grid(spec);
  ExpSum es = expsum_for_interval(g.h[0], 12.0, 1e-6);
  KernelTensor ref = kernel_tensor(g, es, true);
  auto sum = lattice_sum_canonical(spec, g, ref);

  CanonicalTensor3 total = CanonicalTensor3::zero({g.n[0], g.n[1], g.n[2]});
  for (index_t m = 0; m < 2; ++m) {
    WindowMap w = window_for_center(g, {spec.position(0, m), 0.0, 0.0});
    CanonicalTensor3 shifted;
    shifted.weight = ref.tensor.weight;
    for (int ax = 0; ax < 3; ++ax)
      shifted.factor[ax] = ref.tensor.factor[ax].middleRows(w.offset[ax], g.n[ax]);
    total = add(total, shifted);
  }
  CHECK(relative_error(*sum.canonical, total) <= 1e-13);
  // rank preserved by assembly, doubled by concatenation
  CHECK(sum.canonical->rank() == ref.rank());
  CHECK(total.rank() == 2 * ref.rank());
}

TEST_CASE("8x8x8 assembled sum matches the direct windowed-kernel sum at probes") {
  LatticeSpec spec = cubic_spec(8, 2.0, 16);
  Grid3 g = lattice_grid(spec);
  ExpSum es = expsum_for_interval(g.h[0], 40.0, 1e-6);
  KernelTensor ref = kernel_tensor(g, es, true);
  auto sum = lattice_sum_canonical(spec, g, ref);
  CHECK(sum.canonical->rank() == ref.rank());
  CHECK(sum.window_ops == 3 * 8);

  // precompute per-axis windows of every lattice plane
  std::array<std::vector<Eigen::MatrixXd>, 3> windows;
  for (int ax = 0; ax < 3; ++ax)
    for (index_t m = 0; m < 8; ++m) {
      const index_t ofs = window_offset(g, ax, spec.position(ax, m));
      windows[ax].push_back(ref.tensor.factor[ax].middleRows(ofs, g.n[ax]));
    }
  std::mt19937 rng(71);
  std::uniform_int_distribution<index_t> pick(0, g.n[0] - 1);
  const double scale = std::abs(sum.canonical->value_at(g.n[0] / 2, g.n[1] / 2, g.n[2] / 2));
  for (int rep = 0; rep < 50; ++rep) {
    const index_t i = pick(rng), j = pick(rng), k = pick(rng);
    double direct = 0.0;
    for (index_t a = 0; a < 8; ++a)
      for (index_t b = 0; b < 8; ++b)
        for (index_t c = 0; c < 8; ++c)
          for (index_t q = 0; q < ref.rank(); ++q)
            direct += ref.tensor.weight[q] * windows[0][a](i, q) * windows[1][b](j, q) *
                      windows[2][c](k, q);
    CHECK(sum.canonical->value_at(i, j, k) == doctest::Approx(direct).epsilon(1e-10).scale(scale));
  }
}

TEST_CASE("Tucker assembly: unchanged core, dense image matches the canonical route") {
  LatticeSpec spec = cubic_spec(3, 2.0, 8);
  Grid3 g = lattice_grid(spec);
  ExpSum es = expsum_for_interval(g.h[0], 14.0, 1e-6);
  KernelTensor ref = kernel_tensor(g, es, true);
  const double tucker_eps = 1e-8;
  TuckerTensor3 master = canonical_to_tucker(ref.tensor, ReductionConfig::tolerance(tucker_eps)).tucker;

  auto can = lattice_sum_canonical(spec, g, ref);
  auto tuck = lattice_sum_tucker(spec, g, master);
  REQUIRE(tuck.tucker.has_value());
  CHECK(tuck.tucker->core.data == master.core.data * spec.charge);  // bitwise for Z = 1
  CHECK(tuck.tucker->ranks() == master.ranks());

  DenseTensor3 dc = to_dense(*can.canonical);
  DenseTensor3 dt = oracle::dense_from_tucker(*tuck.tucker);
  CHECK((dc.data - dt.data).norm() <= 20.0 * tucker_eps * dc.data.norm());
}

TEST_CASE("composite geometries: resolution, L-shape, O-shape") {
  // full box expressed as one include block equals the plain sum
  LatticeSpec spec = cubic_spec(4, 2.0, 8);
  Grid3 g = lattice_grid(spec);
  ExpSum es = expsum_for_interval(g.h[0], 18.0, 1e-6);
  KernelTensor ref = kernel_tensor(g, es, true);
  LatticeSpec one = spec;
  one.blocks.push_back({{0, 0, 0}, {3, 3, 3}, true});
  auto plain = lattice_sum_canonical(spec, g, ref);
  auto block = lattice_sum_composite(one, g, ref);
  CHECK(relative_error(*block.canonical, *plain.canonical) <= 1e-13);

  // L-shape as two include blocks on an 8x8x1 lattice
  LatticeSpec lshape;
  lshape.counts = {8, 8, 1};
  lshape.spacing = 2.0;
  lshape.n0 = 8;
  lshape.margin_cells = 1;
  lshape.blocks.push_back({{0, 0, 0}, {7, 3, 0}, true});
  lshape.blocks.push_back({{0, 4, 0}, {3, 7, 0}, true});
  Grid3 gl = lattice_grid(lshape);
  ExpSum esl = expsum_for_interval(gl.h[0], 45.0, 1e-6);
  KernelTensor refl = kernel_tensor(gl, esl, true);
  auto lsum = lattice_sum_composite(lshape, gl, refl, 1e-10);

  const auto nodes = lattice_nodes(lshape);
  CHECK(nodes.size() == 8 * 4 + 4 * 4);
  std::mt19937 rng(72);
  std::uniform_int_distribution<index_t> pick(0, gl.n[0] - 1);
  const double scale = std::abs(lsum.canonical->value_at(gl.n[0] / 2, gl.n[1] / 2, gl.n[2] / 2));
  for (int rep = 0; rep < 25; ++rep) {
    const index_t i = pick(rng), j = pick(rng), k = pick(rng) % gl.n[2];
    double direct = 0.0;
    for (const auto& node : nodes) {
      WindowMap w = window_for_center(gl, node);
      for (index_t q = 0; q < refl.rank(); ++q)
        direct += refl.tensor.weight[q] * refl.tensor.factor[0](i + w.offset[0], q) *
                  refl.tensor.factor[1](j + w.offset[1], q) *
                  refl.tensor.factor[2](k + w.offset[2], q);
    }
    CHECK(lsum.canonical->value_at(i, j, k) == doctest::Approx(direct).epsilon(1e-9).scale(scale));
  }

  // O-shape as a full frame: four include blocks, rank 4R before reduction
  LatticeSpec oshape = lshape;
  oshape.blocks.clear();
  oshape.blocks.push_back({{0, 0, 0}, {7, 0, 0}, true});
  oshape.blocks.push_back({{0, 7, 0}, {7, 7, 0}, true});
  oshape.blocks.push_back({{0, 1, 0}, {0, 6, 0}, true});
  oshape.blocks.push_back({{7, 1, 0}, {7, 6, 0}, true});
  auto osum = lattice_sum_composite(oshape, gl, refl);
  CHECK(osum.canonical->rank() == 4 * refl.rank());

  // the same frame via exclusion of the interior: 64 - 36 = 28 nodes
  LatticeSpec oexc = lshape;
  oexc.blocks.clear();
  oexc.blocks.push_back({{1, 1, 0}, {6, 6, 0}, false});
  CHECK(lattice_nodes(oexc).size() == 28);
  auto esum = lattice_sum_composite(oexc, gl, refl, 1e-10);
  DenseTensor3 d_frame = to_dense(*osum.canonical);
  DenseTensor3 d_exc = to_dense(*esum.canonical);
  CHECK((d_frame.data - d_exc.data).norm() <= 1e-9 * d_frame.data.norm());

  // per-block charge scaling doubles one arm of the L-shape
  LatticeSpec scaled = lshape;
  scaled.blocks[0].charge_scale = 2.0;
  auto ssum = lattice_sum_composite(scaled, gl, refl);
  LatticeSpec arm = lshape;
  arm.blocks = {lshape.blocks[0]};
  auto asum = lattice_sum_composite(arm, gl, refl);
  DenseTensor3 expect = to_dense(*lattice_sum_composite(lshape, gl, refl).canonical);
  expect.data += to_dense(*asum.canonical).data;
  CHECK((to_dense(*ssum.canonical).data - expect.data).norm() <= 1e-12 * expect.data.norm());
}

TEST_CASE("overlapping include blocks are rejected") {
  LatticeSpec spec = cubic_spec(4, 2.0, 8);
  spec.blocks.push_back({{0, 0, 0}, {2, 2, 2}, true});
  spec.blocks.push_back({{1, 1, 1}, {3, 3, 3}, true});
  CHECK_THROWS_AS(resolve_blocks(spec), std::invalid_argument);
}

TEST_CASE("assembly cost: window applications linear in L") {
  ExpSum es = expsum_for_interval(0.25, 40.0, 1e-4);
  std::array<index_t, 2> ops{};
  int i = 0;
  for (index_t l : {4, 8}) {
    LatticeSpec spec = cubic_spec(l, 2.0, 8);
    Grid3 g = lattice_grid(spec);
    KernelTensor ref = kernel_tensor(g, es, true);
    auto sum = lattice_sum_canonical(spec, g, ref);
    CHECK(sum.window_ops == 3 * l);  // one window per axis per node index
    ops[i++] = sum.window_ops;
  }
  CHECK(ops[1] == 2 * ops[0]);
}

TEST_CASE("direct energy oracle: pair convention, scaling, guard") {
  LatticeSpec two;
  two.counts = {2, 1, 1};
  two.spacing = 2.0;
  CHECK(direct_energy_oracle(two) == doctest::Approx(0.5).epsilon(1e-15));

  LatticeSpec a = cubic_spec(3, 1.5, 8);
  LatticeSpec b = cubic_spec(3, 3.0, 8);
  CHECK(direct_energy_oracle(b) == doctest::Approx(0.5 * direct_energy_oracle(a)).epsilon(1e-13));

  LatticeSpec big = cubic_spec(8, 2.0, 8);
  CHECK_THROWS_AS(direct_energy_oracle(big, 1000), std::invalid_argument);
}

TEST_CASE("tensor interaction energy matches the direct sum") {
  for (index_t l : {2, 4}) {
    LatticeSpec spec = cubic_spec(l, 2.0, 32);
    const double rmax = std::sqrt(3.0) * (l - 1) * spec.spacing + 2.0;
    ExpSum es = expsum_for_interval(spec.spacing, std::max(rmax, 4.0), 1e-6);
    LatticeEnergyResult res = lattice_interaction_energy(spec, es);
    const double direct = direct_energy_oracle(spec);
    CHECK(res.energy == doctest::Approx(direct).epsilon(1e-5));
  }
  // L=(2,1,1), Z=1, b=2: exactly one pair at distance 2
  LatticeSpec pair;
  pair.counts = {2, 1, 1};
  pair.spacing = 2.0;
  pair.n0 = 128;
  ExpSum es = expsum_for_interval(1.5, 4.0, 1e-7);
  CHECK(lattice_interaction_energy(pair, es).energy == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("energy evaluator is insensitive to the box margin") {
  LatticeSpec spec = cubic_spec(3, 2.0, 32);
  ExpSum es = expsum_for_interval(2.0, 9.0, 1e-7);
  const double e1 = lattice_interaction_energy(spec, es).energy;
  spec.margin_cells = 3;
  const double e2 = lattice_interaction_energy(spec, es).energy;
  CHECK(e1 == doctest::Approx(e2).epsilon(1e-10));
}

TEST_CASE("traced factors equal the materialized doubled reference") {
  LatticeSpec spec = cubic_spec(3, 2.0, 8);
  Grid3 g = lattice_grid(spec);
  ExpSum es = expsum_for_interval(1.0, 10.0, 1e-5);
  KernelTensor ref = kernel_tensor(g, es, true);
  // lattice positions are doubled-grid nodes spaced n0 apart
  for (index_t q = 0; q < std::min<index_t>(ref.rank(), 7); ++q)
    for (index_t j = 0; j < 2 * spec.counts[0] - 1; ++j) {
      const double y = (static_cast<double>(j) - (spec.counts[0] - 1)) * spec.spacing;
      const index_t jj = (g.n[0] - 1) + static_cast<index_t>(std::llround(y / g.h[0]));
      const double direct = std::cbrt(es.weights[q]) *
                            gauss_cell_integral(std::abs(es.nodes[q]), y, g.h[0]);
      CHECK(ref.tensor.factor[0](jj, q) == doctest::Approx(direct).epsilon(1e-13));
    }
}

}  // TEST_SUITE
