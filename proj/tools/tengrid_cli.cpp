// tengrid command-line driver: kernel accuracy scans, Tucker decay curves,
// convolution benchmarks, grid Hartree-Fock runs, lattice energies and QTT
// rank tables, all emitted as CSV with a reproducibility header.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "tengrid/hf.hpp"
#include "tengrid/lattice.hpp"
#include "tengrid/mp2.hpp"
#include "tengrid/parallel.hpp"
#include "tengrid/qtt.hpp"
#include "tengrid/fft.hpp"
#include "tengrid/reduction.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using tg::index_t;
using clock_type = std::chrono::steady_clock;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct CsvWriter {
  std::ostream& out;

  void meta(const std::string& command, const std::string& config, std::uint64_t seed, int threads,
            const std::map<std::string, double>& tolerances) {
    out << "# tengrid version=" << kVersion << " command=" << command << " config_hash=" << std::hex
        << fnv1a(config) << std::dec << " seed=" << seed << " threads=" << threads << "\n";
    for (const auto& [k, v] : tolerances) out << "# tolerance " << k << "=" << fmt17(v) << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  }
};

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  if (path.empty()) return nullptr;
  auto f = std::make_unique<std::ofstream>(path);
  if (!f->good()) throw std::invalid_argument("cannot open output file: " + path);
  return f;
}

// ---- input files ----

struct ShellSpec {
  char type = 's';
  std::vector<tg::GaussianPrimitive> primitives;
};

std::map<int, std::vector<ShellSpec>> parse_basis_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::invalid_argument("cannot open basis file: " + path);
  std::map<int, std::vector<ShellSpec>> by_element;
  std::string line;
  int element = -1;
  int pending = 0;
  ShellSpec shell;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (pending > 0) {
      tg::GaussianPrimitive p;
      p.exponent = std::stod(tok);
      if (!(ls >> p.coeff))
        throw std::invalid_argument("basis file: primitive needs exponent and coefficient");
      shell.primitives.push_back(p);
      if (--pending == 0) by_element[element].push_back(shell);
      continue;
    }
    if (tok == "element") {
      if (!(ls >> element)) throw std::invalid_argument("basis file: element needs a charge number");
      continue;
    }
    if (tok == "s" || tok == "p") {
      if (element < 0) throw std::invalid_argument("basis file: shell before any element");
      shell = ShellSpec{tok[0], {}};
      if (!(ls >> pending) || pending < 1) throw std::invalid_argument("basis file: bad primitive count");
      continue;
    }
    throw std::invalid_argument("basis file: unexpected token '" + tok + "'");
  }
  if (pending > 0) throw std::invalid_argument("basis file: truncated shell block");
  if (by_element.empty()) throw std::invalid_argument("basis file: no shells found");
  return by_element;
}

tg::Molecule parse_geometry_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::invalid_argument("cannot open geometry file: " + path);
  tg::Molecule mol;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    tg::Nucleus n;
    if (!(ls >> n.charge)) continue;
    if (!(ls >> n.center[0] >> n.center[1] >> n.center[2]))
      throw std::invalid_argument("geometry file: expected 'Z x y z'");
    if (n.charge <= 0) throw std::invalid_argument("geometry file: charge must be positive");
    mol.nuclei.push_back(n);
  }
  if (mol.nuclei.empty()) throw std::invalid_argument("geometry file: no nuclei");
  double total = 0.0;
  for (const auto& n : mol.nuclei) total += n.charge;
  mol.n_electrons = static_cast<int>(std::llround(total));
  return mol;
}

tg::BasisSet build_basis(const tg::Grid3& grid, const tg::Molecule& mol,
                         const std::map<int, std::vector<ShellSpec>>& shells) {
  tg::BasisSet bs;
  bs.grid = grid;
  for (const auto& nuc : mol.nuclei) {
    const int z = static_cast<int>(std::llround(nuc.charge));
    const auto it = shells.find(z);
    if (it == shells.end())
      throw std::invalid_argument("basis file: no shells for element " + std::to_string(z));
    for (const auto& shell : it->second) {
      if (shell.type == 's') {
        tg::SeparableBasisFunction f;
        f.center = nuc.center;
        f.primitives = shell.primitives;
        bs.functions.push_back(f);
      } else {
        for (int ax = 0; ax < 3; ++ax) {
          tg::SeparableBasisFunction f;
          f.center = nuc.center;
          f.degree[ax] = 1;
          f.primitives = shell.primitives;
          bs.functions.push_back(f);
        }
      }
    }
  }
  return bs;
}

void apply_config_file(const std::string& path, tg::SCFConfig& cfg) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in.good()) throw std::invalid_argument("cannot open config file: " + path);
  std::string key;
  double value;
  while (in >> key) {
    if (key[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (!(in >> value)) throw std::invalid_argument("config file: key without value: " + key);
    if (key == "max_iterations") cfg.max_iterations = static_cast<int>(value);
    else if (key == "energy_tol") cfg.energy_tol = value;
    else if (key == "mixing") cfg.mixing = value;
    else if (key == "eps_fit") cfg.eps_fit = value;
    else if (key == "eps_chol") cfg.eps_chol = value;
    else if (key == "kernel_eps") cfg.kernel_eps = value;
    else if (key == "density_reduce_eps") cfg.density_reduce_eps = value;
    else if (key == "exact_mass_kinetic") cfg.exact_mass_kinetic = value != 0.0;
    else throw std::invalid_argument("config file: unknown key: " + key);
  }
}

// ---- subcommands ----

int cmd_kernel(index_t n, double box, double eps, const std::string& out_path, std::uint64_t seed,
               int threads) {
  tg::Grid3 g = tg::make_grid(box, n);
  tg::ExpSum es = tg::expsum_for_interval(std::max(0.5, 2.0 * g.h[0]), 1.05 * box, eps);
  tg::KernelTensor kt = tg::kernel_tensor(g, es, false);
  const double hm3 = 1.0 / (g.h[0] * g.h[1] * g.h[2]);
  const index_t center = g.nearest_index(0, 0.0);

  auto file = open_out(out_path);
  CsvWriter csv{file ? *file : std::cout};
  csv.meta("kernel", "n=" + std::to_string(n) + " box=" + fmt17(box) + " eps=" + fmt17(eps), seed,
           threads, {{"eps", eps}});
  csv.row({"r", "exact", "approx", "rel_err"});
  double worst = 0.0;
  for (index_t i = center + 1; i < n; ++i) {
    const double r = g.coord(0, i);
    if (r < 0.5 || r > 0.95 * box) continue;
    const double exact = 1.0 / r;
    const double approx = hm3 * kt.tensor.value_at(i, center, center);
    const double rel = std::abs(approx - exact) / exact;
    worst = std::max(worst, rel);
    csv.row({fmt17(r), fmt17(exact), fmt17(approx), fmt17(rel)});
  }
  std::cerr << "kernel: rank=" << kt.rank() << " max_rel_err=" << fmt17(worst) << "\n";
  return worst <= 1e-4 ? 0 : 1;
}

int cmd_tucker_decay(const std::string& function, index_t n, index_t rmax,
                     const std::string& out_path, std::uint64_t seed, int threads) {
  tg::Grid3 g = tg::make_grid(8.0, n);
  auto sample = [&](double x, double y, double z) {
    const double r = std::sqrt(x * x + y * y + z * z);
    if (function == "slater") return std::exp(-r);
    return 1.0 / std::max(r, 0.5 * g.h[0]);  // newton, regularized at the origin cell
  };
  tg::DenseTensor3 single(n, n, n), lattice(n, n, n);
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < n; ++j)
      for (index_t k = 0; k < n; ++k) {
        const double x = g.coord(0, i), y = g.coord(1, j), z = g.coord(2, k);
        single(i, j, k) = sample(x, y, z);
        double s = 0.0;
        for (int a = 0; a < 8; ++a)
          for (int b = 0; b < 8; ++b)
            for (int c = 0; c < 8; ++c)
              s += sample(x - 1.5 * (a - 3.5), y - 1.5 * (b - 3.5), z - 1.5 * (c - 3.5));
        lattice(i, j, k) = s;
      }
  const index_t cap = std::min<index_t>(rmax, n);
  auto full1 = tg::hosvd(single, tg::ReductionConfig::fixed(cap, cap, cap));
  auto full2 = tg::hosvd(lattice, tg::ReductionConfig::fixed(cap, cap, cap));
  auto file = open_out(out_path);
  CsvWriter csv{file ? *file : std::cout};
  csv.meta("tucker-decay", "function=" + function + " n=" + std::to_string(n), seed, threads, {});
  csv.row({"r", "efn_single", "efn_lattice"});
  auto efn = [](const tg::DenseTensor3& a, const tg::TuckerResult& full, index_t r) {
    tg::TuckerTensor3 t;
    for (int ax = 0; ax < 3; ++ax) t.side[ax] = full.tucker.side[ax].leftCols(r);
    t.core = tg::DenseTensor3(r, r, r);
    for (index_t c = 0; c < r; ++c)
      for (index_t b = 0; b < r; ++b)
        for (index_t a2 = 0; a2 < r; ++a2) t.core(a2, b, c) = full.tucker.core(a2, b, c);
    return (tg::to_dense(t).data - a.data).norm() / a.data.norm();
  };
  double prev1 = 2.0, prev2 = 2.0, first1 = 0.0;
  bool monotone = true;
  for (index_t r = 1; r <= cap; ++r) {
    const double e1 = efn(single, full1, r), e2 = efn(lattice, full2, r);
    if (r == 1) first1 = e1;
    monotone = monotone && (e1 < prev1 + 1e-15) && (e2 < prev2 + 1e-15);
    prev1 = e1;
    prev2 = e2;
    csv.row({std::to_string(r), fmt17(e1), fmt17(e2)});
  }
  std::cerr << "tucker-decay: monotone=" << monotone << " efn_single(rmax)=" << fmt17(prev1)
            << "\n";
  return monotone && (function != "slater" || prev1 < first1 / 100.0) ? 0 : 1;
}

/// one dense 3D FFT convolution of n^3 arrays, for the comparison column
double time_dense_fft_conv(index_t n, std::mt19937& rng) {
  std::size_t p = 1;
  while (p < static_cast<std::size_t>(2 * n - 1)) p <<= 1;
  std::normal_distribution<double> d;
  std::vector<std::complex<double>> a(p * p * p, 0.0), b(p * p * p, 0.0);
  for (index_t i = 0; i < n * n * n; ++i) {
    a[i] = d(rng);
    b[i] = d(rng);
  }
  const auto t0 = clock_type::now();
  auto fft3 = [&](std::vector<std::complex<double>>& data, bool inverse) {
    std::vector<std::complex<double>> line(p);
    for (int ax = 0; ax < 3; ++ax)
      for (std::size_t u = 0; u < p; ++u)
        for (std::size_t v = 0; v < p; ++v) {
          for (std::size_t w = 0; w < p; ++w)
            line[w] = data[ax == 0 ? w + p * (u + p * v)
                                   : ax == 1 ? u + p * (w + p * v) : u + p * (v + p * w)];
          tg::fft_inplace(line, inverse);
          for (std::size_t w = 0; w < p; ++w)
            data[ax == 0 ? w + p * (u + p * v)
                         : ax == 1 ? u + p * (w + p * v) : u + p * (v + p * w)] = line[w];
        }
  };
  fft3(a, false);
  fft3(b, false);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  fft3(a, true);
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int cmd_conv_bench(index_t nmin, index_t nmax, const std::string& out_path, std::uint64_t seed,
                   int threads) {
  std::mt19937 rng(static_cast<unsigned>(seed));
  std::normal_distribution<double> d;
  auto file = open_out(out_path);
  CsvWriter csv{file ? *file : std::cout};
  csv.meta("conv-bench", "nmin=" + std::to_string(nmin) + " nmax=" + std::to_string(nmax), seed,
           threads, {});
  csv.row({"n", "seconds", "rank", "ratio", "seconds_dense_fft"});
  double prev = 0.0;
  bool ok = true;
  for (index_t n = nmin; n <= nmax; n *= 2) {
    tg::CanonicalTensor3 a, b;
    a.weight = b.weight = Eigen::VectorXd::Ones(2);
    for (int ax = 0; ax < 3; ++ax) {
      a.factor[ax] = Eigen::MatrixXd(n, 2);
      b.factor[ax] = Eigen::MatrixXd(n, 2);
      for (index_t i = 0; i < 2 * n; ++i) {
        a.factor[ax](i) = d(rng);
        b.factor[ax](i) = d(rng);
      }
    }
    // median of five batches, each long enough to dominate timer noise
    std::vector<double> batches;
    for (int batch = 0; batch < 5; ++batch) {
      int reps = 0;
      double elapsed = 0.0;
      const auto t0 = clock_type::now();
      do {
        volatile double sink = tg::convolve(a, b, 0.1).factor[0](0, 0);
        (void)sink;
        ++reps;
        elapsed = std::chrono::duration<double>(clock_type::now() - t0).count();
      } while (elapsed < 0.04);
      batches.push_back(elapsed / reps);
    }
    std::sort(batches.begin(), batches.end());
    const double per = batches[2];
    const double ratio = prev > 0.0 ? per / prev : 0.0;
    ok = ok && (prev == 0.0 || ratio <= 4.0);
    // the dense 3D FFT reference becomes memory-bound quickly; guard at n = 128
    std::string dense_col;
    if (n <= 128) {
      try {
        dense_col = fmt17(time_dense_fft_conv(n, rng));
      } catch (const std::bad_alloc&) {
        dense_col = "";
      }
    }
    csv.row({std::to_string(n), fmt17(per), "4", fmt17(ratio), dense_col});
    prev = per;
  }
  return ok ? 0 : 1;
}

int cmd_hf(const std::string& geometry, const std::string& basis, index_t n, double box,
           bool with_mp2, const std::string& config, const std::string& out_path,
           std::uint64_t seed, int threads) {
  tg::Molecule mol = parse_geometry_file(geometry);
  auto shells = parse_basis_file(basis);
  tg::Grid3 grid = tg::make_grid(box, n);
  tg::BasisSet bs = build_basis(grid, mol, shells);
  tg::SCFConfig cfg;
  apply_config_file(config, cfg);

  tg::SCFState st = tg::scf_solve(mol, bs, cfg);

  auto file = open_out(out_path);
  CsvWriter csv{file ? *file : std::cout};
  csv.meta("hf", "geometry=" + geometry + " basis=" + basis + " n=" + std::to_string(n), seed,
           threads,
           {{"energy_tol", cfg.energy_tol},
            {"eps_fit", cfg.eps_fit},
            {"eps_chol", cfg.eps_chol},
            {"kernel_eps", cfg.kernel_eps}});
  csv.row({"iteration", "energy", "delta_e", "residual", "orthonormality_defect"});
  for (std::size_t i = 0; i < st.energy_history.size(); ++i) {
    const double de = i ? st.energy_history[i] - st.energy_history[i - 1] : 0.0;
    csv.row({std::to_string(i + 1), fmt17(st.energy_history[i]), fmt17(de),
             fmt17(st.residual_history[i]), fmt17(st.orthonormality_defects[i])});
  }
  std::cerr << "hf: converged=" << st.converged << " iterations=" << st.iterations
            << " E_total=" << fmt17(st.energy) << " E_nn=" << fmt17(st.nuclear_energy) << "\n";
  if (with_mp2) {
    if (!st.tei) throw std::invalid_argument("hf --mp2: single-electron system has no correlation");
    tg::MOSpace mos{st.coefficients, st.orbital_energies, static_cast<index_t>(st.n_occupied)};
    tg::MOCholesky mo = tg::mo_transform_cholesky(st.tei->chol, mos);
    const double e2 = tg::mp2_energy(mo, mos, tg::MP2Mode::factorized, 1e-9);
    std::cerr << "hf: E_MP2=" << fmt17(e2) << " E_total+MP2=" << fmt17(st.energy + e2) << "\n";
  }
  return st.converged ? 0 : 1;
}

int cmd_lattice_energy(index_t l, double spacing, double charge, index_t n0, bool with_oracle,
                       const std::string& out_path, std::uint64_t seed, int threads) {
  tg::LatticeSpec spec;
  spec.counts = {l, l, l};
  spec.spacing = spacing;
  spec.charge = charge;
  spec.n0 = n0;
  const double rmax = std::max(4.0, std::sqrt(3.0) * static_cast<double>(l - 1) * spacing + 1.0);
  const auto t0 = clock_type::now();
  tg::ExpSum es = tg::expsum_for_interval(spacing, rmax, 1e-6);
  tg::LatticeEnergyResult res = tg::lattice_interaction_energy(spec, es);
  const double t_tensor = std::chrono::duration<double>(clock_type::now() - t0).count();

  auto file = open_out(out_path);
  CsvWriter csv{file ? *file : std::cout};
  csv.meta("lattice-energy",
           "L=" + std::to_string(l) + " spacing=" + fmt17(spacing) + " n0=" + std::to_string(n0),
           seed, threads, {{"kernel_eps", 1e-6}});
  csv.row({"quantity", "value"});
  csv.row({"energy_tensor", fmt17(res.energy)});
  csv.row({"kernel_rank", std::to_string(res.kernel_rank)});
  csv.row({"mesh", fmt17(res.mesh)});
  csv.row({"time_tensor_seconds", fmt17(t_tensor)});
  if (with_oracle) {
    const auto t1 = clock_type::now();
    const double direct = tg::direct_energy_oracle(spec);
    const double t_direct = std::chrono::duration<double>(clock_type::now() - t1).count();
    const double dev = std::abs(res.energy - direct) / std::abs(direct);
    csv.row({"energy_direct", fmt17(direct)});
    csv.row({"relative_deviation", fmt17(dev)});
    csv.row({"time_direct_seconds", fmt17(t_direct)});
    if (dev > 1e-4) return 1;
  }
  return 0;
}

int cmd_qtt_rank(const std::string& function, index_t levels, double eps,
                 const std::string& out_path, std::uint64_t seed, int threads) {
  std::mt19937 rng(static_cast<unsigned>(seed));
  const index_t n = index_t{1} << levels;
  Eigen::VectorXd x(n);
  std::uniform_real_distribution<double> uq(0.95, 1.001), uw(0.1, 2.8);
  if (function == "exp") {
    const double q = uq(rng);
    for (index_t i = 0; i < n; ++i) x[i] = std::pow(q, static_cast<double>(i));
  } else if (function == "sin") {
    const double w = uw(rng);
    for (index_t i = 0; i < n; ++i) x[i] = std::sin(w * i + 0.3);
  } else if (function == "poly") {
    for (index_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / n;
      x[i] = 1.0 + 2.0 * t - 3.0 * t * t + 0.5 * t * t * t;
    }
  } else {
    throw std::invalid_argument("qtt-rank: unknown function (use exp|sin|poly)");
  }
  tg::QuanticsImage img = tg::tt_decompose(x, eps);
  auto file = open_out(out_path);
  CsvWriter csv{file ? *file : std::cout};
  csv.meta("qtt-rank", "function=" + function + " L=" + std::to_string(levels), seed, threads,
           {{"eps", eps}});
  csv.row({"bond", "rank"});
  const auto ranks = img.ranks();
  for (std::size_t i = 0; i < ranks.size(); ++i)
    csv.row({std::to_string(i + 1), std::to_string(ranks[i])});
  csv.row({"storage", std::to_string(tt_storage(img))});
  const index_t expect = function == "exp" ? 1 : function == "sin" ? 2 : 4;
  return img.max_rank() <= expect ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tengrid: rank-structured tensor numerics on Cartesian grids"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_path;
  app.add_option("--seed", seed, "random seed for probe draws");
  app.add_option("--threads", threads, "worker threads (default 1, or TENGRID_THREADS)");
  app.add_option("--out", out_path, "CSV output file (default stdout)");

  index_t n = 255, rmax = 20, nmin = 128, nmax = 1024, lat_l = 8, n0 = 64, levels = 12;
  double box = 20.0, eps = 1e-6, spacing = 2.0, charge = 1.0;
  std::string function = "slater", geometry, basis, config;
  bool with_mp2 = false, with_oracle = false;

  auto* kernel = app.add_subcommand("kernel", "pointwise Newton-kernel error scan");
  kernel->add_option("--n", n, "grid points per axis")->required();
  kernel->add_option("--box", box, "box half-width (bohr)")->required();
  kernel->add_option("--eps", eps, "quadrature accuracy target")->required();

  auto* decay =
      app.add_subcommand("tucker-decay", "Tucker error vs rank for a potential and its lattice sum");
  decay->add_option("--function", function, "slater|newton")->required();
  decay->add_option("--n", n, "grid points per axis")->required();
  decay->add_option("--rmax", rmax, "largest Tucker rank");

  auto* bench = app.add_subcommand("conv-bench", "tensor convolution timing across grid doublings");
  bench->add_option("--nmin", nmin, "first grid size");
  bench->add_option("--nmax", nmax, "last grid size");

  auto* hf = app.add_subcommand("hf", "grid Hartree-Fock (optionally MP2)");
  hf->add_option("--geometry", geometry, "geometry file: lines 'Z x y z' in bohr")->required();
  hf->add_option("--basis", basis, "basis file: element blocks of s/p shells")->required();
  hf->add_option("--n", n, "grid points per axis")->required();
  hf->add_option("--box", box, "box half-width (bohr)")->required();
  hf->add_flag("--mp2", with_mp2, "append the MP2 correction");
  hf->add_option("--config", config, "key-value SCF settings file");

  auto* lattice = app.add_subcommand("lattice-energy", "interaction energy of a cubic lattice");
  lattice->add_option("--L", lat_l, "lattice count per axis")->required();
  lattice->add_option("--spacing", spacing, "lattice spacing (bohr)");
  lattice->add_option("--Z", charge, "charge per site");
  lattice->add_option("--n0", n0, "grid points per unit cell (even)");
  lattice->add_flag("--oracle", with_oracle, "also run the direct double sum");

  auto* qtt = app.add_subcommand("qtt-rank", "TT ranks of quantics-folded vectors");
  qtt->add_option("--function", function, "exp|sin|poly")->required();
  qtt->add_option("--L", levels, "levels (vector length 2^L)");
  qtt->add_option("--eps", eps, "truncation tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  tg::set_num_threads(threads);
  try {
    if (*kernel) return cmd_kernel(n, box, eps, out_path, seed, threads);
    if (*decay) return cmd_tucker_decay(function, n, rmax, out_path, seed, threads);
    if (*bench) return cmd_conv_bench(nmin, nmax, out_path, seed, threads);
    if (*hf) return cmd_hf(geometry, basis, n, box, with_mp2, config, out_path, seed, threads);
    if (*lattice)
      return cmd_lattice_energy(lat_l, spacing, charge, n0, with_oracle, out_path, seed, threads);
    if (*qtt) return cmd_qtt_rank(function, levels, eps, out_path, seed, threads);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
