#include "tengrid/hf.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace tg {

namespace {

double cell_volume(const Grid3& g) { return g.h[0] * g.h[1] * g.h[2]; }

/// u^T tridiag{-1,2,-1} v (Dirichlet truncation at the box boundary).
double stencil_form(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const index_t n = u.size();
  double s = 0.0;
  for (index_t i = 0; i < n; ++i) {
    double av = 2.0 * v[i];
    if (i > 0) av -= v[i - 1];
    if (i + 1 < n) av -= v[i + 1];
    s += u[i] * av;
  }
  return s;
}

/// u^T tridiag{1,4,1} v / 6 (P1 mass matrix without the h factor).
double mass_form(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const index_t n = u.size();
  double s = 0.0;
  for (index_t i = 0; i < n; ++i) {
    double av = 4.0 * v[i];
    if (i > 0) av += v[i - 1];
    if (i + 1 < n) av += v[i + 1];
    s += u[i] * av;
  }
  return s / 6.0;
}

CanonicalTensor3 orbital_tensor(const std::vector<CanonicalTensor3>& disc, const Eigen::VectorXd& coeff) {
  CanonicalTensor3 phi = CanonicalTensor3::zero(disc[0].extents());
  for (index_t k = 0; k < static_cast<index_t>(disc.size()); ++k) {
    if (coeff[k] == 0.0) continue;
    phi = add(phi, scale(disc[k], coeff[k]));
  }
  return phi;
}

}  // namespace

Eigen::MatrixXd overlap_matrix(const BasisSet& bs, const std::vector<CanonicalTensor3>& disc) {
  const index_t nb = static_cast<index_t>(disc.size());
  const double vol = cell_volume(bs.grid);
  Eigen::MatrixXd s(nb, nb);
  for (index_t k = 0; k < nb; ++k)
    for (index_t m = k; m < nb; ++m) {
      s(k, m) = vol * scalar_product(disc[k], disc[m]);
      s(m, k) = s(k, m);
    }
  return s;
}

Eigen::MatrixXd kinetic_matrix(const BasisSet& bs, const std::vector<CanonicalTensor3>& disc, bool exact_mass) {
  const index_t nb = static_cast<index_t>(disc.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(nb, nb);
  for (index_t k = 0; k < nb; ++k)
    for (index_t m = k; m < nb; ++m) {
      const CanonicalTensor3& a = disc[k];
      const CanonicalTensor3& b = disc[m];
      double sum = 0.0;
      for (index_t i = 0; i < a.rank(); ++i)
        for (index_t j = 0; j < b.rank(); ++j) {
          const double w = a.weight[i] * b.weight[j];
          std::array<double, 3> stiff{}, mass{};
          for (int ax = 0; ax < 3; ++ax) {
            const auto& u = a.factor[ax].col(i);
            const auto& v = b.factor[ax].col(j);
            stiff[ax] = stencil_form(u, v) / bs.grid.h[ax];
            mass[ax] = exact_mass ? bs.grid.h[ax] * mass_form(u, v) : bs.grid.h[ax] * u.dot(v);
          }
          for (int ax = 0; ax < 3; ++ax)
            sum += w * stiff[ax] * mass[(ax + 1) % 3] * mass[(ax + 2) % 3];
        }
      t(k, m) = 0.5 * sum;
      t(m, k) = t(k, m);
    }
  return t;
}

CanonicalTensor3 nuclear_potential_tensor(const BasisSet& bs, const Molecule& mol,
                                          const KernelTensor& reference) {
  require(reference.doubled, "nuclear_potential_tensor: reference kernel must live on the doubled grid");
  CanonicalTensor3 pc = CanonicalTensor3::zero({bs.grid.n[0], bs.grid.n[1], bs.grid.n[2]});
  for (const auto& nuc : mol.nuclei) {
    const WindowMap w = window_for_center(bs.grid, nuc.center);
    CanonicalTensor3 shifted;
    shifted.weight = nuc.charge * reference.tensor.weight;
    for (int ax = 0; ax < 3; ++ax)
      shifted.factor[ax] = reference.tensor.factor[ax].middleRows(w.offset[ax], bs.grid.n[ax]);
    pc = add(pc, shifted);
  }
  return pc;
}

Eigen::MatrixXd nuclear_matrix(const BasisSet& bs, const std::vector<CanonicalTensor3>& disc,
                               const Molecule& mol, const KernelTensor& reference) {
  const CanonicalTensor3 pc = nuclear_potential_tensor(bs, mol, reference);
  const index_t nb = static_cast<index_t>(disc.size());
  Eigen::MatrixXd v(nb, nb);
  for (index_t k = 0; k < nb; ++k)
    for (index_t m = k; m < nb; ++m) {
      // kernel entries carry the h^3 cell weight, so no extra volume factor
      v(k, m) = -scalar_product(hadamard(disc[k], disc[m]), pc);
      v(m, k) = v(k, m);
    }
  return v;
}

CanonicalTensor3 density_tensor(const std::vector<CanonicalTensor3>& disc, const Eigen::MatrixXd& c_occ,
                                double reduce_eps) {
  require(!disc.empty(), "density_tensor: empty basis");
  require(c_occ.rows() == static_cast<index_t>(disc.size()), "density_tensor: coefficient shape mismatch");
  CanonicalTensor3 theta = CanonicalTensor3::zero(disc[0].extents());
  for (index_t a = 0; a < c_occ.cols(); ++a) {
    const CanonicalTensor3 phi = orbital_tensor(disc, c_occ.col(a));
    theta = add(theta, scale(hadamard(phi, phi), 2.0));
  }
  if (theta.rank() <= 1 || reduce_eps <= 0.0) return theta;
  return reduce_rank(theta, ReductionConfig::tolerance(reduce_eps));
}

CanonicalTensor3 hartree_potential(const CanonicalTensor3& theta, const KernelTensor& kernel,
                                   const std::array<double, 3>& h) {
  require(!kernel.doubled, "hartree_potential: kernel must live on the primary grid");
  // kernel entries are cell integrals (~h^3 * pointwise); the h^3 of the
  // convolution weight must therefore be cancelled once
  const double inv_vol = 1.0 / (h[0] * h[1] * h[2]);
  return convolve(theta, scale(kernel.tensor, inv_vol), h);
}

Eigen::MatrixXd coulomb_matrix(const BasisSet& bs, const std::vector<CanonicalTensor3>& disc,
                               const CanonicalTensor3& v_hartree) {
  const index_t nb = static_cast<index_t>(disc.size());
  const double vol = cell_volume(bs.grid);
  Eigen::MatrixXd j(nb, nb);
  for (index_t k = 0; k < nb; ++k)
    for (index_t m = k; m < nb; ++m) {
      j(k, m) = vol * scalar_product(hadamard(disc[k], disc[m]), v_hartree);
      j(m, k) = j(k, m);
    }
  return j;
}

Eigen::MatrixXd exchange_matrix(const BasisSet& bs, const std::vector<CanonicalTensor3>& disc,
                                const Eigen::MatrixXd& c_occ, const KernelTensor& kernel) {
  require(!kernel.doubled, "exchange_matrix: kernel must live on the primary grid");
  const index_t nb = static_cast<index_t>(disc.size());
  const double vol = cell_volume(bs.grid);
  const double inv_vol = 1.0 / vol;
  Eigen::MatrixXd k_mat = Eigen::MatrixXd::Zero(nb, nb);
  for (index_t a = 0; a < c_occ.cols(); ++a) {
    const CanonicalTensor3 phi = orbital_tensor(disc, c_occ.col(a));
    std::vector<CanonicalTensor3> g_phi(nb);
    for (index_t m = 0; m < nb; ++m) g_phi[m] = hadamard(disc[m], phi);
    for (index_t m = 0; m < nb; ++m) {
      const CanonicalTensor3 v_m = convolve(g_phi[m], scale(kernel.tensor, inv_vol), bs.grid.h);
      for (index_t k = 0; k < nb; ++k) k_mat(k, m) += vol * scalar_product(g_phi[k], v_m);
    }
  }
  return 0.5 * (k_mat + k_mat.transpose());
}

double nuclear_repulsion(const Molecule& mol) {
  double e = 0.0;
  for (std::size_t a = 0; a < mol.nuclei.size(); ++a)
    for (std::size_t b = a + 1; b < mol.nuclei.size(); ++b) {
      double r2 = 0.0;
      for (int ax = 0; ax < 3; ++ax) {
        const double d = mol.nuclei[a].center[ax] - mol.nuclei[b].center[ax];
        r2 += d * d;
      }
      require(r2 > 0.0, "nuclear_repulsion: coincident nuclei");
      e += mol.nuclei[a].charge * mol.nuclei[b].charge / std::sqrt(r2);
    }
  return e;
}

void generalized_eigensolve(const Eigen::MatrixXd& f, const Eigen::MatrixXd& s,
                            Eigen::MatrixXd& c, Eigen::VectorXd& e) {
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success)
    throw NumericalError("generalized_eigensolve: overlap not positive definite (basis near-dependence)");
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd f_t = l.triangularView<Eigen::Lower>().solve(
      l.triangularView<Eigen::Lower>().solve(f.transpose()).transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (f_t + f_t.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("generalized_eigensolve: eigensolver failed");
  e = es.eigenvalues();
  c = l.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
}

SCFState scf_solve(const Molecule& mol, const BasisSet& bs, const SCFConfig& cfg) {
  require(!mol.nuclei.empty(), "scf_solve: no nuclei");
  require(mol.n_electrons >= 1, "scf_solve: no electrons");
  SCFState st;
  const index_t nb = bs.size();
  const int n_occ = mol.n_occupied();
  require(n_occ <= nb, "scf_solve: more occupied orbitals than basis functions");
  st.n_occupied = n_occ;
  const bool one_electron = mol.n_electrons == 1;
  const double occ_scale = one_electron ? 1.0 : 2.0;

  // snap nuclei to grid nodes; all grid-side objects use the snapped geometry
  st.snapped = mol;
  for (auto& nuc : st.snapped.nuclei)
    for (int ax = 0; ax < 3; ++ax)
      nuc.center[ax] = bs.grid.coord(ax, snap_to_node(bs.grid, ax, nuc.center[ax]));
  st.nuclear_energy = st.snapped.nuclei.size() > 1 ? nuclear_repulsion(st.snapped) : 0.0;

  const auto disc = discretize_basis(bs);
  st.overlap = overlap_matrix(bs, disc);
  st.kinetic = kinetic_matrix(bs, disc, cfg.exact_mass_kinetic);

  const double h_min = std::min({bs.grid.h[0], bs.grid.h[1], bs.grid.h[2]});
  const double box_diag = 2.0 * std::sqrt(bs.grid.b_half[0] * bs.grid.b_half[0] +
                                          bs.grid.b_half[1] * bs.grid.b_half[1] +
                                          bs.grid.b_half[2] * bs.grid.b_half[2]);
  const double r_max = cfg.kernel_r_max > 0.0 ? cfg.kernel_r_max : box_diag;
  const ExpSum es = expsum_for_interval(1.5 * h_min, r_max, cfg.kernel_eps);
  const KernelTensor ref = kernel_tensor(bs.grid, es, true);
  st.nuclear = nuclear_matrix(bs, disc, st.snapped, ref);
  st.core_hamiltonian = st.kinetic + st.nuclear;

  if (!one_electron) {
    const KernelTensor kern = kernel_tensor(bs.grid, es, false);
    st.tei = build_tei(bs, disc, kern, cfg.eps_fit, cfg.eps_chol);
  }

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(nb, nb);
  double prev_energy = 0.0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const Eigen::MatrixXd f =
        one_electron ? st.core_hamiltonian : fock_from_factors(st.core_hamiltonian, st.tei->chol, d);
    generalized_eigensolve(f, st.overlap, st.coefficients, st.orbital_energies);

    Eigen::MatrixXd ortho = st.coefficients.transpose() * st.overlap * st.coefficients;
    ortho -= Eigen::MatrixXd::Identity(nb, nb);
    st.orthonormality_defects.push_back(ortho.cwiseAbs().maxCoeff());

    const Eigen::MatrixXd c_occ = st.coefficients.leftCols(n_occ);
    const Eigen::MatrixXd d_new = occ_scale * c_occ * c_occ.transpose();

    double energy = (d_new.cwiseProduct(st.core_hamiltonian)).sum() + st.nuclear_energy;
    if (!one_electron) {
      const Eigen::MatrixXd j = coulomb_from_factors(st.tei->chol, d_new);
      const Eigen::MatrixXd k = exchange_from_factors(st.tei->chol, d_new);
      energy += 0.5 * (d_new.cwiseProduct(j + k)).sum();
    }
    st.energy_history.push_back(energy);
    st.residual_history.push_back((f * d * st.overlap - st.overlap * d * f).norm());

    d = cfg.mixing * d_new + (1.0 - cfg.mixing) * d;
    st.density = d_new;
    st.energy = energy;
    st.iterations = it + 1;
    if (it > 0 && std::abs(energy - prev_energy) <= cfg.energy_tol) {
      st.converged = true;
      break;
    }
    prev_energy = energy;
  }
  return st;
}

}  // namespace tg
