#pragma once

#include <optional>
#include <vector>

#include "tengrid/basis.hpp"
#include "tengrid/kernel.hpp"
#include "tengrid/reduction.hpp"
#include "tengrid/tei.hpp"

namespace tg {

/// S_km = h^3 <G_k, G_m>; symmetric, positive definite for independent bases.
Eigen::MatrixXd overlap_matrix(const BasisSet& bs, const std::vector<CanonicalTensor3>& disc);

/// Kinetic matrix from the Kronecker FEM Laplacian: 1/2 h^2 <Delta_3 G_k, G_m>
/// with Delta_1 = (1/h) tridiag{-1, 2, -1} (lumped mass).  With `exact_mass`
/// the non-derivative axes use the P1 mass matrix (h/6) tridiag{1, 4, 1}.
Eigen::MatrixXd kinetic_matrix(const BasisSet& bs, const std::vector<CanonicalTensor3>& disc,
                               bool exact_mass = false);

/// Nuclear attraction from the shift-and-window assembly of the doubled-grid
/// reference kernel: V_c = -<G_k . G_m, P_c>, P_c = sum_a Z_a W_a Ptilde.
/// Negative (attractive) by convention; nuclei must snap to grid nodes.
Eigen::MatrixXd nuclear_matrix(const BasisSet& bs, const std::vector<CanonicalTensor3>& disc,
                               const Molecule& mol, const KernelTensor& reference);

/// Assembled nuclear potential tensor (rank = #nuclei * kernel rank).
CanonicalTensor3 nuclear_potential_tensor(const BasisSet& bs, const Molecule& mol,
                                          const KernelTensor& reference);

/// Electron density tensor Theta = 2 sum_a (phi_a . phi_a), rank-reduced to
/// the given tolerance.  C must be S-orthonormal over the occupied columns.
CanonicalTensor3 density_tensor(const std::vector<CanonicalTensor3>& disc, const Eigen::MatrixXd& c_occ,
                                double reduce_eps = 1e-7);

/// Hartree potential V_H = Theta * P_R by tensor-product convolution; the
/// result holds pointwise potential values on the grid.
CanonicalTensor3 hartree_potential(const CanonicalTensor3& theta, const KernelTensor& kernel,
                                   const std::array<double, 3>& h);

/// J_km = h^3 <G_k . G_m, V_H>.
Eigen::MatrixXd coulomb_matrix(const BasisSet& bs, const std::vector<CanonicalTensor3>& disc,
                               const CanonicalTensor3& v_hartree);

/// Exchange by one convolution per (orbital, m) pair:
/// K_km = sum_a h^3 <G_k . phi_a, (G_m . phi_a) * P_R>.
/// Positive-sum convention; the -1/2 enters at Fock assembly.
Eigen::MatrixXd exchange_matrix(const BasisSet& bs, const std::vector<CanonicalTensor3>& disc,
                                const Eigen::MatrixXd& c_occ, const KernelTensor& kernel);

double nuclear_repulsion(const Molecule& mol);

struct SCFConfig {
  int max_iterations = 60;
  double energy_tol = 1e-9;
  double mixing = 0.7;           // D <- mixing * D_new + (1 - mixing) * D
  double eps_fit = 1e-8;
  double eps_chol = 1e-10;
  double kernel_eps = 1e-6;      // quadrature accuracy for the Newton kernel
  double kernel_r_max = 0.0;     // 0: derived from the box
  double density_reduce_eps = 1e-7;
  bool exact_mass_kinetic = false;
};

struct SCFState {
  Eigen::MatrixXd coefficients;   // full N_b x N_b eigenvector set
  Eigen::VectorXd orbital_energies;
  Eigen::MatrixXd density;        // 2 C_occ C_occ^T (C_occ C_occ^T for one electron)
  int n_occupied = 0;
  double energy = 0.0;
  double nuclear_energy = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> energy_history;
  std::vector<double> residual_history;     // ||F D S - S D F||_F
  std::vector<double> orthonormality_defects;  // max |C^T S C - I|

  Eigen::MatrixXd overlap;
  Eigen::MatrixXd core_hamiltonian;
  Eigen::MatrixXd kinetic;
  Eigen::MatrixXd nuclear;
  std::optional<TEIFactorization> tei;
  Molecule snapped;               // nuclei at their grid nodes
};

/// Restricted closed-shell SCF on the grid: F(D) C = S C Lambda solved by
/// Cholesky congruence, aufbau occupation, linear density mixing, core
/// Hamiltonian (D = 0) start.  A single-electron system keeps F = H_core.
SCFState scf_solve(const Molecule& mol, const BasisSet& bs, const SCFConfig& cfg = {});

/// Generalized symmetric eigenproblem F C = S C diag(e) via the Cholesky
/// congruence of S; columns are S-orthonormal.
void generalized_eigensolve(const Eigen::MatrixXd& f, const Eigen::MatrixXd& s,
                            Eigen::MatrixXd& c, Eigen::VectorXd& e);

}  // namespace tg
