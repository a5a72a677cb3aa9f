#pragma once

#include "tengrid/kernel.hpp"
#include "tengrid/tei.hpp"

namespace tg {

/// Molecular-orbital space from a converged SCF: full coefficient set and
/// orbital energies ascending, occupied indices 0..n_occ-1.
struct MOSpace {
  Eigen::MatrixXd coefficients;  // N_b x N_b
  Eigen::VectorXd energies;      // ascending
  index_t n_occ = 0;

  index_t n_basis() const { return energies.size(); }
  index_t n_virtual() const { return n_basis() - n_occ; }
  index_t n_ov() const { return n_occ * n_virtual(); }

  double gap() const {
    require(n_occ >= 1 && n_virtual() >= 1, "MOSpace: need occupied and virtual orbitals");
    return energies[n_occ] - energies[n_occ - 1];
  }
};

/// MO-transformed Cholesky factor: V = L_V L_V^T with rows indexed by the
/// compound index ia = i * N_v + (a - n_occ).
struct MOCholesky {
  Eigen::MatrixXd factor;  // N_ov x R_B
  index_t n_occ = 0;
  index_t n_vir = 0;

  double entry(index_t i, index_t a, index_t j, index_t b) const {
    return factor.row(i * n_vir + a).dot(factor.row(j * n_vir + b));
  }
};

/// Congruence transform of each Cholesky column: mat(L_s) -> C_occ^T mat(L_s) C_vir.
MOCholesky mo_transform_cholesky(const Eigen::MatrixXd& chol, const MOSpace& mos);

enum class MP2Mode { oracle, factorized };

/// Second-order energy correction
///   E = -sum v_iajb (2 v_iajb - v_ibja) / (e_a + e_b - e_i - e_j),
/// either by direct summation with exact denominators (oracle) or through the
/// separable exponential-sum representation of the reciprocal denominator
/// (factorized).  Requires a positive homo-lumo gap.
double mp2_energy(const MOCholesky& mo, const MOSpace& mos, MP2Mode mode = MP2Mode::oracle,
                  double expsum_eps = 1e-9);

/// Exponential sum for 1/x over the denominator range [2*gap, 2*spread].
ReciprocalExpSum energy_denominator_expsum(const MOSpace& mos, double eps);

}  // namespace tg
