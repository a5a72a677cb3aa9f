#include "tengrid/mp2.hpp"

#include <cmath>

namespace tg {

MOCholesky mo_transform_cholesky(const Eigen::MatrixXd& chol, const MOSpace& mos) {
  const index_t nb = mos.n_basis();
  require(chol.rows() == nb * nb, "mo_transform_cholesky: factor/basis shape mismatch");
  const index_t n_occ = mos.n_occ;
  const index_t n_vir = mos.n_virtual();
  const Eigen::MatrixXd c_occ = mos.coefficients.leftCols(n_occ);
  const Eigen::MatrixXd c_vir = mos.coefficients.rightCols(n_vir);
  MOCholesky out;
  out.n_occ = n_occ;
  out.n_vir = n_vir;
  out.factor = Eigen::MatrixXd(n_occ * n_vir, chol.cols());
  for (index_t s = 0; s < chol.cols(); ++s) {
    const Eigen::Map<const Eigen::MatrixXd> m(chol.col(s).data(), nb, nb);
    const Eigen::MatrixXd b = c_occ.transpose() * m * c_vir;  // n_occ x n_vir
    for (index_t i = 0; i < n_occ; ++i)
      for (index_t a = 0; a < n_vir; ++a) out.factor(i * n_vir + a, s) = b(i, a);
  }
  return out;
}

ReciprocalExpSum energy_denominator_expsum(const MOSpace& mos, double eps) {
  const double gap = mos.gap();
  require(gap > 0.0, "energy_denominator_expsum: non-positive homo-lumo gap");
  const double spread = mos.energies[mos.n_basis() - 1] - mos.energies[0];
  const double lo = 2.0 * gap;
  const double hi = std::max(2.0 * spread, lo);
  ReciprocalExpSum rs = reciprocal_expsum(lo, hi, eps);
  if (!rs.ok)
    throw NumericalError("energy_denominator_expsum: tolerance unattainable within the term cap");
  return rs;
}

namespace {

double mp2_oracle(const MOCholesky& mo, const MOSpace& mos) {
  const index_t n_occ = mo.n_occ, n_vir = mo.n_vir;
  const Eigen::MatrixXd v = mo.factor * mo.factor.transpose();  // N_ov x N_ov
  double e = 0.0;
  for (index_t i = 0; i < n_occ; ++i)
    for (index_t j = 0; j < n_occ; ++j)
      for (index_t a = 0; a < n_vir; ++a)
        for (index_t b = 0; b < n_vir; ++b) {
          const double denom = mos.energies[mos.n_occ + a] + mos.energies[mos.n_occ + b] -
                               mos.energies[i] - mos.energies[j];
          const double v_iajb = v(i * n_vir + a, j * n_vir + b);
          const double v_ibja = v(i * n_vir + b, j * n_vir + a);
          e -= v_iajb * (2.0 * v_iajb - v_ibja) / denom;
        }
  return e;
}

double mp2_factorized(const MOCholesky& mo, const MOSpace& mos, double eps) {
  const ReciprocalExpSum rs = energy_denominator_expsum(mos, eps);
  const index_t n_occ = mo.n_occ, n_vir = mo.n_vir, rb = mo.factor.cols();
  // per-column views of L_V as n_occ x n_vir matrices
  std::vector<Eigen::MatrixXd> ls(rb);
  for (index_t s = 0; s < rb; ++s) {
    ls[s] = Eigen::MatrixXd(n_occ, n_vir);
    for (index_t i = 0; i < n_occ; ++i)
      for (index_t a = 0; a < n_vir; ++a) ls[s](i, a) = mo.factor(i * n_vir + a, s);
  }
  double e = 0.0;
  Eigen::MatrixXd d(n_occ, n_vir);
  for (index_t k = 0; k < rs.terms(); ++k) {
    const double lam = rs.rates[k];
    for (index_t i = 0; i < n_occ; ++i)
      for (index_t a = 0; a < n_vir; ++a)
        d(i, a) = std::exp(-lam * (mos.energies[mos.n_occ + a] - mos.energies[i]));
    // direct part: 2 * || L_V^T diag(d) L_V ||_F^2
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(rb, rb);
    for (index_t s = 0; s < rb; ++s) {
      const Eigen::MatrixXd lsd = ls[s].cwiseProduct(d);
      for (index_t t = 0; t < rb; ++t) gram(s, t) = (lsd.cwiseProduct(ls[t])).sum();
    }
    const double direct = gram.squaredNorm();
    // exchange part: sum_st tr(Y_st Y_st), Y_st = (L_s . d)^T L_t over occupied
    double exch = 0.0;
    for (index_t s = 0; s < rb; ++s) {
      const Eigen::MatrixXd lsd = ls[s].cwiseProduct(d);
      for (index_t t = 0; t < rb; ++t) {
        const Eigen::MatrixXd y = lsd.transpose() * ls[t];  // n_vir x n_vir
        exch += y.cwiseProduct(y.transpose()).sum();
      }
    }
    e -= rs.weights[k] * (2.0 * direct - exch);
  }
  return e;
}

}  // namespace

double mp2_energy(const MOCholesky& mo, const MOSpace& mos, MP2Mode mode, double expsum_eps) {
  require(mo.n_occ == mos.n_occ && mo.n_vir == mos.n_virtual(), "mp2_energy: MO space mismatch");
  if (mos.gap() <= 0.0)
    throw NumericalError("mp2_energy: non-positive homo-lumo gap, denominator may vanish");
  return mode == MP2Mode::oracle ? mp2_oracle(mo, mos) : mp2_factorized(mo, mos, expsum_eps);
}

}  // namespace tg
