#pragma once

#include <functional>
#include <vector>

#include "tengrid/basis.hpp"
#include "tengrid/kernel.hpp"

namespace tg {

/// Diagonally pivoted Cholesky with on-demand columns.
struct PivotedCholesky {
  Eigen::MatrixXd factor;        // n x rank, A ~ factor * factor^T
  std::vector<index_t> pivots;
  double residual = 0.0;         // stopping measure at exit (see stop rule)
  bool clamped_negative = false; // slightly negative diagonals were zeroed
};

enum class CholeskyStop {
  max_diagonal,  // stop when max remaining diagonal <= tol * initial max
  trace          // stop when sum of remaining diagonal <= tol * initial sum
};

/// `column(j)` must return column j of the SPD matrix; `diagonal` its diagonal.
/// Diagonals below -negative_tol * (initial max) abort with a diagnostic;
/// milder negatives are clamped to zero.
PivotedCholesky pivoted_cholesky(const std::function<Eigen::VectorXd(index_t)>& column,
                                 Eigen::VectorXd diagonal, double tol, CholeskyStop stop,
                                 index_t max_rank, double negative_tol);

/// Factorized two-electron-integral pipeline over the primitive product basis.
///
/// Primitive pairs are indexed (p,q) -> p + n_prim*q, contracted pairs
/// (mu,nu) -> mu + n_b*nu; the contraction map carries the product of
/// contraction weights.  B is never materialized: entries, columns and the
/// diagonal are assembled from the per-axis fitting factors and the
/// quadrature-term convolution matrices.
struct TEIFactorization {
  index_t n_b = 0;
  index_t n_prim = 0;
  std::vector<index_t> owner;            // primitive -> contracted function
  Eigen::VectorXd prim_weight;           // contraction coefficient * primitive norm
  std::array<double, 3> h{};             // mesh, kernel h-weight for the 1D convolutions

  std::array<Eigen::MatrixXd, 3> fit_u;  // n x R_l, orthonormal columns
  std::array<Eigen::MatrixXd, 3> fit_v;  // n_prim^2 x R_l
  std::array<double, 3> fit_residual{};  // ||G - U V^T||_F / ||G||_F per axis
  std::vector<std::array<Eigen::MatrixXd, 3>> conv;  // M_k^(l), R_l x R_l

  Eigen::MatrixXd chol;                  // N_b^2 x R_B
  double eps_fit = 0.0;
  double eps_chol = 0.0;
  bool fit_clamped_negative = false;

  std::array<index_t, 3> fit_ranks() const { return {fit_u[0].cols(), fit_u[1].cols(), fit_u[2].cols()}; }
  index_t rank_b() const { return chol.cols(); }
};

/// Steps of the pipeline, exposed separately for testing.
void tei_density_fitting(TEIFactorization& fac, const BasisSet& bs,
                         const std::vector<CanonicalTensor3>& disc, double eps_fit);
void tei_convolution_matrices(TEIFactorization& fac, const KernelTensor& kernel);

double tei_matrix_entry(const TEIFactorization& fac, index_t mu, index_t nu, index_t kappa, index_t lambda);
Eigen::VectorXd tei_column(const TEIFactorization& fac, index_t pair_index);
Eigen::VectorXd tei_diagonal(const TEIFactorization& fac);
void tei_cholesky(TEIFactorization& fac, double eps_chol);

/// Full pipeline: 1D density fitting -> convolution matrices -> pivoted
/// Cholesky of the TEI matrix.  `kernel` must live on the primary grid.
TEIFactorization build_tei(const BasisSet& bs, const std::vector<CanonicalTensor3>& disc,
                           const KernelTensor& kernel, double eps_fit, double eps_chol);

/// Coulomb and exchange matrices from the Cholesky factor:
/// vec(J) = L (L^T vec D),  K = -1/2 sum_s M_s D M_s^T with M_s = mat(L_s).
Eigen::MatrixXd coulomb_from_factors(const Eigen::MatrixXd& chol, const Eigen::MatrixXd& density);
Eigen::MatrixXd exchange_from_factors(const Eigen::MatrixXd& chol, const Eigen::MatrixXd& density);
Eigen::MatrixXd fock_from_factors(const Eigen::MatrixXd& h_core, const Eigen::MatrixXd& chol,
                                  const Eigen::MatrixXd& density);

}  // namespace tg
