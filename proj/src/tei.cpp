#include "tengrid/tei.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "tengrid/fft.hpp"

namespace tg {

namespace {

struct PairWeight {
  index_t prim_pair;
  double weight;
};

/// Nonzero entries of the contraction-map column for contracted pair (mu,nu).
std::vector<PairWeight> contraction_column(const TEIFactorization& fac, index_t mu, index_t nu) {
  std::vector<PairWeight> out;
  for (index_t p = 0; p < fac.n_prim; ++p) {
    if (fac.owner[p] != mu) continue;
    for (index_t q = 0; q < fac.n_prim; ++q) {
      if (fac.owner[q] != nu) continue;
      out.push_back({p + fac.n_prim * q, fac.prim_weight[p] * fac.prim_weight[q]});
    }
  }
  return out;
}

/// Column of the primitive-level TEI matrix: sum_k hadamard over axes of
/// fit_v * (M_k * fit_v.row(j)^T).
Eigen::VectorXd b_prim_column(const TEIFactorization& fac, index_t j) {
  const index_t np2 = fac.n_prim * fac.n_prim;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(np2);
  Eigen::VectorXd w0, w1, w2;
  for (const auto& mk : fac.conv) {
    w0 = fac.fit_v[0] * (mk[0] * fac.fit_v[0].row(j).transpose());
    w1 = fac.fit_v[1] * (mk[1] * fac.fit_v[1].row(j).transpose());
    w2 = fac.fit_v[2] * (mk[2] * fac.fit_v[2].row(j).transpose());
    out.array() += w0.array() * w1.array() * w2.array();
  }
  return out;
}

}  // namespace

PivotedCholesky pivoted_cholesky(const std::function<Eigen::VectorXd(index_t)>& column,
                                 Eigen::VectorXd diagonal, double tol, CholeskyStop stop,
                                 index_t max_rank, double negative_tol) {
  const index_t n = diagonal.size();
  PivotedCholesky res;
  const double max0 = diagonal.maxCoeff();
  const double trace0 = diagonal.sum();
  if (max0 <= 0.0) {
    res.factor = Eigen::MatrixXd(n, 0);
    res.residual = 0.0;
    return res;
  }
  Eigen::MatrixXd l(n, std::min(n, max_rank));
  index_t rank = 0;
  auto measure = [&] { return stop == CholeskyStop::max_diagonal ? diagonal.maxCoeff() : diagonal.sum(); };
  const double target = tol * (stop == CholeskyStop::max_diagonal ? max0 : trace0);
  while (rank < std::min(n, max_rank)) {
    index_t p = 0;
    const double dmax = diagonal.maxCoeff(&p);
    if ((stop == CholeskyStop::max_diagonal ? dmax : diagonal.sum()) <= target) break;
    if (dmax <= 0.0) break;
    Eigen::VectorXd col = column(p);
    if (rank > 0) col.noalias() -= l.leftCols(rank) * l.row(p).head(rank).transpose();
    const double piv = std::sqrt(dmax);
    l.col(rank) = col / piv;
    l(p, rank) = piv;  // pin the pivot entry against accumulated round-off
    diagonal.array() -= l.col(rank).array().square();
    diagonal[p] = 0.0;
    for (index_t i = 0; i < n; ++i) {
      if (diagonal[i] < 0.0) {
        if (diagonal[i] < -negative_tol * max0)
          throw NumericalError("pivoted_cholesky: negative diagonal beyond tolerance; matrix not PSD");
        diagonal[i] = 0.0;
        res.clamped_negative = true;
      }
    }
    res.pivots.push_back(p);
    ++rank;
  }
  res.factor = l.leftCols(rank);
  res.residual = measure() / (stop == CholeskyStop::max_diagonal ? max0 : trace0);
  return res;
}

void tei_density_fitting(TEIFactorization& fac, const BasisSet& bs,
                         const std::vector<CanonicalTensor3>& disc, double eps_fit) {
  require(!disc.empty(), "tei_density_fitting: empty basis");
  fac.n_b = static_cast<index_t>(disc.size());
  fac.eps_fit = eps_fit;
  for (int ax = 0; ax < 3; ++ax) fac.h[ax] = bs.grid.h[ax];

  // flatten (function, primitive) pairs
  fac.owner.clear();
  std::vector<double> weights;
  for (index_t f = 0; f < fac.n_b; ++f)
    for (index_t p = 0; p < disc[f].rank(); ++p) {
      fac.owner.push_back(f);
      weights.push_back(disc[f].weight[p]);
    }
  fac.n_prim = static_cast<index_t>(fac.owner.size());
  fac.prim_weight = Eigen::Map<const Eigen::VectorXd>(weights.data(), weights.size());

  for (int ax = 0; ax < 3; ++ax) {
    const index_t n = bs.grid.n[ax];
    Eigen::MatrixXd prim(n, fac.n_prim);
    index_t col = 0;
    for (index_t f = 0; f < fac.n_b; ++f)
      for (index_t p = 0; p < disc[f].rank(); ++p) prim.col(col++) = disc[f].factor[ax].col(p);

    // product side matrix G: column (p,q) = prim_p .* prim_q
    Eigen::MatrixXd g(n, fac.n_prim * fac.n_prim);
    for (index_t q = 0; q < fac.n_prim; ++q)
      for (index_t p = 0; p < fac.n_prim; ++p)
        g.col(p + fac.n_prim * q) = prim.col(p).cwiseProduct(prim.col(q));

    // truncated Cholesky of the n x n Gram G G^T selects the column space
    const Eigen::MatrixXd gram = g * g.transpose();
    PivotedCholesky pc;
    try {
      pc = pivoted_cholesky([&](index_t j) { return Eigen::VectorXd(gram.col(j)); },
                            gram.diagonal(), eps_fit * eps_fit, CholeskyStop::trace,
                            std::min(n, fac.n_prim * fac.n_prim), 1e-12);
    } catch (const NumericalError&) {
      throw NumericalError("tei_density_fitting: Gram matrix indefinite beyond tolerance");
    }
    fac.fit_clamped_negative = fac.fit_clamped_negative || pc.clamped_negative;

    // orthonormalize the selected columns; U = Q, V = G^T Q
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(pc.factor);
    const index_t r = pc.factor.cols();
    fac.fit_u[ax] = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
    fac.fit_v[ax] = g.transpose() * fac.fit_u[ax];
    fac.fit_residual[ax] =
        (g - fac.fit_u[ax] * fac.fit_v[ax].transpose()).norm() / std::max(g.norm(), 1e-300);
  }
}

void tei_convolution_matrices(TEIFactorization& fac, const KernelTensor& kernel) {
  require(!kernel.doubled, "tei_convolution_matrices: kernel must live on the primary grid");
  const index_t r_kernel = kernel.rank();
  fac.conv.assign(r_kernel, {});
  for (int ax = 0; ax < 3; ++ax) {
    require(kernel.tensor.extent(ax) == fac.fit_u[ax].rows(),
            "tei_convolution_matrices: kernel grid mismatch");
    for (index_t k = 0; k < r_kernel; ++k) {
      const Eigen::MatrixXd conv_cols =
          fac.h[ax] * conv_central_many(fac.fit_u[ax], kernel.tensor.factor[ax].col(k));
      fac.conv[k][ax] = fac.fit_u[ax].transpose() * conv_cols;
    }
  }
}

Eigen::VectorXd tei_column(const TEIFactorization& fac, index_t pair_index) {
  require(pair_index >= 0 && pair_index < fac.n_b * fac.n_b, "tei_column: index out of range");
  const index_t kappa = pair_index % fac.n_b;
  const index_t lambda = pair_index / fac.n_b;
  const index_t np2 = fac.n_prim * fac.n_prim;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(np2);
  for (const auto& [j, w] : contraction_column(fac, kappa, lambda)) z += w * b_prim_column(fac, j);
  // apply the transposed contraction map
  Eigen::VectorXd out = Eigen::VectorXd::Zero(fac.n_b * fac.n_b);
  for (index_t q = 0; q < fac.n_prim; ++q)
    for (index_t p = 0; p < fac.n_prim; ++p)
      out[fac.owner[p] + fac.n_b * fac.owner[q]] +=
          fac.prim_weight[p] * fac.prim_weight[q] * z[p + fac.n_prim * q];
  return out;
}

double tei_matrix_entry(const TEIFactorization& fac, index_t mu, index_t nu, index_t kappa, index_t lambda) {
  for (index_t i : {mu, nu, kappa, lambda})
    require(i >= 0 && i < fac.n_b, "tei_matrix_entry: index out of range");
  return tei_column(fac, kappa + fac.n_b * lambda)[mu + fac.n_b * nu];
}

Eigen::VectorXd tei_diagonal(const TEIFactorization& fac) {
  Eigen::VectorXd d(fac.n_b * fac.n_b);
  for (index_t nu = 0; nu < fac.n_b; ++nu)
    for (index_t mu = 0; mu < fac.n_b; ++mu) {
      const auto pairs = contraction_column(fac, mu, nu);
      // y^T B_prim y over the few primitive pairs of this contracted pair
      double val = 0.0;
      for (const auto& [j, w] : pairs) {
        const Eigen::VectorXd col = b_prim_column(fac, j);
        for (const auto& [j2, w2] : pairs) val += w * w2 * col[j2];
      }
      d[mu + fac.n_b * nu] = val;
    }
  return d;
}

void tei_cholesky(TEIFactorization& fac, double eps_chol) {
  fac.eps_chol = eps_chol;
  const PivotedCholesky pc =
      pivoted_cholesky([&](index_t j) { return tei_column(fac, j); }, tei_diagonal(fac), eps_chol,
                       CholeskyStop::max_diagonal, fac.n_b * fac.n_b, 1e-10);
  fac.chol = pc.factor;
}

TEIFactorization build_tei(const BasisSet& bs, const std::vector<CanonicalTensor3>& disc,
                           const KernelTensor& kernel, double eps_fit, double eps_chol) {
  TEIFactorization fac;
  tei_density_fitting(fac, bs, disc, eps_fit);
  tei_convolution_matrices(fac, kernel);
  tei_cholesky(fac, eps_chol);
  return fac;
}

Eigen::MatrixXd coulomb_from_factors(const Eigen::MatrixXd& chol, const Eigen::MatrixXd& density) {
  const index_t n = density.rows();
  require(chol.rows() == n * n && density.cols() == n, "coulomb_from_factors: shape mismatch");
  const Eigen::VectorXd vec_d = Eigen::Map<const Eigen::VectorXd>(density.data(), n * n);
  const Eigen::VectorXd vec_j = chol * (chol.transpose() * vec_d);
  Eigen::MatrixXd j = Eigen::Map<const Eigen::MatrixXd>(vec_j.data(), n, n);
  return 0.5 * (j + j.transpose());
}

Eigen::MatrixXd exchange_from_factors(const Eigen::MatrixXd& chol, const Eigen::MatrixXd& density) {
  const index_t n = density.rows();
  require(chol.rows() == n * n && density.cols() == n, "exchange_from_factors: shape mismatch");
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (index_t s = 0; s < chol.cols(); ++s) {
    const Eigen::Map<const Eigen::MatrixXd> m(chol.col(s).data(), n, n);
    k.noalias() -= 0.5 * m * density * m.transpose();
  }
  return 0.5 * (k + k.transpose());
}

Eigen::MatrixXd fock_from_factors(const Eigen::MatrixXd& h_core, const Eigen::MatrixXd& chol,
                                  const Eigen::MatrixXd& density) {
  return h_core + coulomb_from_factors(chol, density) + exchange_from_factors(chol, density);
}

}  // namespace tg
