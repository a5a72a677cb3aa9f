#include "tengrid/reduction.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace tg {

namespace {

Eigen::MatrixXd unfold(const DenseTensor3& a, int mode) {
  const auto d = a.dims;
  if (mode == 0) return Eigen::Map<const Eigen::MatrixXd>(a.data.data(), d[0], d[1] * d[2]);
  Eigen::MatrixXd m(d[mode], mode == 1 ? d[0] * d[2] : d[0] * d[1]);
  if (mode == 1) {
    for (index_t k = 0; k < d[2]; ++k)
      for (index_t j = 0; j < d[1]; ++j)
        for (index_t i = 0; i < d[0]; ++i) m(j, i + d[0] * k) = a(i, j, k);
  } else {
    for (index_t k = 0; k < d[2]; ++k)
      for (index_t j = 0; j < d[1]; ++j)
        for (index_t i = 0; i < d[0]; ++i) m(k, i + d[0] * j) = a(i, j, k);
  }
  return m;
}

void thin_svd_jacobi(const Eigen::MatrixXd& a, Eigen::MatrixXd& u, Eigen::VectorXd& sigma) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  u = svd.matrixU();
  sigma = svd.singularValues();
}

index_t select_rank(const Eigen::VectorXd& sigma, const ReductionConfig& cfg, int mode, bool* clamped) {
  const index_t numeric = [&] {
    if (sigma.size() == 0) return index_t{0};
    const double cut = sigma[0] * 1e-15 * std::sqrt(static_cast<double>(sigma.size()));
    index_t r = 0;
    while (r < sigma.size() && sigma[r] > cut) ++r;
    return r;
  }();
  if (cfg.ranks) {
    const index_t want = (*cfg.ranks)[mode];
    require(want >= 0, "select_rank: negative rank request");
    if (want > numeric && clamped) *clamped = true;
    return std::min(want, numeric);
  }
  // epsilon mode: smallest r with sqrt(sum of discarded sigma^2) <= eps * ||sigma||
  const double total = sigma.squaredNorm();
  if (total == 0.0) return 0;
  const double budget = (*cfg.epsilon) * (*cfg.epsilon) * total;
  double tail = total;
  index_t r = 0;
  while (r < numeric && tail > budget) {
    tail -= sigma[r] * sigma[r];
    ++r;
  }
  return r;
}

/// Core of the Tucker projection of a normalized canonical tensor:
/// beta = sum_k w_k (Z1^T u_k) x (Z2^T u_k) x (Z3^T u_k).
DenseTensor3 project_core(const CanonicalTensor3& a, const std::array<Eigen::MatrixXd, 3>& z) {
  std::array<Eigen::MatrixXd, 3> p;
  for (int ax = 0; ax < 3; ++ax) p[ax] = z[ax].transpose() * a.factor[ax];
  const index_t r0 = z[0].cols(), r1 = z[1].cols(), r2 = z[2].cols();
  DenseTensor3 core(r0, r1, r2);
  for (index_t k = 0; k < a.rank(); ++k) {
    const double w = a.weight[k];
    if (w == 0.0) continue;
    for (index_t l = 0; l < r2; ++l) {
      const double wl = w * p[2](l, k);
      for (index_t j = 0; j < r1; ++j) {
        const double wjl = wl * p[1](j, k);
        double* col = core.data.data() + r0 * (j + r1 * l);
        for (index_t i = 0; i < r0; ++i) col[i] += wjl * p[0](i, k);
      }
    }
  }
  return core;
}

}  // namespace

void thin_svd_left(const Eigen::MatrixXd& a, Eigen::MatrixXd& u, Eigen::VectorXd& sigma) {
  if (a.cols() == 0 || a.rows() == 0) {
    u = Eigen::MatrixXd(a.rows(), 0);
    sigma = Eigen::VectorXd(0);
    return;
  }
  // very wide unfoldings: the left factors are eigenvectors of the small
  // row Gram matrix (accuracy floor ~sqrt(eps), fine for truncation use)
  if (a.cols() >= 4 * a.rows() && a.cols() > 8192) {
    const Eigen::MatrixXd gram = a * a.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const index_t n = a.rows();
    u = Eigen::MatrixXd(n, n);
    sigma = Eigen::VectorXd(n);
    for (index_t i = 0; i < n; ++i) {
      u.col(i) = es.eigenvectors().col(n - 1 - i);
      sigma[i] = std::sqrt(std::max(0.0, es.eigenvalues()[n - 1 - i]));
    }
    return;
  }
  if (a.rows() < 4 * a.cols() || a.cols() < 8) {
    thin_svd_jacobi(a, u, sigma);
    return;
  }
  const Eigen::MatrixXd gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success) {
    thin_svd_jacobi(a, u, sigma);
    return;
  }
  const index_t r = a.cols();
  sigma = Eigen::VectorXd(r);
  u = Eigen::MatrixXd(a.rows(), r);
  index_t kept = 0;
  const double lmax = std::max(0.0, es.eigenvalues().maxCoeff());
  for (index_t i = r - 1; i >= 0; --i) {  // eigenvalues ascend; emit descending
    const double lam = es.eigenvalues()[i];
    if (lam <= lmax * 1e-24 || lam <= 0.0) break;  // Gram path cannot resolve further
    const double s = std::sqrt(lam);
    sigma[kept] = s;
    u.col(kept) = a * es.eigenvectors().col(i) / s;
    ++kept;
  }
  sigma.conservativeResize(kept);
  u.conservativeResize(Eigen::NoChange, kept);
  // Gram-path columns lose orthogonality for clustered spectra; polish with QR.
  if (kept > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
    u = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), kept);
    Eigen::MatrixXd rr = qr.matrixQR().topRows(kept).triangularView<Eigen::Upper>();
    for (index_t c = 0; c < kept; ++c)
      if (rr(c, c) < 0.0) u.col(c) = -u.col(c);
  }
}

TuckerResult hosvd(const DenseTensor3& a, const ReductionConfig& cfg) {
  cfg.validate();
  TuckerResult res;
  std::array<Eigen::MatrixXd, 3> z;
  for (int mode = 0; mode < 3; ++mode) {
    Eigen::MatrixXd u;
    Eigen::VectorXd sigma;
    const Eigen::MatrixXd unf = unfold(a, mode);
    thin_svd_left(unf, u, sigma);
    const index_t r = select_rank(sigma, cfg, mode, &res.rank_clamped);
    z[mode] = u.leftCols(r);
    res.mode_singular_values[mode].assign(sigma.data(), sigma.data() + sigma.size());
  }
  // core = A x_1 Z1^T x_2 Z2^T x_3 Z3^T
  const auto d = a.dims;
  const index_t r0 = z[0].cols(), r1 = z[1].cols(), r2 = z[2].cols();
  // mode-1 contraction
  Eigen::MatrixXd m1 = z[0].transpose() * Eigen::Map<const Eigen::MatrixXd>(a.data.data(), d[0], d[1] * d[2]);
  // mode-2: per k3 slice
  Eigen::MatrixXd m2(r0 * r1, d[2]);
  for (index_t k3 = 0; k3 < d[2]; ++k3) {
    Eigen::Map<const Eigen::MatrixXd> slice(m1.data() + r0 * d[1] * k3, r0, d[1]);
    Eigen::MatrixXd t = slice * z[1];  // r0 x r1
    m2.col(k3) = Eigen::Map<const Eigen::VectorXd>(t.data(), r0 * r1);
  }
  Eigen::MatrixXd m3 = m2 * z[2];  // (r0*r1) x r2
  res.tucker.side = z;
  res.tucker.core = DenseTensor3(r0, r1, r2);
  res.tucker.core.data = Eigen::Map<const Eigen::VectorXd>(m3.data(), r0 * r1 * r2);
  return res;
}

TuckerResult rhosvd(const CanonicalTensor3& a, const ReductionConfig& cfg) {
  cfg.validate();
  a.check_valid();
  TuckerResult res;
  CanonicalTensor3 w = a;
  w.normalize();
  std::array<Eigen::MatrixXd, 3> z;
  for (int mode = 0; mode < 3; ++mode) {
    Eigen::MatrixXd u;
    Eigen::VectorXd sigma;
    thin_svd_left(w.factor[mode] * w.weight.asDiagonal(), u, sigma);
    const index_t r = select_rank(sigma, cfg, mode, &res.rank_clamped);
    z[mode] = u.leftCols(r);
    res.mode_singular_values[mode].assign(sigma.data(), sigma.data() + sigma.size());
  }
  res.tucker.side = z;
  res.tucker.core = project_core(w, z);
  return res;
}

TuckerResult canonical_to_tucker(const CanonicalTensor3& a, const ReductionConfig& cfg) {
  cfg.validate();
  a.check_valid();
  TuckerResult init = rhosvd(a, cfg);
  if (a.rank() == 0 || init.tucker.core.size() == 0) return init;

  CanonicalTensor3 w = a;
  w.normalize();
  std::array<Eigen::MatrixXd, 3> z = init.tucker.side;
  TuckerResult res = init;
  res.sweep_fits.clear();

  double prev_fit = -1.0;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double fit = 0.0;
    for (int ax = 0; ax < 3; ++ax) {
      const int m = (ax + 1) % 3, p = (ax + 2) % 3;
      const Eigen::MatrixXd pm = z[m].transpose() * w.factor[m];  // r_m x R
      const Eigen::MatrixXd pp = z[p].transpose() * w.factor[p];  // r_p x R
      const index_t rm = pm.rows(), rp = pp.rows();
      // coefficient matrix C: row k holds w_k * kron(pp_k, pm_k)
      Eigen::MatrixXd c(w.rank(), rm * rp);
      for (index_t k = 0; k < w.rank(); ++k)
        for (index_t l = 0; l < rp; ++l)
          c.block(k, l * rm, 1, rm) = (w.weight[k] * pp(l, k)) * pm.col(k).transpose();
      const Eigen::MatrixXd mat = w.factor[ax] * c;  // n_ax x (rm*rp): partially projected tensor
      Eigen::MatrixXd u;
      Eigen::VectorXd sigma;
      thin_svd_left(mat, u, sigma);
      if (u.cols() == 0 || !u.allFinite()) {
        res.rhosvd_fallback = true;
        return res;  // keep RHOSVD tensor already stored in res
      }
      const index_t r = std::min<index_t>(z[ax].cols(), u.cols());
      z[ax] = u.leftCols(r);
      fit = (z[ax].transpose() * mat).norm();  // norm of the fully projected tensor
    }
    res.sweep_fits.push_back(fit);
    if (prev_fit >= 0.0 && std::abs(fit - prev_fit) < 1e-14 * std::max(1.0, fit)) break;
    prev_fit = fit;
  }
  res.tucker.side = z;
  res.tucker.core = project_core(w, z);
  return res;
}

CanonicalTensor3 tucker_to_canonical(const TuckerTensor3& t) {
  const auto r = t.ranks();
  if (r[0] * r[1] * r[2] == 0) return CanonicalTensor3::zero(t.extents());
  // unfold the core along the largest mode; rank = product of the two smallest
  int ax = 0;
  for (int m = 1; m < 3; ++m)
    if (r[m] > r[ax]) ax = m;
  const int m1 = (ax + 1) % 3, m2 = (ax + 2) % 3;
  CanonicalTensor3 out;
  const index_t rank = r[m1] * r[m2];
  out.weight = Eigen::VectorXd::Ones(rank);
  out.factor[ax] = Eigen::MatrixXd(t.extent(ax), rank);
  out.factor[m1] = Eigen::MatrixXd(t.extent(m1), rank);
  out.factor[m2] = Eigen::MatrixXd(t.extent(m2), rank);
  Eigen::VectorXd slice(r[ax]);
  for (index_t j2 = 0; j2 < r[m2]; ++j2)
    for (index_t j1 = 0; j1 < r[m1]; ++j1) {
      const index_t q = j1 + r[m1] * j2;
      for (index_t i = 0; i < r[ax]; ++i) {
        std::array<index_t, 3> idx;
        idx[ax] = i;
        idx[m1] = j1;
        idx[m2] = j2;
        slice[i] = t.core(idx[0], idx[1], idx[2]);
      }
      out.factor[ax].col(q) = t.side[ax] * slice;
      out.factor[m1].col(q) = t.side[m1].col(j1);
      out.factor[m2].col(q) = t.side[m2].col(j2);
    }
  out.normalize();
  return out;
}

CanonicalTensor3 reduce_rank(const CanonicalTensor3& a, const ReductionConfig& cfg) {
  return tucker_to_canonical(canonical_to_tucker(a, cfg).tucker);
}

}  // namespace tg
