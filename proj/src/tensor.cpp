#include "tengrid/tensor.hpp"

#include <cmath>

#include "tengrid/fft.hpp"

namespace tg {

namespace {

void require_matching_extents(const CanonicalTensor3& a, const CanonicalTensor3& b, const char* what) {
  for (int ax = 0; ax < 3; ++ax)
    require(a.extent(ax) == b.extent(ax), std::string(what) + ": extent mismatch");
}

}  // namespace

void CanonicalTensor3::normalize() {
  check_valid();
  for (index_t k = 0; k < rank(); ++k) {
    for (int ax = 0; ax < 3; ++ax) {
      const double nrm = factor[ax].col(k).norm();
      if (nrm > 0.0) {
        factor[ax].col(k) /= nrm;
        weight[k] *= nrm;
      } else {
        weight[k] = 0.0;
      }
    }
  }
}

double TuckerTensor3::orthonormality_defect() const {
  double worst = 0.0;
  for (int ax = 0; ax < 3; ++ax) {
    if (side[ax].cols() == 0) continue;
    Eigen::MatrixXd g = side[ax].transpose() * side[ax];
    g -= Eigen::MatrixXd::Identity(g.rows(), g.cols());
    worst = std::max(worst, g.cwiseAbs().maxCoeff());
  }
  return worst;
}

DenseTensor3 to_dense(const CanonicalTensor3& t) {
  t.check_valid();
  const auto d = t.extents();
  require(d[0] * d[1] * d[2] <= kMaxDenseEntries, "to_dense: size guard exceeded");
  DenseTensor3 out(d[0], d[1], d[2]);
  for (index_t k = 0; k < t.rank(); ++k) {
    const auto& u = t.factor[0].col(k);
    const auto& v = t.factor[1].col(k);
    const auto& w = t.factor[2].col(k);
    const double c = t.weight[k];
    for (index_t i3 = 0; i3 < d[2]; ++i3) {
      const double cw = c * w[i3];
      for (index_t i2 = 0; i2 < d[1]; ++i2) {
        const double cvw = cw * v[i2];
        double* slice = out.data.data() + d[0] * (i2 + d[1] * i3);
        for (index_t i1 = 0; i1 < d[0]; ++i1) slice[i1] += cvw * u[i1];
      }
    }
  }
  return out;
}

DenseTensor3 to_dense(const TuckerTensor3& t) {
  const auto d = t.extents();
  const auto r = t.ranks();
  require(d[0] * d[1] * d[2] <= kMaxDenseEntries, "to_dense: size guard exceeded");
  // contract mode by mode: core (r1,r2,r3) -> (n1,r2,r3) -> (n1,n2,r3) -> dense
  Eigen::MatrixXd m1 = t.side[0] * Eigen::Map<const Eigen::MatrixXd>(t.core.data.data(), r[0], r[1] * r[2]);
  // m1 is n1 x (r2*r3); contract mode 2
  Eigen::MatrixXd m2(d[0] * r[2], d[1]);  // holds (n1, r3; n2)
  for (index_t k3 = 0; k3 < r[2]; ++k3) {
    Eigen::Map<const Eigen::MatrixXd> block(m1.data() + d[0] * r[1] * k3, d[0], r[1]);
    m2.middleRows(k3 * d[0], d[0]) = block * t.side[1].transpose();
  }
  DenseTensor3 out(d[0], d[1], d[2]);
  for (index_t i3 = 0; i3 < d[2]; ++i3) {
    Eigen::Map<Eigen::MatrixXd> slice(out.data.data() + d[0] * d[1] * i3, d[0], d[1]);
    slice.setZero();
    for (index_t k3 = 0; k3 < r[2]; ++k3)
      slice += t.side[2](i3, k3) * m2.middleRows(k3 * d[0], d[0]);
  }
  return out;
}

double scalar_product(const CanonicalTensor3& a, const CanonicalTensor3& b) {
  a.check_valid();
  b.check_valid();
  require_matching_extents(a, b, "scalar_product");
  if (a.rank() == 0 || b.rank() == 0) return 0.0;
  // Gram matrices of factor columns per axis, then weighted sum of products.
  Eigen::MatrixXd g = Eigen::MatrixXd::Ones(a.rank(), b.rank());
  for (int ax = 0; ax < 3; ++ax)
    g = g.cwiseProduct(a.factor[ax].transpose() * b.factor[ax]);
  return a.weight.transpose() * g * b.weight;
}

double scalar_product(const TuckerTensor3& a, const TuckerTensor3& b) {
  for (int ax = 0; ax < 3; ++ax)
    require(a.extent(ax) == b.extent(ax), "scalar_product: extent mismatch");
  const auto ra = a.ranks();
  const auto rb = b.ranks();
  if (a.core.size() == 0 || b.core.size() == 0) return 0.0;
  // <A, B> = <core_a, core_b x_l (Za^T Zb)>
  std::array<Eigen::MatrixXd, 3> m;
  for (int ax = 0; ax < 3; ++ax) m[ax] = a.side[ax].transpose() * b.side[ax];
  // contract b.core with m over all modes, then dot with a.core
  Eigen::MatrixXd c1 = m[0] * Eigen::Map<const Eigen::MatrixXd>(b.core.data.data(), rb[0], rb[1] * rb[2]);
  double sum = 0.0;
  for (index_t k3 = 0; k3 < rb[2]; ++k3) {
    Eigen::Map<const Eigen::MatrixXd> block(c1.data() + ra[0] * rb[1] * k3, ra[0], rb[1]);
    Eigen::MatrixXd c2 = block * m[1].transpose();  // ra0 x ra1
    for (index_t j3 = 0; j3 < ra[2]; ++j3) {
      Eigen::Map<const Eigen::MatrixXd> ca(a.core.data.data() + ra[0] * ra[1] * j3, ra[0], ra[1]);
      sum += m[2](j3, k3) * (ca.cwiseProduct(c2)).sum();
    }
  }
  return sum;
}

double scalar_product(const TuckerTensor3& a, const CanonicalTensor3& b) {
  for (int ax = 0; ax < 3; ++ax)
    require(a.extent(ax) == b.extent(ax), "scalar_product: extent mismatch");
  double sum = 0.0;
  const auto r = a.ranks();
  std::array<Eigen::MatrixXd, 3> p;  // r_l x R projections of b's columns
  for (int ax = 0; ax < 3; ++ax) p[ax] = a.side[ax].transpose() * b.factor[ax];
  for (index_t k = 0; k < b.rank(); ++k) {
    double term = 0.0;
    for (index_t j3 = 0; j3 < r[2]; ++j3) {
      Eigen::Map<const Eigen::MatrixXd> ca(a.core.data.data() + r[0] * r[1] * j3, r[0], r[1]);
      term += p[2](j3, k) * (p[0].col(k).transpose() * ca * p[1].col(k)).value();
    }
    sum += b.weight[k] * term;
  }
  return sum;
}

CanonicalTensor3 hadamard(const CanonicalTensor3& a, const CanonicalTensor3& b) {
  a.check_valid();
  b.check_valid();
  require_matching_extents(a, b, "hadamard");
  CanonicalTensor3 out;
  const index_t ra = a.rank(), rb = b.rank();
  out.weight = Eigen::VectorXd(ra * rb);
  for (int ax = 0; ax < 3; ++ax) out.factor[ax] = Eigen::MatrixXd(a.extent(ax), ra * rb);
  for (index_t j = 0; j < rb; ++j)
    for (index_t i = 0; i < ra; ++i) {
      const index_t k = i + ra * j;
      out.weight[k] = a.weight[i] * b.weight[j];
      for (int ax = 0; ax < 3; ++ax)
        out.factor[ax].col(k) = a.factor[ax].col(i).cwiseProduct(b.factor[ax].col(j));
    }
  return out;
}

CanonicalTensor3 add(const CanonicalTensor3& a, const CanonicalTensor3& b) {
  a.check_valid();
  b.check_valid();
  require_matching_extents(a, b, "add");
  CanonicalTensor3 out;
  out.weight = Eigen::VectorXd(a.rank() + b.rank());
  out.weight << a.weight, b.weight;
  for (int ax = 0; ax < 3; ++ax) {
    out.factor[ax] = Eigen::MatrixXd(a.extent(ax), a.rank() + b.rank());
    out.factor[ax] << a.factor[ax], b.factor[ax];
  }
  return out;
}

CanonicalTensor3 scale(const CanonicalTensor3& a, double alpha) {
  CanonicalTensor3 out = a;
  out.weight *= alpha;
  return out;
}

CanonicalTensor3 convolve(const CanonicalTensor3& a, const CanonicalTensor3& b, const std::array<double, 3>& h) {
  a.check_valid();
  b.check_valid();
  require_matching_extents(a, b, "convolve");
  require(h[0] > 0.0 && h[1] > 0.0 && h[2] > 0.0, "convolve: mesh size must be positive");
  CanonicalTensor3 out;
  const index_t ra = a.rank(), rb = b.rank();
  out.weight = Eigen::VectorXd(ra * rb);
  for (index_t j = 0; j < rb; ++j)
    for (index_t i = 0; i < ra; ++i) out.weight[i + ra * j] = a.weight[i] * b.weight[j];
  for (int ax = 0; ax < 3; ++ax) {
    out.factor[ax] = Eigen::MatrixXd(a.extent(ax), ra * rb);
    for (index_t j = 0; j < rb; ++j) {
      // one kernel FFT per b-column, reused across all a-columns
      Eigen::MatrixXd cols = conv_central_many(a.factor[ax], b.factor[ax].col(j));
      out.factor[ax].middleCols(j * ra, ra) = h[ax] * cols;
    }
  }
  return out;
}

CanonicalTensor3 convolve(const CanonicalTensor3& a, const CanonicalTensor3& b, double h) {
  return convolve(a, b, std::array<double, 3>{h, h, h});
}

double frobenius_norm(const CanonicalTensor3& t) {
  return std::sqrt(std::max(0.0, scalar_product(t, t)));
}

double frobenius_norm(const TuckerTensor3& t) {
  // orthonormal sides: the norm is carried by the core
  return t.core.data.norm();
}

double relative_error(const CanonicalTensor3& a, const CanonicalTensor3& b) {
  const double ref = frobenius_norm(b);
  require(ref > 0.0, "relative_error: zero-norm reference");
  const CanonicalTensor3 diff = add(a, scale(b, -1.0));
  return frobenius_norm(diff) / ref;
}

double relative_error(const DenseTensor3& a, const DenseTensor3& b) {
  const double ref = b.data.norm();
  require(ref > 0.0, "relative_error: zero-norm reference");
  return (a.data - b.data).norm() / ref;
}

}  // namespace tg
