#pragma once

#include <array>

#include <Eigen/Core>

#include "tengrid/common.hpp"

namespace tg {

/// Hard cap on densified tensors (2^27 entries = 1 GiB of doubles).
inline constexpr index_t kMaxDenseEntries = index_t{1} << 27;

/// Dense third-order tensor, column-major: index = i1 + n1*(i2 + n2*i3).
struct DenseTensor3 {
  std::array<index_t, 3> dims{0, 0, 0};
  Eigen::VectorXd data;

  DenseTensor3() = default;
  DenseTensor3(index_t n1, index_t n2, index_t n3) : dims{n1, n2, n3} {
    require(n1 >= 0 && n2 >= 0 && n3 >= 0, "DenseTensor3: negative extent");
    require(n1 * n2 * n3 <= kMaxDenseEntries, "DenseTensor3: size guard exceeded");
    data = Eigen::VectorXd::Zero(n1 * n2 * n3);
  }

  index_t size() const { return dims[0] * dims[1] * dims[2]; }

  double& operator()(index_t i, index_t j, index_t k) { return data[i + dims[0] * (j + dims[1] * k)]; }
  double operator()(index_t i, index_t j, index_t k) const { return data[i + dims[0] * (j + dims[1] * k)]; }

  double norm() const { return data.norm(); }
};

/// Rank-R canonical tensor: sum_k weight[k] * u_k^(1) x u_k^(2) x u_k^(3),
/// with u_k^(l) the k-th column of factor[l].
struct CanonicalTensor3 {
  std::array<Eigen::MatrixXd, 3> factor;
  Eigen::VectorXd weight;

  index_t rank() const { return weight.size(); }
  index_t extent(int axis) const { return factor[axis].rows(); }
  std::array<index_t, 3> extents() const { return {extent(0), extent(1), extent(2)}; }

  static CanonicalTensor3 zero(const std::array<index_t, 3>& dims) {
    CanonicalTensor3 t;
    for (int ax = 0; ax < 3; ++ax) t.factor[ax] = Eigen::MatrixXd(dims[ax], 0);
    t.weight = Eigen::VectorXd(0);
    return t;
  }

  /// Single entry in O(R); handy for probing large grids without densifying.
  double value_at(index_t i1, index_t i2, index_t i3) const {
    double s = 0.0;
    for (index_t k = 0; k < rank(); ++k)
      s += weight[k] * factor[0](i1, k) * factor[1](i2, k) * factor[2](i3, k);
    return s;
  }

  /// Fold column norms into the weights so every factor column has unit norm.
  /// Terms with a zero column become zero-weight terms.
  void normalize();

  void check_valid() const {
    for (int ax = 0; ax < 3; ++ax)
      require(factor[ax].cols() == weight.size(), "CanonicalTensor3: factor/weight rank mismatch");
  }
};

/// Orthogonal Tucker tensor: core contracted against per-mode side matrices
/// with orthonormal columns.
struct TuckerTensor3 {
  std::array<Eigen::MatrixXd, 3> side;
  DenseTensor3 core;  // dims = Tucker ranks (r1, r2, r3)

  std::array<index_t, 3> ranks() const { return core.dims; }
  index_t extent(int axis) const { return side[axis].rows(); }
  std::array<index_t, 3> extents() const { return {extent(0), extent(1), extent(2)}; }

  /// Max deviation of side^T side from the identity, over all modes.
  double orthonormality_defect() const;
};

// ---- reconstruction ----

DenseTensor3 to_dense(const CanonicalTensor3& t);
DenseTensor3 to_dense(const TuckerTensor3& t);

// ---- multilinear algebra in 1D complexity ----

double scalar_product(const CanonicalTensor3& a, const CanonicalTensor3& b);
double scalar_product(const TuckerTensor3& a, const TuckerTensor3& b);
double scalar_product(const TuckerTensor3& a, const CanonicalTensor3& b);

CanonicalTensor3 hadamard(const CanonicalTensor3& a, const CanonicalTensor3& b);
CanonicalTensor3 add(const CanonicalTensor3& a, const CanonicalTensor3& b);
CanonicalTensor3 scale(const CanonicalTensor3& a, double alpha);

/// Tensor-product convolution: rank R_a*R_b result whose factor columns are
/// centrally windowed 1D convolutions of the operand columns, weighted h per
/// axis so the result approximates the Galerkin integral (f*g)(x) at cell
/// centers when both operands hold pointwise samples.
CanonicalTensor3 convolve(const CanonicalTensor3& a, const CanonicalTensor3& b, const std::array<double, 3>& h);
CanonicalTensor3 convolve(const CanonicalTensor3& a, const CanonicalTensor3& b, double h);

double frobenius_norm(const CanonicalTensor3& t);
double frobenius_norm(const TuckerTensor3& t);

/// ||a - b|| / ||b||, the reference norm in the denominator.
double relative_error(const CanonicalTensor3& a, const CanonicalTensor3& b);
double relative_error(const DenseTensor3& a, const DenseTensor3& b);

}  // namespace tg
