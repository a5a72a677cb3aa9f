#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "tengrid/common.hpp"

namespace tg {

/// Dyadic folding of a length-2^L vector into an L-dimensional 2x...x2 array.
/// Mode nu is binary digit nu-1 of the flat index (least significant digit is
/// mode 1), so the folded array shares the vector's memory layout.
struct QuanticsFold {
  index_t levels = 0;
  Eigen::VectorXd data;

  index_t size() const { return index_t{1} << levels; }

  /// Entry at multi-index (j_1 .. j_L), digits in {0, 1}.
  double at(const std::vector<int>& digits) const {
    require(static_cast<index_t>(digits.size()) == levels, "QuanticsFold::at: digit count mismatch");
    index_t i = 0;
    for (index_t nu = 0; nu < levels; ++nu) {
      require(digits[nu] == 0 || digits[nu] == 1, "QuanticsFold::at: digits must be 0 or 1");
      i |= static_cast<index_t>(digits[nu]) << nu;
    }
    return data[i];
  }
};

QuanticsFold fold(const Eigen::VectorXd& x);
Eigen::VectorXd unfold(const QuanticsFold& f);

/// TT decomposition of the quantics image: cores G^nu of shape
/// r_{nu-1} x 2 x r_nu stored as one matrix per digit, r_0 = r_L = 1.
struct QuanticsImage {
  index_t levels = 0;
  std::vector<std::array<Eigen::MatrixXd, 2>> cores;

  std::vector<index_t> ranks() const {  // r_1 .. r_{L-1}
    std::vector<index_t> r;
    for (index_t nu = 0; nu + 1 < levels; ++nu) r.push_back(cores[nu][0].cols());
    return r;
  }
  index_t max_rank() const {
    index_t m = 1;
    for (index_t r : ranks()) m = std::max(m, r);
    return m;
  }
};

/// Sequential-SVD TT compression at relative tolerance eps; the per-step
/// truncation budget is eps*||x||/sqrt(L-1) so the global bound
/// ||x - reconstruct|| <= eps*||x|| holds.
QuanticsImage tt_decompose(const Eigen::VectorXd& x, double eps);

/// Representation size sum_nu r_{nu-1} * 2 * r_nu.
index_t tt_storage(const QuanticsImage& img);

/// Entry i by contracting the digit-selected core matrices, O(L r^2).
double tt_eval(const QuanticsImage& img, index_t i);

Eigen::VectorXd tt_reconstruct(const QuanticsImage& img);

}  // namespace tg
