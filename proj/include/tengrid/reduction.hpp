#pragma once

#include <optional>
#include <vector>

#include "tengrid/tensor.hpp"

namespace tg {

/// Target for a Tucker truncation: either fixed per-mode ranks or a relative
/// singular-value tail threshold, never both.
struct ReductionConfig {
  std::optional<std::array<index_t, 3>> ranks;
  std::optional<double> epsilon;
  int max_sweeps = 3;  // ALS sweeps over the three modes

  static ReductionConfig fixed(index_t r1, index_t r2, index_t r3, int sweeps = 3) {
    ReductionConfig c;
    c.ranks = {r1, r2, r3};
    c.max_sweeps = sweeps;
    return c;
  }
  static ReductionConfig tolerance(double eps, int sweeps = 3) {
    ReductionConfig c;
    c.epsilon = eps;
    c.max_sweeps = sweeps;
    return c;
  }

  void validate() const {
    require(ranks.has_value() != epsilon.has_value(), "ReductionConfig: set exactly one of {ranks, epsilon}");
    if (epsilon) require(*epsilon > 0.0, "ReductionConfig: epsilon must be positive");
    require(max_sweeps >= 1, "ReductionConfig: need at least one sweep");
  }
};

struct TuckerResult {
  TuckerTensor3 tucker;
  bool rank_clamped = false;        // requested rank exceeded what the data supports
  bool rhosvd_fallback = false;     // ALS degenerated; RHOSVD initial guess returned
  std::vector<double> sweep_fits;   // projected norm after each ALS sweep (non-decreasing)
  std::array<std::vector<double>, 3> mode_singular_values;  // from the initializing SVDs
};

/// Higher-order SVD of a dense tensor: per-mode left singular bases of the
/// three unfoldings, core by orthogonal projection.
TuckerResult hosvd(const DenseTensor3& a, const ReductionConfig& cfg);

/// Reduced HOSVD of a canonical tensor: per-mode SVDs of the weighted side
/// matrices, projection of the factors; never densifies the full tensor.
TuckerResult rhosvd(const CanonicalTensor3& a, const ReductionConfig& cfg);

/// RHOSVD initial guess refined by ALS sweeps over the modes (mode order
/// 1,2,3 fixed for determinism). The fit is non-decreasing per update.
TuckerResult canonical_to_tucker(const CanonicalTensor3& a, const ReductionConfig& cfg);

/// Unfold the core along its largest mode; canonical rank is the product of
/// the two smallest Tucker ranks. Dense image preserved exactly.
CanonicalTensor3 tucker_to_canonical(const TuckerTensor3& t);

/// canonical_to_tucker followed by tucker_to_canonical; the standard rank
/// reduction after add/hadamard/convolve chains.
CanonicalTensor3 reduce_rank(const CanonicalTensor3& a, const ReductionConfig& cfg);

/// Thin left singular pairs (descending). Tall matrices go through the Gram
/// matrix eigendecomposition, keeping the cost at O(rows * cols^2).
void thin_svd_left(const Eigen::MatrixXd& a, Eigen::MatrixXd& u, Eigen::VectorXd& sigma);

}  // namespace tg
