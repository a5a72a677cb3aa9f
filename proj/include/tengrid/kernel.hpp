#pragma once

#include "tengrid/grid.hpp"
#include "tengrid/tensor.hpp"

namespace tg {

enum class KernelKind { newton, shielded, power_law, slater };

/// Radial kernel selector: newton 1/r, shielded e^{-kappa r}/r,
/// power_law 1/r^p, slater e^{-alpha r}.
struct RadialKernelSpec {
  KernelKind kind = KernelKind::newton;
  double kappa = 0.0;
  double power = 1.0;
  double alpha = 1.0;

  double target(double r) const;
};

/// Gaussian-sum quadrature for a radial kernel: f(r) ~ sum_k a_k e^{-t_k^2 r^2}
/// with t_k = k * mesh, mesh = C0 log(M)/M, k = -M..M.  The weights carry the
/// kernel-specific Laplace integrand and a least-squares calibration scale.
struct ExpSum {
  index_t m = 0;
  double c0 = 1.0;
  double mesh = 0.0;
  double scale = 1.0;        // calibration factor folded into the weights
  RadialKernelSpec spec;
  Eigen::VectorXd nodes;     // 2M+1 quadrature points, symmetric in k
  Eigen::VectorXd weights;   // all positive after pruning zero-weight nodes

  index_t terms() const { return weights.size(); }

  double evaluate(double r) const {
    double s = 0.0;
    for (index_t k = 0; k < terms(); ++k) s += weights[k] * std::exp(-nodes[k] * nodes[k] * r * r);
    return s;
  }

  /// Max relative deviation from the kernel on a log grid over [lo, hi].
  double max_relative_error(double lo, double hi, int samples = 400) const;
};

/// Newton-kernel quadrature with calibrated weights. The fit window defaults
/// to the quadrature's own validity range when not given.
ExpSum make_expsum(index_t m, double c0, double fit_lo = 0.0, double fit_hi = 0.0);

ExpSum make_radial_expsum(const RadialKernelSpec& spec, index_t m, double c0,
                          double fit_lo = 0.0, double fit_hi = 0.0);

/// Smallest quadrature meeting `eps` relative accuracy on [r_min, r_max],
/// found from the empirical size rule and validated; throws NumericalError if
/// the cap is exceeded.
ExpSum expsum_for_interval(double r_min, double r_max, double eps,
                           const RadialKernelSpec& spec = {}, index_t m_cap = 2048);

/// Empirical M(eps) = ceil(kappa * log^2(1/eps)) rule from Appendix-style
/// rank estimates; kKappaExpsum calibrated once against measured accuracy.
inline constexpr double kKappaExpsum = 0.30;
index_t expsum_terms_for_tolerance(double eps);

/// Low-rank canonical tensor of a radial kernel projected on the grid cells.
/// Axis vectors hold a_k^{1/3} * integral of e^{-t_k^2 x^2} over each cell
/// (closed form via erf); entries of to_dense()/h^3 approximate the kernel
/// pointwise away from the origin.  With `doubled` set the vectors live on
/// the 2n-point reference grid used by the shift-and-window transform.
struct KernelTensor {
  CanonicalTensor3 tensor;
  bool doubled = false;
  RadialKernelSpec spec;
  ExpSum expsum;

  index_t rank() const { return tensor.rank(); }
};

KernelTensor kernel_tensor(const Grid3& grid, const ExpSum& es, bool doubled);

inline KernelTensor newton_kernel_tensor(const Grid3& grid, const ExpSum& es, bool doubled) {
  require(es.spec.kind == KernelKind::newton, "newton_kernel_tensor: quadrature is not a Newton expansion");
  return kernel_tensor(grid, es, doubled);
}

/// 1D cell integral of e^{-t^2 x^2} over [c-h/2, c+h/2]; the t->0 limit is h.
double gauss_cell_integral(double t, double center, double h);

/// Exponential-sum approximation of 1/x on [lo, hi]:
/// 1/x ~ sum_k omega_k e^{-lambda_k x}, all weights positive.
struct ReciprocalExpSum {
  Eigen::VectorXd rates;    // lambda_k
  Eigen::VectorXd weights;  // omega_k
  double achieved_error = 0.0;
  bool ok = false;

  index_t terms() const { return rates.size(); }

  double evaluate(double x) const {
    double s = 0.0;
    for (index_t k = 0; k < terms(); ++k) s += weights[k] * std::exp(-rates[k] * x);
    return s;
  }
};

ReciprocalExpSum reciprocal_expsum(double lo, double hi, double eps, index_t term_cap = 256);

}  // namespace tg
