#include "tengrid/kernel.hpp"

#include <cmath>
#include <numbers>

namespace tg {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

/// Laplace-Gauss integrand weight for each kernel at node t (kernel-specific
/// factor multiplying e^{-t^2 r^2} in the integral representation).
double integrand_weight(const RadialKernelSpec& spec, double t) {
  switch (spec.kind) {
    case KernelKind::newton:
      return 2.0 / kSqrtPi;
    case KernelKind::shielded:
      // e^{-kappa r}/r = (2/sqrt(pi)) int e^{-t^2 r^2} e^{-kappa^2/(4 t^2)} dt
      if (t == 0.0) return 0.0;
      return (2.0 / kSqrtPi) * std::exp(-spec.kappa * spec.kappa / (4.0 * t * t));
    case KernelKind::power_law:
      // 1/r^p = (2/Gamma(p/2)) int t^{p-1} e^{-t^2 r^2} dt
      if (t == 0.0) return spec.power == 1.0 ? 2.0 / kSqrtPi : 0.0;
      return 2.0 / std::tgamma(0.5 * spec.power) * std::pow(t, spec.power - 1.0);
    case KernelKind::slater:
      // e^{-alpha r} = (alpha/sqrt(pi)) int t^{-2} e^{-alpha^2/(4t^2)} e^{-t^2 r^2} dt
      if (t == 0.0) return 0.0;
      return spec.alpha / kSqrtPi * std::exp(-spec.alpha * spec.alpha / (4.0 * t * t)) / (t * t);
  }
  return 0.0;
}

std::pair<double, double> default_fit_window(index_t m, double c0, double mesh) {
  const double t_max = c0 * std::log(static_cast<double>(std::max<index_t>(m, 2)));
  double lo = 3.0 / t_max;             // truncation error ~ e^{-9} here
  double hi = std::numbers::pi / (3.0 * mesh);  // aliasing error ~ e^{-9} here
  if (hi < 2.0 * lo) {                 // degenerate window; fall back to a band around lo
    hi = 2.0 * lo;
  }
  return {lo, hi};
}

}  // namespace

double RadialKernelSpec::target(double r) const {
  switch (kind) {
    case KernelKind::newton:
      return 1.0 / r;
    case KernelKind::shielded:
      return std::exp(-kappa * r) / r;
    case KernelKind::power_law:
      return std::pow(r, -power);
    case KernelKind::slater:
      return std::exp(-alpha * r);
  }
  return 0.0;
}

double ExpSum::max_relative_error(double lo, double hi, int samples) const {
  require(lo > 0.0 && hi >= lo, "max_relative_error: bad interval");
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = lo * std::pow(hi / lo, samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1));
    const double f = spec.target(r);
    worst = std::max(worst, std::abs(evaluate(r) - f) / std::abs(f));
  }
  return worst;
}

ExpSum make_radial_expsum(const RadialKernelSpec& spec, index_t m, double c0, double fit_lo, double fit_hi) {
  require(m >= 1, "make_radial_expsum: need at least one quadrature point");
  require(c0 > 0.0, "make_radial_expsum: C0 must be positive");
  ExpSum es;
  es.m = m;
  es.c0 = c0;
  es.spec = spec;
  es.mesh = c0 * std::log(static_cast<double>(std::max<index_t>(m, 2))) / static_cast<double>(m);

  std::vector<double> nodes, weights;
  nodes.reserve(2 * m + 1);
  for (index_t k = -m; k <= m; ++k) {
    const double t = static_cast<double>(k) * es.mesh;
    const double w = integrand_weight(spec, std::abs(t)) * es.mesh;
    if (w <= 0.0) continue;  // prune zero-weight nodes (t = 0 for most kernels)
    nodes.push_back(t);
    weights.push_back(w);
  }
  es.nodes = Eigen::Map<const Eigen::VectorXd>(nodes.data(), nodes.size());
  es.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(), weights.size());

  // The symmetric sum over k = -M..M double-counts the half-line integral;
  // the least-squares fit against the kernel absorbs that factor (~1/2).
  // Calibrate only inside the quadrature's own validity window so a wide
  // request cannot skew the scale.
  auto [def_lo, def_hi] = default_fit_window(m, c0, es.mesh);
  if (fit_lo <= 0.0 || fit_hi <= 0.0) {
    fit_lo = def_lo;
    fit_hi = def_hi;
  } else {
    fit_lo = std::max(fit_lo, def_lo);
    fit_hi = std::min(fit_hi, def_hi);
    if (fit_lo >= fit_hi) {
      fit_lo = def_lo;
      fit_hi = def_hi;
    }
  }
  double num = 0.0, den = 0.0;
  const int samples = 200;
  for (int i = 0; i < samples; ++i) {
    const double r = fit_lo * std::pow(fit_hi / fit_lo, static_cast<double>(i) / (samples - 1));
    const double f = es.evaluate(r);
    num += f * spec.target(r);
    den += f * f;
  }
  es.scale = den > 0.0 ? num / den : 1.0;
  es.weights *= es.scale;
  return es;
}

ExpSum make_expsum(index_t m, double c0, double fit_lo, double fit_hi) {
  return make_radial_expsum(RadialKernelSpec{}, m, c0, fit_lo, fit_hi);
}

index_t expsum_terms_for_tolerance(double eps) {
  require(eps > 0.0 && eps < 1.0, "expsum_terms_for_tolerance: eps in (0,1) required");
  const double l = std::log(1.0 / eps);
  return static_cast<index_t>(std::ceil(kKappaExpsum * l * l));
}

ExpSum expsum_for_interval(double r_min, double r_max, double eps, const RadialKernelSpec& spec, index_t m_cap) {
  require(r_min > 0.0 && r_max >= r_min, "expsum_for_interval: bad interval");
  require(eps > 0.0, "expsum_for_interval: eps must be positive");
  // For each candidate size, pick C0 by golden-section search on the measured
  // error (truncation wants C0 large, aliasing wants the mesh small); accept
  // the first size meeting the target.
  auto measured = [&](index_t m, double c0) {
    return make_radial_expsum(spec, m, c0, r_min, r_max).max_relative_error(r_min, r_max, 300);
  };
  auto best_c0 = [&](index_t m) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::log(0.15), hi = std::log(12.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = measured(m, std::exp(x1)), f2 = measured(m, std::exp(x2));
    for (int it = 0; it < 22; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = measured(m, std::exp(x1));
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = measured(m, std::exp(x2));
      }
    }
    return std::exp(0.5 * (lo + hi));
  };
  for (index_t m = std::max<index_t>(6, expsum_terms_for_tolerance(std::min(eps * 1e3, 0.5)));
       m <= m_cap; m = std::max<index_t>(m + 4, static_cast<index_t>(m * 1.3))) {
    const double c0 = best_c0(m);
    ExpSum es = make_radial_expsum(spec, m, c0, r_min, r_max);
    if (es.max_relative_error(r_min, r_max, 600) <= eps) return es;
  }
  throw NumericalError("expsum_for_interval: tolerance unattainable within the term cap");
}

double gauss_cell_integral(double t, double center, double h) {
  if (t == 0.0) return h;
  const double xl = center - 0.5 * h;
  const double xr = center + 0.5 * h;
  const double c = kSqrtPi / (2.0 * t);
  // pick the erf/erfc form that avoids cancellation far from the origin
  if (xl >= 0.0) return c * (std::erfc(t * xl) - std::erfc(t * xr));
  if (xr <= 0.0) return c * (std::erfc(-t * xr) - std::erfc(-t * xl));
  return c * (std::erf(t * xr) - std::erf(t * xl));
}

KernelTensor kernel_tensor(const Grid3& grid, const ExpSum& es, bool doubled) {
  KernelTensor out;
  out.doubled = doubled;
  out.spec = es.spec;
  out.expsum = es;
  const index_t r = es.terms();
  CanonicalTensor3& t = out.tensor;
  t.weight = Eigen::VectorXd::Ones(r);
  for (int ax = 0; ax < 3; ++ax) {
    const index_t len = doubled ? 2 * grid.n[ax] : grid.n[ax];
    t.factor[ax] = Eigen::MatrixXd(len, r);
    for (index_t q = 0; q < r; ++q) {
      const double tq = std::abs(es.nodes[q]);
      const double aq = std::cbrt(es.weights[q]);
      for (index_t i = 0; i < len; ++i) {
        const double c = doubled ? grid.ref_coord(ax, i) : grid.coord(ax, i);
        t.factor[ax](i, q) = aq * gauss_cell_integral(tq, c, grid.h[ax]);
      }
    }
  }
  return out;
}

ReciprocalExpSum reciprocal_expsum(double lo, double hi, double eps, index_t term_cap) {
  require(0.0 < lo && lo <= hi, "reciprocal_expsum: need 0 < lo <= hi");
  require(eps > 0.0, "reciprocal_expsum: eps must be positive");
  ReciprocalExpSum out;
  if (lo == hi) {
    out.rates = Eigen::VectorXd::Constant(1, 1.0 / lo);
    out.weights = Eigen::VectorXd::Constant(1, std::numbers::e / lo);
    out.achieved_error = 0.0;
    out.ok = true;
    return out;
  }
  // 1/x = int_R exp(-x e^u + u) du on the scaled interval [1, q], then the
  // rates and weights are mapped back by 1/lo.
  const double q = hi / lo;
  const double u_min = std::log(eps / (6.0 * q));
  const double u_max = std::log(std::log(6.0 * q / eps)) + 1.0;
  for (double mesh = 2.0 * std::numbers::pi / (std::log(1.0 / eps) + 6.0);; mesh *= 0.8) {
    const index_t n = static_cast<index_t>(std::ceil((u_max - u_min) / mesh)) + 1;
    if (n > term_cap) {
      out.ok = false;
      return out;
    }
    Eigen::VectorXd rates(n), weights(n);
    for (index_t j = 0; j < n; ++j) {
      const double u = u_min + static_cast<double>(j) * mesh;
      rates[j] = std::exp(u);
      weights[j] = mesh * std::exp(u);
    }
    double worst = 0.0;
    const int samples = 1000;
    for (int i = 0; i < samples; ++i) {
      const double x = std::pow(q, static_cast<double>(i) / (samples - 1));
      double s = 0.0;
      for (index_t j = 0; j < n; ++j) s += weights[j] * std::exp(-rates[j] * x);
      worst = std::max(worst, std::abs(s - 1.0 / x) * x);
    }
    if (worst <= eps) {
      out.rates = rates / lo;
      out.weights = weights / lo;
      out.achieved_error = worst;
      out.ok = true;
      return out;
    }
  }
}

}  // namespace tg
