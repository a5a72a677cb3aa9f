#include "tengrid/basis.hpp"

#include <cmath>
#include <numbers>

namespace tg {

double primitive_norm(double alpha, int l) {
  require(alpha > 0.0, "primitive_norm: exponent must be positive");
  const double n_s = std::pow(2.0 * alpha / std::numbers::pi, 0.75);
  if (l == 0) return n_s;
  if (l == 1) return n_s * 2.0 * std::sqrt(alpha);
  throw std::invalid_argument("primitive_norm: only s and p supported");
}

std::vector<CanonicalTensor3> discretize_basis(const BasisSet& bs) {
  std::vector<CanonicalTensor3> out;
  out.reserve(bs.functions.size());
  for (const auto& f : bs.functions) {
    for (int ax = 0; ax < 3; ++ax) {
      if (std::abs(f.center[ax]) > bs.grid.b_half[ax])
        throw std::domain_error("discretize_basis: basis center outside the computational box");
      require(f.degree[ax] == 0 || f.degree[ax] == 1, "discretize_basis: per-axis degree must be 0 or 1");
    }
    require(!f.primitives.empty(), "discretize_basis: contraction needs at least one primitive");
    CanonicalTensor3 t;
    const index_t np = static_cast<index_t>(f.primitives.size());
    t.weight = Eigen::VectorXd(np);
    for (int ax = 0; ax < 3; ++ax) t.factor[ax] = Eigen::MatrixXd(bs.grid.n[ax], np);
    for (index_t p = 0; p < np; ++p) {
      const auto& prim = f.primitives[p];
      require(prim.exponent > 0.0, "discretize_basis: primitive exponent must be positive");
      t.weight[p] = prim.coeff * primitive_norm(prim.exponent, f.total_degree());
      for (int ax = 0; ax < 3; ++ax) {
        for (index_t i = 0; i < bs.grid.n[ax]; ++i) {
          const double x = bs.grid.coord(ax, i) - f.center[ax];
          double v = std::exp(-prim.exponent * x * x);
          if (f.degree[ax] == 1) v *= x;
          t.factor[ax](i, p) = v;
        }
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace tg
