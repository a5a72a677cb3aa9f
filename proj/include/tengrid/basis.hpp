#pragma once

#include <vector>

#include "tengrid/grid.hpp"
#include "tengrid/tensor.hpp"

namespace tg {

struct GaussianPrimitive {
  double exponent = 1.0;
  double coeff = 1.0;  // contraction coefficient w.r.t. the normalized primitive
};

/// Axis-separable basis function: product over axes of
/// (x-c)^d * exp(-alpha (x-c)^2), contracted over primitives.
/// Degree 0 per axis is s-type; a single degree-1 axis gives p-type.
struct SeparableBasisFunction {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::array<int, 3> degree{0, 0, 0};
  std::vector<GaussianPrimitive> primitives;

  int total_degree() const { return degree[0] + degree[1] + degree[2]; }
};

/// Normalization constant of a primitive Cartesian Gaussian of total degree l
/// (l = 0 s, l = 1 p).
double primitive_norm(double alpha, int l);

struct BasisSet {
  Grid3 grid;
  std::vector<SeparableBasisFunction> functions;

  index_t size() const { return static_cast<index_t>(functions.size()); }
};

struct Nucleus {
  double charge = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
};

struct Molecule {
  std::vector<Nucleus> nuclei;
  int n_electrons = 0;

  int n_occupied() const {
    if (n_electrons == 1) return 1;
    require(n_electrons >= 2 && n_electrons % 2 == 0,
            "Molecule: closed-shell treatment needs an even electron count (or exactly one)");
    return n_electrons / 2;
  }
};

/// Samples each basis function at the cell centers, one canonical term per
/// primitive: s-type primitives discretize to rank-1 tensors.
std::vector<CanonicalTensor3> discretize_basis(const BasisSet& bs);

}  // namespace tg
