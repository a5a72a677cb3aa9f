#include "tengrid/qtt.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace tg {

namespace {

bool is_pow2(index_t n) { return n > 0 && (n & (n - 1)) == 0; }

index_t log2_exact(index_t n) {
  index_t l = 0;
  while ((index_t{1} << l) < n) ++l;
  return l;
}

}  // namespace

QuanticsFold fold(const Eigen::VectorXd& x) {
  require(is_pow2(x.size()), "fold: vector length must be a power of two");
  QuanticsFold f;
  f.levels = log2_exact(x.size());
  f.data = x;
  return f;
}

Eigen::VectorXd unfold(const QuanticsFold& f) { return f.data; }

QuanticsImage tt_decompose(const Eigen::VectorXd& x, double eps) {
  require(is_pow2(x.size()), "tt_decompose: vector length must be a power of two");
  require(eps > 0.0, "tt_decompose: eps must be positive");
  const index_t levels = log2_exact(x.size());
  QuanticsImage img;
  img.levels = levels;
  img.cores.resize(levels);
  if (levels == 1) {
    img.cores[0][0] = Eigen::MatrixXd::Constant(1, 1, x[0]);
    img.cores[0][1] = Eigen::MatrixXd::Constant(1, 1, x[1]);
    return img;
  }
  const double delta = eps * x.norm() / std::sqrt(static_cast<double>(levels - 1));

  Eigen::MatrixXd w = Eigen::Map<const Eigen::MatrixXd>(x.data(), 2, x.size() / 2);
  index_t r_prev = 1;
  for (index_t nu = 0; nu + 1 < levels; ++nu) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    // discard the smallest tail with sum of squares below delta^2
    index_t r = s.size();
    double tail = 0.0;
    while (r > 0) {
      const double t = tail + s[r - 1] * s[r - 1];
      if (t > delta * delta) break;
      tail = t;
      --r;
    }
    r = std::max<index_t>(r, 1);
    const Eigen::MatrixXd u = svd.matrixU().leftCols(r);  // (r_prev*2) x r
    img.cores[nu][0] = Eigen::MatrixXd(r_prev, r);
    img.cores[nu][1] = Eigen::MatrixXd(r_prev, r);
    for (index_t a = 0; a < r_prev; ++a) {
      img.cores[nu][0].row(a) = u.row(a);
      img.cores[nu][1].row(a) = u.row(a + r_prev);
    }
    Eigen::MatrixXd rest = s.head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();  // r x cols
    if (nu + 2 < levels) {
      // refold: split the leading binary digit off the column index
      const index_t cols = rest.cols() / 2;
      w = Eigen::Map<const Eigen::MatrixXd>(rest.data(), 2 * r, cols);
      r_prev = r;
    } else {
      // last core absorbs the remainder (r x 2)
      img.cores[levels - 1][0] = rest.col(0);
      img.cores[levels - 1][1] = rest.col(1);
    }
  }
  return img;
}

index_t tt_storage(const QuanticsImage& img) {
  index_t total = 0;
  for (const auto& core : img.cores) total += 2 * core[0].rows() * core[0].cols();
  return total;
}

double tt_eval(const QuanticsImage& img, index_t i) {
  require(i >= 0 && i < (index_t{1} << img.levels), "tt_eval: index out of range");
  Eigen::RowVectorXd acc = img.cores[0][(i >> 0) & 1];
  for (index_t nu = 1; nu < img.levels; ++nu) acc = acc * img.cores[nu][(i >> nu) & 1];
  return acc(0);
}

Eigen::VectorXd tt_reconstruct(const QuanticsImage& img) {
  const index_t n = index_t{1} << img.levels;
  // sweep from the last core, building the trailing contraction per prefix
  Eigen::MatrixXd trail(img.cores.back()[0].rows(), 2);
  trail.col(0) = img.cores.back()[0];
  trail.col(1) = img.cores.back()[1];
  for (index_t nu = img.levels - 2; nu >= 0; --nu) {
    Eigen::MatrixXd next(img.cores[nu][0].rows(), 2 * trail.cols());
    next.leftCols(trail.cols()) = img.cores[nu][0] * trail;
    next.rightCols(trail.cols()) = img.cores[nu][1] * trail;
    // column index is (digit_nu, higher digits); reorder so digit_nu is fastest
    Eigen::MatrixXd reordered(next.rows(), next.cols());
    const index_t high = trail.cols();
    for (index_t d = 0; d < 2; ++d)
      for (index_t m = 0; m < high; ++m) reordered.col(d + 2 * m) = next.col(d * high + m);
    trail = reordered;
    if (nu == 0) break;
  }
  require(trail.rows() == 1 && trail.cols() == n, "tt_reconstruct: internal shape error");
  return trail.row(0).transpose();
}

}  // namespace tg
