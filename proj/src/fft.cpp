#include "tengrid/fft.hpp"

#include <cmath>
#include <numbers>

namespace tg {

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  require((n & (n - 1)) == 0 && n > 0, "fft_inplace: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> x = a[i + j];
        const std::complex<double> y = a[i + j + len / 2] * w;
        a[i + j] = x + y;
        a[i + j + len / 2] = x - y;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= inv;
  }
}

Eigen::VectorXd conv_full_direct(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const index_t nu = u.size(), nv = v.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nu + nv - 1);
  for (index_t j = 0; j < nu; ++j) {
    const double uj = u[j];
    if (uj == 0.0) continue;
    for (index_t k = 0; k < nv; ++k) out[j + k] += uj * v[k];
  }
  return out;
}

Eigen::VectorXd conv_full_fft(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const index_t nu = u.size(), nv = v.size();
  const std::size_t m = next_pow2(static_cast<std::size_t>(nu + nv - 1));
  std::vector<std::complex<double>> a(m), b(m);
  for (index_t i = 0; i < nu; ++i) a[i] = u[i];
  for (index_t i = 0; i < nv; ++i) b[i] = v[i];
  fft_inplace(a, false);
  fft_inplace(b, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  fft_inplace(a, true);
  Eigen::VectorXd out(nu + nv - 1);
  for (index_t i = 0; i < nu + nv - 1; ++i) out[i] = a[i].real();
  return out;
}

Eigen::VectorXd conv_full(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  require(u.size() >= 1 && v.size() >= 1, "conv_full: empty operand");
  if (std::max(u.size(), v.size()) < kFftConvThreshold) return conv_full_direct(u, v);
  return conv_full_fft(u, v);
}

Eigen::VectorXd central_window(const Eigen::VectorXd& full, index_t n) {
  require(full.size() == 2 * n - 1, "central_window: expected full convolution of two length-n vectors");
  Eigen::VectorXd out(n);
  if (n % 2 == 1) {
    const index_t ofs = (n - 1) / 2;
    out = full.segment(ofs, n);
  } else {
    const index_t ofs = n / 2 - 1;
    for (index_t i = 0; i < n; ++i) out[i] = 0.5 * (full[i + ofs] + full[i + ofs + 1]);
  }
  return out;
}

Eigen::VectorXd conv_central(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  require(u.size() == v.size(), "conv_central: operands must have equal length");
  return central_window(conv_full(u, v), u.size());
}

Eigen::MatrixXd conv_central_many(const Eigen::MatrixXd& U, const Eigen::VectorXd& v) {
  const index_t n = v.size();
  require(U.rows() == n, "conv_central_many: column length mismatch");
  Eigen::MatrixXd out(n, U.cols());
  if (n < kFftConvThreshold) {
    for (index_t c = 0; c < U.cols(); ++c)
      out.col(c) = central_window(conv_full_direct(U.col(c), v), n);
    return out;
  }
  const std::size_t m = next_pow2(static_cast<std::size_t>(2 * n - 1));
  std::vector<std::complex<double>> fv(m);
  for (index_t i = 0; i < n; ++i) fv[i] = v[i];
  fft_inplace(fv, false);
  std::vector<std::complex<double>> a(m);
  for (index_t c = 0; c < U.cols(); ++c) {
    std::fill(a.begin(), a.end(), std::complex<double>(0.0, 0.0));
    for (index_t i = 0; i < n; ++i) a[i] = U(i, c);
    fft_inplace(a, false);
    for (std::size_t i = 0; i < m; ++i) a[i] *= fv[i];
    fft_inplace(a, true);
    Eigen::VectorXd full(2 * n - 1);
    for (index_t i = 0; i < 2 * n - 1; ++i) full[i] = a[i].real();
    out.col(c) = central_window(full, n);
  }
  return out;
}

}  // namespace tg
