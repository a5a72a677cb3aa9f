#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "tengrid/common.hpp"

namespace tg {

/// In-place iterative radix-2 FFT; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

/// Full discrete convolution, length u.size()+v.size()-1.
/// Direct summation below kFftConvThreshold, zero-padded FFT above; the two
/// paths agree to ~1e-14 relative and are cross-checked in the test suite.
inline constexpr index_t kFftConvThreshold = 128;

Eigen::VectorXd conv_full(const Eigen::VectorXd& u, const Eigen::VectorXd& v);
Eigen::VectorXd conv_full_direct(const Eigen::VectorXd& u, const Eigen::VectorXd& v);
Eigen::VectorXd conv_full_fft(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Central window of the full convolution of two length-n vectors sampled on
/// the same symmetric cell-center grid.  The full convolution lives on nodes
/// (m - (n-1))*h; the window re-samples it at the cell centers:
/// odd n hits conv nodes exactly, even n averages the two straddling nodes.
Eigen::VectorXd central_window(const Eigen::VectorXd& full, index_t n);

/// central_window(conv_full(u, v), n) for same-length u, v.
Eigen::VectorXd conv_central(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Convolve every column of U with the same kernel vector v (FFT of v is
/// computed once), returning the centrally windowed results column-wise.
Eigen::MatrixXd conv_central_many(const Eigen::MatrixXd& U, const Eigen::VectorXd& v);

}  // namespace tg
