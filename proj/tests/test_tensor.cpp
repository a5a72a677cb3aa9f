#include <doctest.h>

#include <random>

#include "tengrid/fft.hpp"
#include "tengrid/tensor.hpp"
#include "oracles.hpp"

using namespace tg;

namespace {

CanonicalTensor3 ones_rank1(const std::array<index_t, 3>& d, double weight = 1.0) {
  CanonicalTensor3 t;
  t.weight = Eigen::VectorXd::Constant(1, weight);
  for (int ax = 0; ax < 3; ++ax) t.factor[ax] = Eigen::MatrixXd::Ones(d[ax], 1);
  return t;
}

}  // namespace

TEST_SUITE("tensor") {

TEST_CASE("1D convolution: direct and FFT paths agree to 1e-12") {
  std::mt19937 rng(1);
  std::normal_distribution<double> d;
  for (index_t n : {5, 31, 128, 200, 513}) {
    Eigen::VectorXd u(n), v(n);
    for (index_t i = 0; i < n; ++i) {
      u[i] = d(rng);
      v[i] = d(rng);
    }
    Eigen::VectorXd a = conv_full_direct(u, v);
    Eigen::VectorXd b = conv_full_fft(u, v);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("to_dense reconstructions") {
  std::array<index_t, 3> d{5, 6, 4};
  CHECK(to_dense(CanonicalTensor3::zero(d)).data.cwiseAbs().maxCoeff() == 0.0);
  CHECK(to_dense(ones_rank1(d, 2.0)).data.minCoeff() == doctest::Approx(2.0));

  std::mt19937 rng(2);
  auto t = oracle::random_canonical(rng, {8, 8, 8}, 3);
  auto lib = to_dense(t);
  auto ref = oracle::dense_from_canonical(t);
  CHECK((lib.data - ref.data).cwiseAbs().maxCoeff() <= 1e-14 * ref.data.cwiseAbs().maxCoeff());

  CanonicalTensor3 huge = ones_rank1({1 << 10, 1 << 10, 1 << 10});
  CHECK_THROWS_AS(to_dense(huge), std::invalid_argument);
}

TEST_CASE("scalar product: examples and dense equivalence") {
  CHECK(scalar_product(ones_rank1({4, 4, 4}), ones_rank1({4, 4, 4})) == doctest::Approx(64.0));

  // orthogonal columns on axis 1 kill the product
  CanonicalTensor3 a = ones_rank1({4, 4, 4});
  CanonicalTensor3 b = ones_rank1({4, 4, 4});
  b.factor[0].col(0) << 1, -1, 1, -1;
  CHECK(scalar_product(a, b) == doctest::Approx(0.0));

  std::mt19937 rng(3);
  auto x = oracle::random_canonical(rng, {8, 8, 8}, 2);
  auto y = oracle::random_canonical(rng, {8, 8, 8}, 3);
  const double dense = oracle::dense_from_canonical(x).data.dot(oracle::dense_from_canonical(y).data);
  CHECK(scalar_product(x, y) == doctest::Approx(dense).epsilon(1e-12));

  CHECK_THROWS_AS(scalar_product(x, ones_rank1({7, 8, 8})), std::invalid_argument);
}

TEST_CASE("scalar product is symmetric and bilinear") {
  std::mt19937 rng(4);
  auto x = oracle::random_canonical(rng, {6, 5, 7}, 3);
  auto y = oracle::random_canonical(rng, {6, 5, 7}, 2);
  auto z = oracle::random_canonical(rng, {6, 5, 7}, 2);
  CHECK(scalar_product(x, y) == doctest::Approx(scalar_product(y, x)).epsilon(1e-13));
  const double lhs = scalar_product(x, add(scale(y, 2.0), z));
  CHECK(lhs == doctest::Approx(2.0 * scalar_product(x, y) + scalar_product(x, z)).epsilon(1e-12));
  CHECK(scalar_product(x, x) >= 0.0);
}

TEST_CASE("hadamard: identity, zero, dense equivalence, rank arithmetic") {
  std::mt19937 rng(5);
  auto a = oracle::random_canonical(rng, {8, 8, 8}, 2);
  auto one = ones_rank1({8, 8, 8});
  CHECK(relative_error(hadamard(a, one), a) <= 1e-13);

  auto zero = CanonicalTensor3::zero({8, 8, 8});
  CHECK(hadamard(a, zero).rank() == 0);
  CHECK(to_dense(hadamard(a, zero)).data.cwiseAbs().maxCoeff() == 0.0);

  auto b = oracle::random_canonical(rng, {8, 8, 8}, 2);
  auto h = hadamard(a, b);
  CHECK(h.rank() == 4);
  const Eigen::VectorXd dense =
      oracle::dense_from_canonical(a).data.cwiseProduct(oracle::dense_from_canonical(b).data);
  CHECK((to_dense(h).data - dense).norm() <= 1e-13 * dense.norm());
}

TEST_CASE("add: concatenation semantics") {
  std::mt19937 rng(6);
  auto a = oracle::random_canonical(rng, {7, 6, 5}, 2);
  auto zero = CanonicalTensor3::zero({7, 6, 5});
  auto s = add(a, zero);
  CHECK(s.rank() == 2);
  CHECK(relative_error(s, a) <= 1e-14);

  auto cancel = add(a, scale(a, -1.0));
  CHECK(cancel.rank() == 4);
  CHECK(to_dense(cancel).data.cwiseAbs().maxCoeff() <=
        1e-14 * oracle::dense_from_canonical(a).data.cwiseAbs().maxCoeff());

  auto b = oracle::random_canonical(rng, {7, 6, 5}, 3);
  auto sum = add(a, b);
  CHECK(sum.rank() == 5);
  const Eigen::VectorXd dense =
      oracle::dense_from_canonical(a).data + oracle::dense_from_canonical(b).data;
  CHECK((to_dense(sum).data - dense).norm() <= 1e-14 * dense.norm());
}

TEST_CASE("convolve: delta identity on an odd grid") {
  const index_t n = 17;
  const double h = 0.25;
  std::mt19937 rng(7);
  auto a = oracle::random_canonical(rng, {n, n, n}, 2);
  CanonicalTensor3 delta;
  delta.weight = Eigen::VectorXd::Ones(1);
  for (int ax = 0; ax < 3; ++ax) {
    delta.factor[ax] = Eigen::MatrixXd::Zero(n, 1);
    delta.factor[ax]((n - 1) / 2, 0) = 1.0 / h;  // h-scaling removed
  }
  auto c = convolve(a, delta, h);
  CHECK(relative_error(c, a) <= 1e-13);
}

TEST_CASE("convolve: Gaussian pair matches the direct 3D oracle") {
  const index_t n = 16;
  const double h = 0.4;
  CanonicalTensor3 a, b;
  a.weight = b.weight = Eigen::VectorXd::Ones(1);
  for (int ax = 0; ax < 3; ++ax) {
    a.factor[ax] = Eigen::MatrixXd(n, 1);
    b.factor[ax] = Eigen::MatrixXd(n, 1);
    for (index_t i = 0; i < n; ++i) {
      const double x = (i - 0.5 * (n - 1)) * h;
      a.factor[ax](i, 0) = std::exp(-0.7 * x * x);
      b.factor[ax](i, 0) = std::exp(-1.1 * x * x);
    }
  }
  auto lib = to_dense(convolve(a, b, h));
  auto ref = oracle::dense_convolve_direct(oracle::dense_from_canonical(a),
                                           oracle::dense_from_canonical(b), {h, h, h});
  CHECK((lib.data - ref.data).norm() <= 1e-12 * ref.data.norm());
}

TEST_CASE("convolve: random rank-2 pair matches the dense FFT oracle at n=32") {
  const index_t n = 32;
  std::mt19937 rng(8);
  auto a = oracle::random_canonical(rng, {n, n, n}, 2);
  auto b = oracle::random_canonical(rng, {n, n, n}, 2);
  auto c = convolve(a, b, 0.2);
  CHECK(c.rank() == 4);
  auto ref = oracle::dense_convolve_fft(oracle::dense_from_canonical(a),
                                        oracle::dense_from_canonical(b), {0.2, 0.2, 0.2});
  CHECK((to_dense(c).data - ref.data).norm() <= 1e-10 * ref.data.norm());
  CHECK_THROWS_AS(convolve(a, oracle::random_canonical(rng, {n, n, 8}, 1), 0.2),
                  std::invalid_argument);
}

TEST_CASE("norms and relative error") {
  CHECK(frobenius_norm(ones_rank1({4, 4, 4})) == doctest::Approx(8.0));
  std::mt19937 rng(9);
  auto a = oracle::random_canonical(rng, {8, 8, 8}, 3);
  // the norm of a near-zero difference is evaluated through Gram products,
  // so self-comparison floors near sqrt(machine epsilon)
  CHECK(relative_error(a, a) <= 1e-7);
  auto b = oracle::random_canonical(rng, {8, 8, 8}, 2);
  const double dense = (oracle::dense_from_canonical(a).data - oracle::dense_from_canonical(b).data).norm() /
                       oracle::dense_from_canonical(b).data.norm();
  CHECK(relative_error(a, b) == doctest::Approx(dense).epsilon(1e-13));
  CHECK_THROWS_AS(relative_error(a, CanonicalTensor3::zero({8, 8, 8})), std::invalid_argument);
}

TEST_CASE("tucker reconstruction and mixed scalar products") {
  std::mt19937 rng(10);
  std::normal_distribution<double> d;
  TuckerTensor3 t;
  t.core = DenseTensor3(2, 3, 2);
  for (auto& v : t.core.data) v = d(rng);
  for (int ax = 0; ax < 3; ++ax) {
    Eigen::MatrixXd m(8, t.core.dims[ax]);
    for (index_t i = 0; i < m.size(); ++i) m(i) = d(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    t.side[ax] = qr.householderQ() * Eigen::MatrixXd::Identity(8, t.core.dims[ax]);
  }
  CHECK(t.orthonormality_defect() <= 1e-12);
  auto lib = to_dense(t);
  auto ref = oracle::dense_from_tucker(t);
  CHECK((lib.data - ref.data).norm() <= 1e-13 * ref.data.norm());
  CHECK(frobenius_norm(t) == doctest::Approx(ref.data.norm()).epsilon(1e-12));

  auto c = oracle::random_canonical(rng, {8, 8, 8}, 3);
  const double mixed = scalar_product(t, c);
  CHECK(mixed == doctest::Approx(ref.data.dot(oracle::dense_from_canonical(c).data)).epsilon(1e-12));

  TuckerTensor3 t2 = t;
  CHECK(scalar_product(t, t2) == doctest::Approx(ref.data.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("dense-image homomorphism over random inputs") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<index_t> dn(4, 24), dr(0, 4);
  for (int rep = 0; rep < 8; ++rep) {
    std::array<index_t, 3> dims{dn(rng), dn(rng), dn(rng)};
    auto a = oracle::random_canonical(rng, dims, dr(rng));
    auto b = oracle::random_canonical(rng, dims, dr(rng));
    auto da = oracle::dense_from_canonical(a);
    auto db = oracle::dense_from_canonical(b);
    const double scale = std::max(1.0, da.data.norm() * db.data.norm());
    CHECK((to_dense(add(a, b)).data - (da.data + db.data)).norm() <= 1e-10 * scale);
    CHECK((to_dense(hadamard(a, b)).data - da.data.cwiseProduct(db.data)).norm() <= 1e-10 * scale);
    auto conv = to_dense(convolve(a, b, 0.5));
    auto ref = oracle::dense_convolve_fft(da, db, {0.5, 0.5, 0.5});
    CHECK((conv.data - ref.data).norm() <= 1e-10 * std::max(ref.data.norm(), scale));
    CHECK(add(a, b).rank() == a.rank() + b.rank());
    CHECK(hadamard(a, b).rank() == a.rank() * b.rank());
    CHECK(convolve(a, b, 0.5).rank() == a.rank() * b.rank());
  }
}

TEST_CASE("normalize folds column norms into weights") {
  std::mt19937 rng(12);
  auto a = oracle::random_canonical(rng, {6, 6, 6}, 3);
  auto before = oracle::dense_from_canonical(a);
  a.normalize();
  for (int ax = 0; ax < 3; ++ax)
    for (index_t k = 0; k < a.rank(); ++k)
      CHECK(a.factor[ax].col(k).norm() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK((oracle::dense_from_canonical(a).data - before.data).norm() <= 1e-13 * before.data.norm());
}

}  // TEST_SUITE
