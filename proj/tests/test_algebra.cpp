#include <gtest/gtest.h>

#include <complex>

#include "support/reference.hpp"
#include "talg/algebra.hpp"

using namespace talg;

namespace {

constexpr double kPi = 3.14159265358979323846;

double mat_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

TEST(Algebra, FourierModeMatrixHandValuesOrderTwo) {
  auto a = Algebra::dft({2});
  Eigen::MatrixXcd want(2, 2);
  want << 1, 1, 1, -1;
  EXPECT_LT(mat_diff(a->mode_matrix(0), want), 1e-14);
  EXPECT_LT(mat_diff(a->forward(), want), 1e-14);
}

TEST(Algebra, FourierModeMatrixHandValuesOrderThree) {
  auto a = Algebra::dft({3});
  const cplx w = std::exp(cplx(0, -2.0 * kPi / 3.0));
  Eigen::MatrixXcd want(3, 3);
  want << 1, 1, 1, 1, w, w * w, 1, w * w, w;
  EXPECT_LT(mat_diff(a->mode_matrix(0), want), 1e-14);
}

TEST(Algebra, CosineModeMatrixHandValues) {
  auto a = Algebra::dct({2});
  Eigen::MatrixXcd want(2, 2);
  want << 1, 1, std::cos(kPi / 4.0), std::cos(3.0 * kPi / 4.0);
  EXPECT_LT(mat_diff(a->mode_matrix(0), want), 1e-14);

  auto ao = Algebra::dct({2}, true);
  Eigen::MatrixXcd wanto(2, 2);
  const double s = std::sqrt(0.5);
  wanto << s, s, s, -s;
  EXPECT_LT(mat_diff(ao->mode_matrix(0), wanto), 1e-14);
  // Orthonormal rows: W W^T = I.
  EXPECT_LT(mat_diff(wanto * wanto.transpose(), Eigen::MatrixXcd::Identity(2, 2)), 1e-14);
}

TEST(Algebra, CosineGeneralEntryFormula) {
  auto a = Algebra::dct({5});
  const Eigen::MatrixXcd& w = a->mode_matrix(0);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c)
      EXPECT_NEAR(w(r, c).real(), std::cos(kPi * r * (c + 0.5) / 5.0), 1e-14);
}

TEST(Algebra, FullTransformMatchesModeWiseApplication) {
  for (auto maker : {+[](std::vector<int> s) { return Algebra::dft(std::move(s)); },
                     +[](std::vector<int> s) { return Algebra::dct(std::move(s)); }}) {
    auto a = maker({2, 3});
    DenseArray x = ref::random_array({2, 3}, 42);
    DenseArray y = ref::multiway_apply(x, {a->mode_matrix(0), a->mode_matrix(1)});
    Eigen::VectorXcd fx = a->forward() * Eigen::Map<const Eigen::VectorXcd>(&x[0], x.size());
    for (std::int64_t i = 0; i < x.size(); ++i) EXPECT_LT(std::abs(fx(i) - y[i]), 1e-12);
  }
}

TEST(Algebra, KroneckerFactorOrderPutsLeadingModeSlowest) {
  auto a = Algebra::dft({2, 3});
  // Row-major spectral enumeration: entry (i, j) of the full transform sits
  // at row 3*i1+i2. Probe one entry against the product of mode entries.
  const Eigen::MatrixXcd& f = a->forward();
  const Eigen::MatrixXcd& f2 = a->mode_matrix(0);
  const Eigen::MatrixXcd& f3 = a->mode_matrix(1);
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 3; ++i2)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int j2 = 0; j2 < 3; ++j2)
          EXPECT_LT(std::abs(f(3 * i1 + i2, 3 * j1 + j2) - f2(i1, j1) * f3(i2, j2)), 1e-14);
}

TEST(Algebra, ForwardInverseRoundTrip) {
  for (auto a : {Algebra::dft({2, 2, 2}), Algebra::dct({3, 3}), Algebra::dct({4}, true)}) {
    const Eigen::MatrixXcd prod = a->forward() * a->inverse();
    EXPECT_LT(mat_diff(prod, Eigen::MatrixXcd::Identity(a->dim(), a->dim())), 1e-12);
  }
}

TEST(Algebra, FlatIndexIsRowMajor) {
  auto a = Algebra::dft({2, 3, 4});
  EXPECT_EQ(a->flat_index({0, 0, 0}), 0);
  EXPECT_EQ(a->flat_index({0, 0, 3}), 3);
  EXPECT_EQ(a->flat_index({0, 2, 1}), 9);
  EXPECT_EQ(a->flat_index({1, 2, 3}), 23);
  EXPECT_THROW(a->flat_index({2, 0, 0}), ConfigError);
  EXPECT_THROW(a->flat_index({0, 0}), ConfigError);
}

TEST(Algebra, TrivialAlgebraIsOneDimensional) {
  auto c = Algebra::complex_field();
  EXPECT_EQ(c->dim(), 1);
  EXPECT_TRUE(c->trivial());
  EXPECT_EQ(c->order(), 0);
  EXPECT_LT(std::abs(c->forward()(0, 0) - cplx(1, 0)), 1e-15);
}

TEST(Algebra, SingularCustomTransformIsRejected) {
  Eigen::MatrixXcd sing(2, 2);
  sing << 1, 1, 1, 1;
  EXPECT_THROW(Algebra::custom({2}, {sing}), ConfigError);
}

TEST(Algebra, CustomTransformAccepted) {
  Eigen::MatrixXcd m(2, 2);
  m << 1, 2, 0, 1;
  auto a = Algebra::custom({2}, {m});
  EXPECT_EQ(a->dim(), 2);
  EXPECT_LT(mat_diff(a->forward() * a->inverse(), Eigen::MatrixXcd::Identity(2, 2)), 1e-12);
}

TEST(Algebra, SameAlgebraComparesStructurally) {
  auto a = Algebra::dft({3, 3});
  auto b = Algebra::dft({3, 3});
  auto c = Algebra::dct({3, 3});
  auto d = Algebra::dft({3});
  EXPECT_TRUE(same_algebra(a, a));
  EXPECT_TRUE(same_algebra(a, b));
  EXPECT_FALSE(same_algebra(a, c));
  EXPECT_FALSE(same_algebra(a, d));
  EXPECT_THROW(require_same_algebra(a, c), ConfigError);
}

TEST(Algebra, ShapeValidation) {
  EXPECT_THROW(Algebra::dft({0}), ConfigError);
  EXPECT_THROW(Algebra::dft({2, -1}), ConfigError);
  EXPECT_THROW(Algebra::dft({}), ConfigError);
}

}  // namespace
