#include "uio/poleplace.hpp"

#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "uio/errors.hpp"

namespace uio {
namespace {

using testing::random_matrix;
using testing::rows;

double placed_error(const Matrix& a, const Matrix& c, const Matrix& k1,
                    const ComplexList& poles) {
  return numlin::spectrum_distance(numlin::eigvals(a - k1 * c), poles);
}

TEST(PlacePoles, DiagonalShift) {
  const Matrix a = rows({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}});
  const Matrix c = Matrix::Identity(3, 3);
  const ComplexList poles{{-1, 0}, {-2, 0}, {-3, 0}};
  // The direct solution shifts each diagonal entry.
  const Matrix direct = rows({{2, 0, 0}, {0, 4, 0}, {0, 0, 6}});
  EXPECT_LE(placed_error(a, c, direct, poles), 1e-14);

  const Matrix k1 = place_poles(a, c, PoleSet(poles));
  EXPECT_LE(placed_error(a, c, k1, poles), 1e-6);
}

TEST(PlacePoles, ThirdOrderDecoupledPair) {
  const Matrix a1 = rows({{0, 0, 0}, {-1, 0, 0}, {0, -1, -1}});
  const Matrix c = rows({{1, 0, 0}, {0, 0, 1}});
  const ComplexList poles{{-2, 0}, {-10, 0}, {-5, 0}};
  const Matrix k1 = place_poles(a1, c, PoleSet(poles));
  EXPECT_EQ(k1.rows(), 3);
  EXPECT_EQ(k1.cols(), 2);
  EXPECT_LE(placed_error(a1, c, k1, poles), 1e-6);
}

TEST(PlacePoles, Scalar) {
  const Matrix k1 = place_poles(rows({{0}}), rows({{1}}), PoleSet(ComplexList{{-4, 0}}));
  EXPECT_NEAR(k1(0, 0), 4.0, 1e-12);
}

TEST(PlacePoles, ComplexPairs) {
  const Matrix a = rows({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, -2, 3, -1}});
  const Matrix c = rows({{1, 0, 0, 0}});
  const ComplexList poles{{-1, 2}, {-1, -2}, {-3, 0.5}, {-3, -0.5}};
  const Matrix k1 = place_poles(a, c, PoleSet(poles));
  EXPECT_LE(placed_error(a, c, k1, poles), 1e-6);
}

TEST(PlacePoles, RandomObservablePairs) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> ndist(1, 6);
  std::uniform_real_distribution<double> pole(-8.0, -0.5);
  int placed = 0;
  while (placed < 100) {
    const int n = ndist(rng);
    const int m = std::uniform_int_distribution<int>(1, std::min(3, n))(rng);
    const Matrix a = random_matrix(rng, n, n, 2.0);
    const Matrix c = random_matrix(rng, m, n);
    // Nearly unobservable draws make the closed-loop spectrum itself too
    // sensitive to resolve at 1e-6 in double precision.
    Eigen::JacobiSVD<Matrix> svd(numlin::obsv_matrix(a, c));
    const Vector sv = svd.singularValues();
    if (sv(n - 1) < 1e-4 * sv(0)) continue;
    ComplexList poles;
    for (int i = 0; i < n; ++i) poles.emplace_back(pole(rng), 0.0);
    const Matrix k1 = place_poles(a, c, PoleSet(poles));
    EXPECT_LE(placed_error(a, c, k1, poles), 1e-6) << "n=" << n << " m=" << m;
    ++placed;
  }
}

TEST(PlacePoles, DualityWithStateFeedback) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const int m = 1 + trial % 2;
    const Matrix a = random_matrix(rng, n, n);
    const Matrix c = random_matrix(rng, m, n);
    ComplexList poles;
    for (int i = 0; i < n; ++i) poles.emplace_back(-1.0 - i, 0.0);
    const Matrix k1 = place_poles(a, c, PoleSet(poles));
    const Matrix kf = place_state_feedback(a.transpose(), c.transpose(), PoleSet(poles));
    EXPECT_EQ(kf, k1.transpose());
    EXPECT_LE(placed_error(a, c, k1, poles), 1e-6);
    EXPECT_LE(numlin::spectrum_distance(
                  numlin::eigvals(a.transpose() - c.transpose() * kf), poles),
              1e-6);
  }
}

TEST(PlacePoles, RepeatedRealPoleCharacteristicPolynomial) {
  for (int n = 2; n <= 4; ++n) {
    // Companion-like single-output chain: observable by construction.
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
    a(n - 1, 0) = 0.5;
    Matrix c = Matrix::Zero(1, n);
    c(0, 0) = 1.0;
    for (int k = 2; k <= n; ++k) {
      ComplexList poles(static_cast<std::size_t>(k), Complex(-2.0, 0.0));
      std::vector<double> roots(static_cast<std::size_t>(k), -2.0);
      for (int i = k; i < n; ++i) {
        poles.emplace_back(-5.0 - i, 0.0);
        roots.push_back(-5.0 - i);
      }
      const Matrix k1 = place_poles(a, c, PoleSet(poles));
      const testing::Poly got = testing::char_poly_cofactor(a - k1 * c);
      const testing::Poly want = testing::poly_from_real_roots(roots);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(got[i], want[i], 1e-8 * std::max(1.0, std::abs(want[i])))
            << "n=" << n << " multiplicity=" << k << " coefficient " << i;
      }
    }
  }
}

TEST(PlacePoles, Deterministic) {
  const Matrix a1 = rows({{0, 0, 1, 0}, {0, 0, 0, 1}, {-2, 1, -1, 0}, {0, 0, 0, 0}});
  const PoleSet ps({{-2, 0}, {-10, 0}, {-5, 0}, {-3, 0}});
  const Matrix first = place_poles(a1, Matrix::Identity(4, 4), ps);
  const Matrix second = place_poles(a1, Matrix::Identity(4, 4), ps);
  EXPECT_TRUE((first.array() == second.array()).all());
}

TEST(PlacePoles, UnobservablePairRejected) {
  const Matrix a = rows({{-1, 0}, {0, 2}});
  const Matrix c = rows({{1, 0}});
  EXPECT_THROW(place_poles(a, c, PoleSet({{-1, 0}, {-2, 0}})), InputError);
}

TEST(PlacePoles, CollisionRejected) {
  const Matrix a = rows({{-1, 1}, {0, -2}});
  const Matrix c = rows({{1, 0}});
  EXPECT_THROW(place_poles(a, c, PoleSet({{-1, 0}, {-3, 0}})), SingularError);
}

TEST(PlacePoles, WrongCountRejected) {
  EXPECT_THROW(place_poles(Matrix::Identity(2, 2), Matrix::Identity(2, 2), PoleSet(ComplexList{{-1, 0}})),
               InputError);
}

TEST(PoleSet, Validation) {
  EXPECT_THROW(PoleSet(ComplexList{{-1, 1}}), InputError);
  EXPECT_THROW(PoleSet({{-1, 1}, {-1, -2}}), InputError);
  EXPECT_THROW(PoleSet(ComplexList{{0, 0}}), InputError);
  EXPECT_THROW(PoleSet(ComplexList{{0.5, 0}}), InputError);
  EXPECT_NO_THROW(PoleSet({{-1, 1}, {-1, -1}, {-3, 0}}));
}

}  // namespace
}  // namespace uio
