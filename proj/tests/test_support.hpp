#pragma once

// Independent oracles and generators shared by the unit tests. Nothing here
// calls into the library's numerical routines.

#include <cmath>
#include <initializer_list>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace uio::testing {

using Mat = Eigen::MatrixXd;

inline Mat rows(std::initializer_list<std::initializer_list<double>> values) {
  const auto r = static_cast<Eigen::Index>(values.size());
  const auto c = static_cast<Eigen::Index>(values.begin()->size());
  Mat m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : values) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Mat random_matrix(std::mt19937& rng, Eigen::Index r, Eigen::Index c,
                         double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Laplace expansion along the first row.
inline double cofactor_det(const Mat& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return 1.0;
  if (n == 1) return m(0, 0);
  double det = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Mat minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    det += ((j % 2) ? -1.0 : 1.0) * m(0, j) * cofactor_det(minor);
  }
  return det;
}

// Polynomials in s, coefficient i multiplies s^i.
using Poly = std::vector<double>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline Poly poly_add(const Poly& a, const Poly& b, double sign = 1.0) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += sign * b[i];
  return out;
}

// det(s I - M) by cofactor expansion over polynomial entries.
inline Poly char_poly_cofactor(const Mat& m) {
  const Eigen::Index n = m.rows();
  std::vector<std::vector<Poly>> entries(n, std::vector<Poly>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      entries[i][j] = i == j ? Poly{-m(i, j), 1.0} : Poly{-m(i, j)};

  auto det = [](auto&& self, const std::vector<std::vector<Poly>>& a) -> Poly {
    const std::size_t k = a.size();
    if (k == 1) return a[0][0];
    Poly acc{0.0};
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<std::vector<Poly>> minor;
      for (std::size_t r = 1; r < k; ++r) {
        std::vector<Poly> row;
        for (std::size_t c = 0; c < k; ++c)
          if (c != j) row.push_back(a[r][c]);
        minor.push_back(std::move(row));
      }
      acc = poly_add(acc, poly_mul(a[0][j], self(self, minor)), (j % 2) ? -1.0 : 1.0);
    }
    return acc;
  };
  return det(det, entries);
}

// prod (s - root) for real roots.
inline Poly poly_from_real_roots(const std::vector<double>& roots) {
  Poly p{1.0};
  for (double r : roots) p = poly_mul(p, Poly{-r, 1.0});
  return p;
}

// Solves A X + X B = C through (I kron A + B^T kron I) vec(X) = vec(C).
inline Mat sylvester_kronecker(const Mat& a, const Mat& b, const Mat& c) {
  const Eigen::Index p = a.rows();
  const Eigen::Index s = b.rows();
  Mat big = Mat::Zero(p * s, p * s);
  for (Eigen::Index j = 0; j < s; ++j) {
    big.block(j * p, j * p, p, p) += a;
    for (Eigen::Index k = 0; k < s; ++k) {
      big.block(j * p, k * p, p, p) += b(k, j) * Mat::Identity(p, p);
    }
  }
  Eigen::VectorXd vc = Eigen::Map<const Eigen::VectorXd>(c.data(), p * s);
  Eigen::VectorXd vx = big.fullPivLu().solve(vc);
  return Eigen::Map<Mat>(vx.data(), p, s);
}

// PBH test: lambda is an observable mode of (A, C) iff [A - lambda I; C] has
// full column rank. Uses a complex SVD of the stacked matrix.
inline bool mode_observable(const Mat& a, const Mat& c, std::complex<double> lambda) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd stacked(n + c.rows(), n);
  stacked << a.cast<std::complex<double>>() -
                 lambda * Eigen::MatrixXcd::Identity(n, n),
      c.cast<std::complex<double>>();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
  return svd.singularValues()(n - 1) > 1e-9 * std::max(1.0, stacked.norm());
}

}  // namespace uio::testing
