#include "uio/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "uio/errors.hpp"

namespace uio::numlin {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double rank_threshold(const Eigen::VectorXd& sv, Eigen::Index rows,
                      Eigen::Index cols, double tol) {
  if (sv.size() == 0) return 0.0;
  const double t = tol > 0.0 ? tol : kEps;
  return t * static_cast<double>(std::max(rows, cols)) * sv(0);
}

// Diagonal similarity scaling by powers of two so that row and column norms
// of the off-diagonal part are comparable. Exact in floating point.
Matrix balance(Matrix a) {
  const Eigen::Index n = a.rows();
  constexpr double kRadix = 2.0;
  constexpr double kRadixSq = kRadix * kRadix;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / kRadix;
      while (c < g) {
        f *= kRadix;
        c *= kRadixSq;
      }
      g = r * kRadix;
      while (c > g) {
        f /= kRadix;
        c /= kRadixSq;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return a;
}

}  // namespace

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InputError(std::string(what) + " contains non-finite entries");
  }
}

int rank(const Matrix& m, double tol) {
  require_finite(m, "rank argument");
  if (tol < 0.0) throw InputError("rank tolerance must be nonnegative");
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double thresh = rank_threshold(sv, m.rows(), m.cols(), tol);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > thresh) ++r;
  }
  return r;
}

Matrix pinv(const Matrix& m) {
  require_finite(m, "pinv argument");
  if (m.size() == 0) throw InputError("pinv of an empty matrix");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double thresh = rank_threshold(sv, m.rows(), m.cols(), 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > thresh) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

ComplexList eigvals(const Matrix& m) {
  require_finite(m, "eigvals argument");
  if (m.rows() != m.cols()) throw InputError("eigvals requires a square matrix");
  const Eigen::Index n = m.rows();
  if (n == 0) return {};
  Eigen::EigenSolver<Matrix> solver;
  solver.setMaxIterations(500 * n);
  solver.compute(balance(m), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigenvalue iteration did not converge");
  }
  ComplexList out(solver.eigenvalues().begin(), solver.eigenvalues().end());
  sort_spectrum(out);
  return out;
}

double spectral_abscissa(const Matrix& m) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Complex& v : eigvals(m)) best = std::max(best, v.real());
  return best;
}

Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c) {
  require_finite(a, "sylvester A");
  require_finite(b, "sylvester B");
  require_finite(c, "sylvester C");
  if (a.rows() != a.cols() || b.rows() != b.cols() || c.rows() != a.rows() ||
      c.cols() != b.rows()) {
    throw InputError("sylvester: dimension mismatch");
  }
  const Eigen::Index p = a.rows();
  const Eigen::Index s = b.rows();
  if (p == 0 || s == 0) return Matrix::Zero(p, s);

  // Bartels-Stewart on complex Schur forms: a = U Ta U*, b = V Tb V*.
  using CMatrix = Eigen::MatrixXcd;
  Eigen::ComplexSchur<Matrix> sa(a);
  Eigen::ComplexSchur<Matrix> sb(b);
  if (sa.info() != Eigen::Success || sb.info() != Eigen::Success) {
    throw ConvergenceError("sylvester: Schur reduction did not converge");
  }
  const CMatrix& ta = sa.matrixT();
  const CMatrix& tb = sb.matrixT();
  const CMatrix f = sa.matrixU().adjoint() * c.cast<Complex>() * sb.matrixU();

  const double scale = a.norm() + b.norm();
  const double sep_floor = 100.0 * kEps * std::max(scale, 1e-300);
  CMatrix y(p, s);
  for (Eigen::Index j = 0; j < s; ++j) {
    Eigen::VectorXcd rhs = f.col(j);
    for (Eigen::Index k = 0; k < j; ++k) rhs -= tb(k, j) * y.col(k);
    CMatrix lhs = ta;
    lhs.diagonal().array() += tb(j, j);
    for (Eigen::Index i = 0; i < p; ++i) {
      if (std::abs(lhs(i, i)) <= sep_floor) {
        throw SingularError(
            "sylvester: spectra of A and -B intersect; no unique solution");
      }
    }
    y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  const CMatrix x = sa.matrixU() * y * sb.matrixU().adjoint();
  return x.real();
}

Matrix obsv_matrix(const Matrix& a, const Matrix& c) {
  if (a.rows() != a.cols()) throw InputError("obsv: A must be square");
  if (c.cols() != a.rows()) throw InputError("obsv: C and A are not conformable");
  require_finite(a, "obsv A");
  require_finite(c, "obsv C");
  const Eigen::Index n = a.rows();
  const Eigen::Index m = c.rows();
  Matrix o(n * m, n);
  Matrix block = c;
  for (Eigen::Index k = 0; k < n; ++k) {
    o.middleRows(k * m, m) = block;
    block = block * a;
  }
  return o;
}

std::pair<Matrix, Matrix> full_rank_factorization(const Matrix& e,
                                                  double tol) {
  require_finite(e, "factorization argument");
  const int rho = rank(e, tol);
  if (rho == 0) {
    throw DegenerateInputError("E is zero: no unknown input is present");
  }
  const Eigen::Index q = e.cols();
  if (rho == q) return {e, Matrix::Identity(q, q)};

  // E P = Q R; keep the leading rho columns of Q scaled by R11.
  Eigen::ColPivHouseholderQR<Matrix> qr(e);
  const Matrix qmat = qr.householderQ() * Matrix::Identity(e.rows(), rho);
  const Matrix r = qr.matrixR().topRows(rho).triangularView<Eigen::Upper>();
  const Matrix r11 = r.leftCols(rho);
  Matrix e1 = qmat * r11;
  Matrix top = r11.triangularView<Eigen::Upper>().solve(r);
  Matrix e2 = top * qr.colsPermutation().transpose();
  return {std::move(e1), std::move(e2)};
}

void sort_spectrum(ComplexList& values) {
  std::sort(values.begin(), values.end(), [](const Complex& l, const Complex& r) {
    if (l.real() != r.real()) return l.real() < r.real();
    return l.imag() < r.imag();
  });
}

double spectrum_distance(ComplexList lhs, ComplexList rhs) {
  if (lhs.size() != rhs.size()) return std::numeric_limits<double>::infinity();
  sort_spectrum(lhs);
  sort_spectrum(rhs);
  // Nearest unmatched partner; equals the sorted pairing when values are
  // well separated and tolerates near-ties in the real part.
  std::vector<bool> used(rhs.size(), false);
  double worst = 0.0;
  for (const Complex& v : lhs) {
    std::size_t best = rhs.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(v - rhs[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

}  // namespace uio::numlin
