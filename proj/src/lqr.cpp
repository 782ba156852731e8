#include "uio/lqr.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "uio/errors.hpp"
#include "uio/poleplace.hpp"

namespace uio {

namespace {

constexpr int kMaxNewtonSteps = 100;
constexpr double kStepTol = 1e-12;

// PBH test on every mode with Re >= 0.
void require_stabilizable(const Matrix& a, const Matrix& b) {
  const Eigen::Index n = a.rows();
  Matrix ab(n, n + b.cols());
  ab << a, b;
  const double tol = 1e-10 * std::max(ab.norm(), 1.0);
  for (const Complex& lambda : numlin::eigvals(a)) {
    if (lambda.real() < 0.0) continue;
    Eigen::MatrixXcd pbh(n, n + b.cols());
    pbh << a.cast<Complex>() - lambda * Eigen::MatrixXcd::Identity(n, n),
        b.cast<Complex>();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pbh);
    if (svd.singularValues()(n - 1) <= tol) {
      throw NotStabilizableError(
          "(A, B) is not stabilizable: an unstable mode is uncontrollable");
    }
  }
}

Matrix initial_gain(const Matrix& a, const Matrix& b) {
  const Eigen::Index n = a.rows();
  for (double stretch : {1.0, 1.5, 2.25}) {
    ComplexList poles;
    for (Eigen::Index k = 1; k <= n; ++k) {
      poles.emplace_back(-stretch * static_cast<double>(k), 0.0);
    }
    try {
      Matrix k0 = place_state_feedback(a, b, PoleSet(poles));
      if (numlin::spectral_abscissa(a - b * k0) < 0.0) return k0;
    } catch (const Error&) {
      // collision with eig(A) or an uncontrollable mode; try the next set
    }
  }
  if (numlin::spectral_abscissa(a) < 0.0) return Matrix::Zero(b.cols(), n);
  throw ConvergenceError("could not construct an initial stabilizing gain");
}

}  // namespace

LqrProblem::LqrProblem(Matrix a, Matrix b, Matrix q, Matrix r)
    : a_(std::move(a)), b_(std::move(b)), q_(std::move(q)), r_(std::move(r)) {
  const Eigen::Index n = a_.rows();
  if (n < 1 || a_.cols() != n) throw InputError("LQR: A must be square");
  if (b_.rows() != n || b_.cols() < 1) throw InputError("LQR: B must be n x r, r >= 1");
  if (q_.rows() != n || q_.cols() != n) throw InputError("LQR: Q must be n x n");
  if (r_.rows() != b_.cols() || r_.cols() != b_.cols()) {
    throw InputError("LQR: R must be r x r");
  }
  numlin::require_finite(a_, "LQR A");
  numlin::require_finite(b_, "LQR B");
  numlin::require_finite(q_, "LQR Q");
  numlin::require_finite(r_, "LQR R");
  if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(q_.norm(), 1.0)) {
    throw InputError("LQR: Q is not symmetric");
  }
  if ((r_ - r_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(r_.norm(), 1.0)) {
    throw InputError("LQR: R is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> qe(q_, Eigen::EigenvaluesOnly);
  if (qe.eigenvalues().minCoeff() < -1e-10 * std::max(q_.norm(), 1.0)) {
    throw InputError("LQR: Q is not positive semidefinite");
  }
  Eigen::LLT<Matrix> rl(r_);
  if (rl.info() != Eigen::Success) {
    throw InputError("LQR: R is not positive definite");
  }
}

Matrix solve_care(const LqrProblem& p) {
  const Matrix& a = p.A();
  const Matrix& b = p.B();
  require_stabilizable(a, b);
  const Eigen::LLT<Matrix> r_llt(p.R());

  Matrix k = initial_gain(a, b);
  Matrix x;
  for (int step = 0; step < kMaxNewtonSteps; ++step) {
    const Matrix closed = a - b * k;
    // closed^T X + X closed = -(Q + K^T R K)
    Matrix next = numlin::solve_sylvester(
        closed.transpose(), closed, -(p.Q() + k.transpose() * p.R() * k));
    next = 0.5 * (next + next.transpose());
    k = r_llt.solve(b.transpose() * next);
    if (step > 0 && (next - x).norm() <= kStepTol * next.norm()) {
      return next;
    }
    x = std::move(next);
  }
  throw ConvergenceError("Kleinman-Newton iteration did not converge");
}

Matrix lqr_gain(const LqrProblem& p) {
  return Eigen::LLT<Matrix>(p.R()).solve(p.B().transpose() * solve_care(p));
}

double care_residual(const LqrProblem& p, const Matrix& x) {
  const Matrix& a = p.A();
  const Matrix& b = p.B();
  const Matrix res = a.transpose() * x + x * a -
                     x * b * Eigen::LLT<Matrix>(p.R()).solve(b.transpose() * x) +
                     p.Q();
  return res.norm();
}

}  // namespace uio
