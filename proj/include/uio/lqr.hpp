#pragma once

#include "uio/numlin.hpp"

namespace uio {

/// Infinite-horizon continuous LQR data. Q symmetric PSD, R symmetric PD,
/// (A, B) stabilizable. The constructor checks everything but
/// stabilizability, which solve_care reports.
class LqrProblem {
 public:
  LqrProblem(Matrix a, Matrix b, Matrix q, Matrix r);

  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }
  const Matrix& Q() const { return q_; }
  const Matrix& R() const { return r_; }

 private:
  Matrix a_, b_, q_, r_;
};

/// Stabilizing solution of A^T P + P A - P B R^-1 B^T P + Q = 0 by
/// Kleinman-Newton iteration.
Matrix solve_care(const LqrProblem& p);

/// K = R^-1 B^T P.
Matrix lqr_gain(const LqrProblem& p);

/// ||A^T P + P A - P B R^-1 B^T P + Q||_F.
double care_residual(const LqrProblem& p, const Matrix& x);

}  // namespace uio
