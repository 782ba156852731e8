#pragma once

#include <optional>
#include <string>

#include "uio/numlin.hpp"
#include "uio/poleplace.hpp"

namespace uio {

/// Plant x' = A x + B u + E d, y = C x with n states, r known inputs,
/// m outputs and q unknown inputs. r may be zero (B is n x 0).
class LinearSystem {
 public:
  LinearSystem(Matrix a, Matrix b, Matrix c, Matrix e);

  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }
  const Matrix& C() const { return c_; }
  const Matrix& E() const { return e_; }

  Eigen::Index n() const { return a_.rows(); }
  Eigen::Index r() const { return b_.cols(); }
  Eigen::Index m() const { return c_.rows(); }
  Eigen::Index q() const { return e_.cols(); }

  /// Same plant with the unknown-input map replaced.
  LinearSystem with_e(Matrix e) const;

 private:
  Matrix a_, b_, c_, e_;
};

/// Observer z' = F z + T B u + K y, x_hat = z + H y with K = K1 + K2.
struct UioGains {
  Matrix F, T, K, H, K1, K2;
};

struct Decoupling {
  Matrix H;
  Matrix T;
  Matrix A1;
};

/// Similarity P splitting (A1, C) into observable and unobservable parts:
/// P A1 P^-1 = [[A11, 0], [A12, A22]], C P^-1 = [Cstar, 0]. P is orthogonal.
struct ObservableDecomposition {
  Matrix P;
  Matrix A11;
  Matrix A12;
  Matrix A22;
  Matrix Cstar;
  int n1 = 0;
};

struct ExistenceReport {
  int rank_ce = 0;
  int rank_e = 0;
  bool rank_condition_ok = false;
  bool detectable = false;
  ComplexList unstable_unobservable_modes;
  bool uio_exists = false;
};

struct DesignResult {
  UioGains gains;
  /// True when E lacked full column rank and E1 of E = E1 E2 was used.
  bool e_reduced = false;
  Matrix e_used;
  /// Rank of the observability matrix of (A1, C).
  int n1 = 0;
};

/// Residuals are max-abs entry norms.
struct GainCheck {
  double decoupling = 0.0;  // (HC - I) E
  double t_residual = 0.0;  // T - (I - HC)
  double f_residual = 0.0;  // F - (A - HCA - K1 C)
  double k2_residual = 0.0; // K2 - F H
  double k_residual = 0.0;  // K - (K1 + K2)
  double spectral_abscissa = 0.0;
  double tol = 0.0;
  bool passed = false;
};

/// Tolerance for gains computed by this library.
inline constexpr double kVerifyTol = 1e-8;
/// Tolerance for gains rounded to four significant digits.
inline constexpr double kVerifyTolRounded = 1e-1;

/// H = E [(CE)^T CE]^-1 (CE)^T, T = I - HC, A1 = T A. Requires
/// rank(CE) = rank(E) = q; throws NoUioError when the ranks differ.
Decoupling compute_decoupling(const LinearSystem& sys);

/// A1 = A - E [(CE)^T CE]^-1 (CE)^T C A, evaluated as written.
Matrix a1_closed_form(const LinearSystem& sys);

ObservableDecomposition observable_decomposition(const Matrix& a1,
                                                 const Matrix& c);

/// Detectable iff every eigenvalue of A22 has Re < 0. Returns the offending
/// modes.
std::pair<bool, ComplexList> detectability(const Matrix& a1, const Matrix& c);

ExistenceReport check_existence(const LinearSystem& sys);

/// Full design procedure. `poles` has n entries when (C, A1) is observable
/// and n1 entries otherwise; in the latter case the free block of the gain
/// is zero and eig(F) = poles + eig(A22).
DesignResult design(const LinearSystem& sys, const ComplexList& poles);

/// K1 = (A1 - Fdes) C^-1 for square invertible C, so A1 - K1 C = Fdes.
Matrix place_full_measurement(const Matrix& a1, const Matrix& c,
                              const Matrix& f_desired);

/// Design with a prescribed F (square invertible C only).
DesignResult design_full_measurement(const LinearSystem& sys,
                                     const Matrix& f_desired);

GainCheck verify_gains(const LinearSystem& sys, const UioGains& g,
                       double tol = kVerifyTol);

}  // namespace uio
