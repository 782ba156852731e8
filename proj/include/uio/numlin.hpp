#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace uio {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexList = std::vector<Complex>;

namespace numlin {

/// Throws InputError if any entry of `m` is NaN or infinite. `what` names the
/// offending argument in the message.
void require_finite(const Matrix& m, const char* what);

/// Numerical rank: the number of singular values above
/// tol * max(rows, cols) * sigma_max. tol == 0 selects machine epsilon.
int rank(const Matrix& m, double tol = 0.0);

/// Moore-Penrose pseudo-inverse via SVD with the default rank threshold.
Matrix pinv(const Matrix& m);

/// Eigenvalues of a square matrix, with multiplicity. The matrix is balanced
/// first, then reduced by shifted QR on its Hessenberg form. Complex pairs
/// come out as exact conjugates. Ordering: ascending real part, then
/// ascending imaginary part.
ComplexList eigvals(const Matrix& m);

/// Largest real part over the spectrum.
double spectral_abscissa(const Matrix& m);

/// Solves a * x + x * b = c. Throws SingularError when the spectra of `a`
/// and `-b` (numerically) intersect.
Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c);

/// [C; CA; ...; CA^(n-1)].
Matrix obsv_matrix(const Matrix& a, const Matrix& c);

/// E = E1 * E2 with E1 of full column rank rho = rank(E). A full column rank
/// E factors as (E, I).
std::pair<Matrix, Matrix> full_rank_factorization(const Matrix& e,
                                                  double tol = 0.0);

/// Sorts by real part, then imaginary part. Used for multiset comparisons.
void sort_spectrum(ComplexList& values);

/// Largest pairwise distance between two sorted spectra of equal size;
/// +inf when the sizes differ.
double spectrum_distance(ComplexList lhs, ComplexList rhs);

}  // namespace numlin
}  // namespace uio
