#include "uio/observer.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "uio/errors.hpp"

namespace uio {

namespace {

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

std::string modes_to_string(const ComplexList& modes) {
  std::ostringstream os;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i) os << ", ";
    os << modes[i].real();
    if (modes[i].imag() != 0.0) {
      os << (modes[i].imag() > 0 ? "+" : "-") << std::abs(modes[i].imag()) << "i";
    }
  }
  return os.str();
}

// E (CE)^+ : equals E [(CE)^T CE]^-1 (CE)^T whenever CE has full column rank.
Matrix decoupling_h_general(const LinearSystem& sys) {
  return sys.E() * numlin::pinv(sys.C() * sys.E());
}

}  // namespace

LinearSystem::LinearSystem(Matrix a, Matrix b, Matrix c, Matrix e)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), e_(std::move(e)) {
  if (a_.rows() < 1 || a_.rows() != a_.cols()) {
    throw InputError("A must be square with at least one state");
  }
  const Eigen::Index n = a_.rows();
  if (b_.rows() != n) throw InputError("B must have as many rows as A");
  if (c_.rows() < 1 || c_.cols() != n) {
    throw InputError("C must be m x n with m >= 1");
  }
  if (e_.rows() != n || e_.cols() < 1) {
    throw InputError("E must be n x q with q >= 1");
  }
  numlin::require_finite(a_, "A");
  numlin::require_finite(b_, "B");
  numlin::require_finite(c_, "C");
  numlin::require_finite(e_, "E");
  if (e_.isZero(0.0)) {
    throw DegenerateInputError("E is zero: no unknown input is present");
  }
}

LinearSystem LinearSystem::with_e(Matrix e) const {
  return LinearSystem(a_, b_, c_, std::move(e));
}

Decoupling compute_decoupling(const LinearSystem& sys) {
  const Matrix ce = sys.C() * sys.E();
  const int rank_ce = numlin::rank(ce);
  const int rank_e = numlin::rank(sys.E());
  if (rank_ce != rank_e) {
    std::ostringstream os;
    os << "rank(CE) = " << rank_ce << " differs from rank(E) = " << rank_e
       << "; no unknown input observer exists";
    throw NoUioError(os.str(), rank_ce, rank_e);
  }
  if (rank_e != sys.q()) {
    throw InputError(
        "E must have full column rank; factor it as E1 E2 and pass E1");
  }
  const Matrix gram = ce.transpose() * ce;
  const Matrix h = sys.E() * gram.llt().solve(ce.transpose());
  const Eigen::Index n = sys.n();
  Matrix t = Matrix::Identity(n, n) - h * sys.C();
  Matrix a1 = t * sys.A();
  return {h, std::move(t), std::move(a1)};
}

Matrix a1_closed_form(const LinearSystem& sys) {
  const Matrix ce = sys.C() * sys.E();
  const Matrix gram = ce.transpose() * ce;
  return sys.A() -
         sys.E() * gram.llt().solve(ce.transpose()) * sys.C() * sys.A();
}

ObservableDecomposition observable_decomposition(const Matrix& a1,
                                                 const Matrix& c) {
  const Matrix o = numlin::obsv_matrix(a1, c);
  const Eigen::Index n = a1.rows();
  const int n1 = numlin::rank(o);
  ObservableDecomposition d;
  d.n1 = n1;
  if (n1 == n) {
    d.P = Matrix::Identity(n, n);
    d.A11 = a1;
    d.A12 = Matrix::Zero(0, n);
    d.A22 = Matrix::Zero(0, 0);
    d.Cstar = c;
    return d;
  }
  // Rows of P: an orthonormal basis of the observable subspace (row space
  // of O) followed by one of the unobservable subspace (null space of O).
  Eigen::JacobiSVD<Matrix> svd(o, Eigen::ComputeFullV);
  d.P = svd.matrixV().transpose();
  const Matrix transformed = d.P * a1 * d.P.transpose();
  const Eigen::Index n2 = n - n1;
  d.A11 = transformed.topLeftCorner(n1, n1);
  d.A12 = transformed.bottomLeftCorner(n2, n1);
  d.A22 = transformed.bottomRightCorner(n2, n2);
  d.Cstar = c * d.P.transpose().leftCols(n1);
  return d;
}

std::pair<bool, ComplexList> detectability(const Matrix& a1, const Matrix& c) {
  const ObservableDecomposition d = observable_decomposition(a1, c);
  ComplexList bad;
  for (const Complex& v : numlin::eigvals(d.A22)) {
    if (!(v.real() < 0.0)) bad.push_back(v);
  }
  return {bad.empty(), bad};
}

ExistenceReport check_existence(const LinearSystem& sys) {
  ExistenceReport rep;
  rep.rank_ce = numlin::rank(sys.C() * sys.E());
  rep.rank_e = numlin::rank(sys.E());
  rep.rank_condition_ok = rep.rank_ce == rep.rank_e;

  Matrix a1;
  if (rep.rank_condition_ok) {
    const LinearSystem reduced =
        sys.with_e(numlin::full_rank_factorization(sys.E()).first);
    a1 = compute_decoupling(reduced).A1;
  } else {
    // No decoupling exists; still report on the least-squares projection.
    a1 = sys.A() - decoupling_h_general(sys) * sys.C() * sys.A();
  }
  auto [ok, modes] = detectability(a1, sys.C());
  rep.detectable = ok;
  rep.unstable_unobservable_modes = std::move(modes);
  rep.uio_exists = rep.rank_condition_ok && rep.detectable;
  return rep;
}

DesignResult design(const LinearSystem& sys, const ComplexList& poles) {
  const ExistenceReport rep = check_existence(sys);
  if (!rep.rank_condition_ok) {
    std::ostringstream os;
    os << "rank(CE) = " << rep.rank_ce << " differs from rank(E) = "
       << rep.rank_e << "; no unknown input observer exists";
    throw NoUioError(os.str(), rep.rank_ce, rep.rank_e);
  }
  if (!rep.detectable) {
    throw NoUioError("(C, A1) is not detectable; unstable unobservable modes: " +
                         modes_to_string(rep.unstable_unobservable_modes),
                     rep.rank_ce, rep.rank_e);
  }

  DesignResult out;
  out.e_used = numlin::full_rank_factorization(sys.E()).first;
  out.e_reduced = out.e_used.cols() != sys.q();
  const LinearSystem eff = sys.with_e(out.e_used);
  const Decoupling dec = compute_decoupling(eff);
  const ObservableDecomposition obs = observable_decomposition(dec.A1, sys.C());
  out.n1 = obs.n1;

  const Eigen::Index n = sys.n();
  const Eigen::Index m = sys.m();
  if (static_cast<Eigen::Index>(poles.size()) != obs.n1) {
    std::ostringstream os;
    os << "expected " << obs.n1 << " poles (rank of the observability matrix"
       << " of (A1, C)), got " << poles.size();
    throw InputError(os.str());
  }
  const PoleSet ps(poles);

  Matrix k1;
  if (obs.n1 == n) {
    k1 = place_poles(dec.A1, sys.C(), ps);
  } else {
    Matrix kp = Matrix::Zero(n, m);
    kp.topRows(obs.n1) = place_poles(obs.A11, obs.Cstar, ps);
    k1 = obs.P.transpose() * kp;
  }

  UioGains& g = out.gains;
  g.H = dec.H;
  g.T = dec.T;
  g.K1 = std::move(k1);
  g.F = dec.A1 - g.K1 * sys.C();
  g.K2 = g.F * g.H;
  g.K = g.K1 + g.K2;
  return out;
}

Matrix place_full_measurement(const Matrix& a1, const Matrix& c,
                              const Matrix& f_desired) {
  numlin::require_finite(f_desired, "Fdes");
  if (c.rows() != c.cols()) {
    throw InputError("full-measurement placement requires a square C");
  }
  if (a1.rows() != c.rows() || a1.cols() != c.cols() ||
      f_desired.rows() != a1.rows() || f_desired.cols() != a1.cols()) {
    throw InputError("full-measurement placement: dimension mismatch");
  }
  Eigen::FullPivLU<Matrix> lu(c);
  if (!lu.isInvertible()) {
    throw InputError("full-measurement placement requires an invertible C");
  }
  if (!(numlin::spectral_abscissa(f_desired) < 0.0)) {
    throw InputError("Fdes is not stable");
  }
  // K1 C = A1 - Fdes
  return c.transpose().fullPivLu().solve((a1 - f_desired).transpose()).transpose();
}

DesignResult design_full_measurement(const LinearSystem& sys,
                                     const Matrix& f_desired) {
  DesignResult out;
  out.e_used = numlin::full_rank_factorization(sys.E()).first;
  out.e_reduced = out.e_used.cols() != sys.q();
  const Decoupling dec = compute_decoupling(sys.with_e(out.e_used));
  out.n1 = numlin::rank(numlin::obsv_matrix(dec.A1, sys.C()));
  UioGains& g = out.gains;
  g.H = dec.H;
  g.T = dec.T;
  g.K1 = place_full_measurement(dec.A1, sys.C(), f_desired);
  g.F = f_desired;
  g.K2 = g.F * g.H;
  g.K = g.K1 + g.K2;
  return out;
}

GainCheck verify_gains(const LinearSystem& sys, const UioGains& g, double tol) {
  const Eigen::Index n = sys.n();
  const Eigen::Index m = sys.m();
  auto shape = [](const Matrix& x, Eigen::Index r, Eigen::Index c) {
    return x.rows() == r && x.cols() == c;
  };
  if (!shape(g.F, n, n) || !shape(g.T, n, n) || !shape(g.H, n, m) ||
      !shape(g.K, n, m) || !shape(g.K1, n, m) || !shape(g.K2, n, m)) {
    throw InputError("verify_gains: gain dimensions do not match the plant");
  }
  const Matrix id = Matrix::Identity(n, n);
  const Matrix hc = g.H * sys.C();
  GainCheck chk;
  chk.tol = tol;
  chk.decoupling = max_abs((hc - id) * sys.E());
  chk.t_residual = max_abs(g.T - (id - hc));
  chk.f_residual = max_abs(g.F - (sys.A() - hc * sys.A() - g.K1 * sys.C()));
  chk.k2_residual = max_abs(g.K2 - g.F * g.H);
  chk.k_residual = max_abs(g.K - (g.K1 + g.K2));
  chk.spectral_abscissa = numlin::spectral_abscissa(g.F);
  chk.passed = chk.decoupling <= tol && chk.t_residual <= tol &&
               chk.f_residual <= tol && chk.k2_residual <= tol &&
               chk.k_residual <= tol && chk.spectral_abscissa < 0.0;
  return chk;
}

}  // namespace uio
