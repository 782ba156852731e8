#include "uio/poleplace.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "uio/errors.hpp"

namespace uio {

namespace {

double conj_tol(const Complex& p) { return 1e-9 * (1.0 + std::abs(p)); }

struct PoleGroup {
  Complex value;  // for complex groups, the member with positive imaginary part
  int multiplicity;
};

// Real poles first (ascending), then complex pairs; equal values merge.
std::vector<PoleGroup> group_poles(const ComplexList& poles) {
  ComplexList reals;
  ComplexList uppers;
  for (const Complex& p : poles) {
    if (std::abs(p.imag()) <= conj_tol(p)) {
      reals.emplace_back(p.real(), 0.0);
    } else if (p.imag() > 0.0) {
      uppers.push_back(p);
    }
  }
  numlin::sort_spectrum(reals);
  numlin::sort_spectrum(uppers);
  std::vector<PoleGroup> groups;
  auto push = [&groups](const Complex& v) {
    if (!groups.empty() && groups.back().value == v) {
      ++groups.back().multiplicity;
    } else {
      groups.push_back({v, 1});
    }
  };
  for (const Complex& v : reals) push(v);
  const std::size_t n_real_groups = groups.size();
  for (const Complex& v : uppers) {
    if (groups.size() > n_real_groups && groups.back().value == v) {
      ++groups.back().multiplicity;
    } else {
      groups.push_back({v, 1});
    }
  }
  return groups;
}

// Real matrix whose spectrum is the pole set: Jordan chains for repeated
// reals, rotation blocks (chained by identities) for conjugate pairs.
Matrix real_block_form(const ComplexList& poles) {
  const auto n = static_cast<Eigen::Index>(poles.size());
  Matrix lambda = Matrix::Zero(n, n);
  Eigen::Index at = 0;
  for (const PoleGroup& g : group_poles(poles)) {
    if (g.value.imag() == 0.0) {
      for (int k = 0; k < g.multiplicity; ++k) {
        lambda(at + k, at + k) = g.value.real();
        if (k > 0) lambda(at + k - 1, at + k) = 1.0;
      }
      at += g.multiplicity;
    } else {
      const double a = g.value.real();
      const double b = g.value.imag();
      for (int k = 0; k < g.multiplicity; ++k) {
        const Eigen::Index i = at + 2 * k;
        lambda(i, i) = a;
        lambda(i, i + 1) = b;
        lambda(i + 1, i) = -b;
        lambda(i + 1, i + 1) = a;
        if (k > 0) lambda.block(i - 2, i, 2, 2).setIdentity();
      }
      at += 2 * g.multiplicity;
    }
  }
  return lambda;
}

Matrix seed_matrix(Eigen::Index m, Eigen::Index n) {
  Matrix g(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = 1.0 + static_cast<double>(i) + 2.0 * static_cast<double>(j);
    }
  }
  return g;
}

}  // namespace

PoleSet::PoleSet(ComplexList poles) : poles_(std::move(poles)) {
  ComplexList uppers;
  ComplexList lowers;
  for (const Complex& p : poles_) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
      throw InputError("pole set contains a non-finite value");
    }
    if (!(p.real() < 0.0)) {
      std::ostringstream os;
      os << "pole " << p << " does not have a strictly negative real part";
      throw InputError(os.str());
    }
    if (std::abs(p.imag()) <= conj_tol(p)) continue;
    (p.imag() > 0.0 ? uppers : lowers).push_back(p);
  }
  if (uppers.size() != lowers.size()) {
    throw InputError("pole set is not closed under complex conjugation");
  }
  for (Complex& v : lowers) v = std::conj(v);
  if (numlin::spectrum_distance(uppers, lowers) > 1e-9 * (1.0 + [&] {
        double s = 0.0;
        for (const Complex& v : uppers) s = std::max(s, std::abs(v));
        return s;
      }())) {
    throw InputError("pole set is not closed under complex conjugation");
  }
  // Snap conjugate partners together so block forms are exact.
  for (Complex& p : poles_) {
    if (std::abs(p.imag()) <= conj_tol(p)) p = Complex(p.real(), 0.0);
  }
}

Matrix place_poles(const Matrix& a, const Matrix& c, const PoleSet& poles) {
  numlin::require_finite(a, "placement A");
  numlin::require_finite(c, "placement C");
  if (a.rows() != a.cols() || c.cols() != a.rows()) {
    throw InputError("place_poles: A must be square and C conformable");
  }
  const Eigen::Index n = a.rows();
  const Eigen::Index m = c.rows();
  if (static_cast<Eigen::Index>(poles.size()) != n) {
    std::ostringstream os;
    os << "place_poles: " << poles.size() << " poles requested for a "
       << n << "-dimensional state";
    throw InputError(os.str());
  }
  if (n == 0) return Matrix::Zero(0, m);
  if (numlin::rank(numlin::obsv_matrix(a, c)) < n) {
    throw InputError("place_poles: (C, A) is not observable");
  }

  const double scale = std::max(a.norm(), 1.0);
  for (const Complex& lambda : numlin::eigvals(a)) {
    for (const Complex& p : poles.poles()) {
      if (std::abs(lambda - p) <= 1e-8 * scale) {
        std::ostringstream os;
        os << "place_poles: requested pole " << p
           << " coincides with an eigenvalue of A";
        throw SingularError(os.str());
      }
    }
  }

  const Matrix lambda = real_block_form(poles.poles());
  Matrix g = seed_matrix(m, n);
  constexpr int kMaxRetries = 5;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    if (attempt > 0) g(0, 0) += 1.0;
    // A^T X - X L = C^T G
    const Matrix x =
        numlin::solve_sylvester(a.transpose(), -lambda, c.transpose() * g);
    Eigen::FullPivLU<Matrix> lu(x);
    if (!lu.isInvertible() || lu.rcond() < 1e-13) continue;
    Matrix k1 = x.transpose().fullPivLu().solve(g.transpose());
    if (!k1.allFinite()) continue;
    // (A - K1 C)^T X = X L makes the closed loop similar to L.
    const Matrix closed = a - k1 * c;
    const double resid = (closed.transpose() * x - x * lambda).norm();
    if (resid <= 1e-9 * (closed.norm() + lambda.norm()) * x.norm()) return k1;
  }
  throw SingularError(
      "place_poles: Sylvester solution stayed singular after seed retries");
}

Matrix place_state_feedback(const Matrix& a, const Matrix& b,
                            const PoleSet& poles) {
  return place_poles(a.transpose(), b.transpose(), poles).transpose();
}

}  // namespace uio
