#pragma once

#include "uio/numlin.hpp"

namespace uio {

/// A closed-loop spectrum request: closed under conjugation with every real
/// part strictly negative.
class PoleSet {
 public:
  explicit PoleSet(ComplexList poles);

  const ComplexList& poles() const { return poles_; }
  std::size_t size() const { return poles_.size(); }

 private:
  ComplexList poles_;
};

/// Output-injection gain K1 with eig(A - K1 C) = poles.
///
/// Uses the dual Sylvester parameterization: with L a real block form of the
/// poles and G a fixed full-width seed, solve A^T X - X L = C^T G and take
/// K1 = (G X^-1)^T. Requires (C, A) observable and the poles disjoint from
/// eig(A).
Matrix place_poles(const Matrix& a, const Matrix& c, const PoleSet& poles);

/// State-feedback gain K with eig(A - B K) = poles, i.e. the transpose of
/// place_poles on (A^T, B^T).
Matrix place_state_feedback(const Matrix& a, const Matrix& b,
                            const PoleSet& poles);

}  // namespace uio
