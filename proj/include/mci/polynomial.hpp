#pragma once

#include <vector>

#include "mci/types.hpp"

namespace mci {

// Coefficients in ascending powers of z. Trailing zeros are trimmed on
// construction but at least one coefficient is always kept, so the zero
// polynomial is representable as [0].
class Polynomial {
public:
  explicit Polynomial(std::vector<Complex> coeffs);
  Polynomial(std::initializer_list<Complex> coeffs);

  static Polynomial one() { return Polynomial({Complex(1.0, 0.0)}); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex coeff(int k) const;
  bool is_zero() const;

  Complex operator()(Complex z) const;

  // coefficient-wise conjugate, i.e. the bar operation used in f-bar(A)
  Polynomial conjugated() const;

  // companion-matrix eigenvalues; empty for degree <= 0
  std::vector<Complex> roots() const;

  // all roots strictly outside the closed unit disc by at least `margin`
  bool roots_outside_disc(double margin) const;

  // polynomial evaluated at the matrix argument, Horner scheme
  Matrix at(const Matrix& M) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial scaled(Complex c) const;

  // divide by z; the constant coefficient must already be (numerically) zero
  Polynomial shifted_down(double tol) const;

private:
  std::vector<Complex> coeffs_;
};

} // namespace mci
