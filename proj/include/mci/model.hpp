#pragma once

#include <vector>

#include "mci/polynomial.hpp"
#include "mci/tolerances.hpp"
#include "mci/types.hpp"

namespace mci {

// num/den in ascending powers of z (delay convention): stable means every
// denominator root lies strictly outside the unit circle. The constructor
// rescales both polynomials so the denominator constant coefficient is 1
// whenever that normalization is well conditioned.
struct RationalTransferFunction {
  Polynomial num;
  Polynomial den;

  RationalTransferFunction(Polynomial num_, Polynomial den_);

  Complex eval(Complex z) const;
  bool stable(double margin = default_tolerances().stability_margin) const;
};

enum class Domain { discrete, continuous };

// Discrete models carry the same delay convention, W(z) = D + zC(I - zA)^{-1}B,
// so discrete stability is rho(A) < 1. Continuous models use the standard
// W(s) = D + C(sI - A)^{-1}B. C holds one row per output; files and scalar
// operations use single-output models, wider ones arise internally (cascade).
struct StateSpaceModel {
  Matrix A;
  Vector B;
  Matrix C;
  Vector D;
  Domain domain = Domain::discrete;

  static StateSpaceModel siso(Matrix A, Vector B, RowVector C, Complex D, Domain domain);

  int order() const { return static_cast<int>(A.rows()); }
  int outputs() const { return static_cast<int>(C.rows()); }
  Vector eval(Complex z) const;
  Complex eval_scalar(Complex z) const;
  bool stable(double margin = default_tolerances().stability_margin) const;
  void require_valid() const;
};

// evaluation grid: npts points on the circle of the given radius, angles
// offset by half a step so that +-1 and i are never sampled exactly
std::vector<Complex> circle_grid(int npts, double radius = 1.0);

} // namespace mci
