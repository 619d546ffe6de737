#pragma once

#include "mci/polynomial.hpp"
#include "mci/tolerances.hpp"
#include "mci/types.hpp"

namespace mci {

struct PencilEig {
  double value = 0.0;       // smallest positive generalized eigenvalue
  Vector vector;            // unit-norm eigenvector
  int multiplicity = 1;     // cluster size at the smallest eigenvalue
  double condition = 0.0;   // scale / gap to the next distinct eigenvalue
  Matrix subspace;          // orthonormal basis of the cluster eigenspace
};

double spectral_radius(const Matrix& A);

// X = A X A* + Q. X is Hermitian whenever Q is.
Matrix solve_stein(const Matrix& A, const Matrix& Q,
                   const Tolerances& tol = default_tolerances());

// Two-sided variant X = A X M* + Q with rectangular Q (n x m).
Matrix solve_stein(const Matrix& A, const Matrix& M, const Matrix& Q,
                   const Tolerances& tol = default_tolerances());

// Coefficients of det(I - zM), ascending; constant coefficient exactly 1.
Polynomial det_poly(const Matrix& M);

// Smallest finite positive lambda with S v = lambda M v for Hermitian PSD S, M.
// Equivalently the largest lambda keeping S - lambda*M PSD; M may be singular.
PencilEig smallest_generalized_eig(const Matrix& S, const Matrix& M,
                                   const Tolerances& tol = default_tolerances());

// Stable d solving b(z)b*(z) = d(z)a*(z) + a(z)d*(z) on the unit circle,
// normalized so that d(0) * conj(a(0)) is real.
Polynomial spectral_factor(const Polynomial& b, const Polynomial& a,
                           const Tolerances& tol = default_tolerances());

} // namespace mci
