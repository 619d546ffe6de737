#pragma once

#include "mci/filter.hpp"
#include "mci/tolerances.hpp"

namespace mci {

// Target data: Hermitian PSD state covariance and nonzero state-Markov vector.
struct InterpolationData {
  Matrix sigma;
  Vector markov;
};

// Maximizing solution. xi and sigma_row are the rows entering the optimizer
// W = (sigma_row G) / (xi G), scaled so sigma_row * Gramian * sigma_row^* = 1
// with the first nonzero entry of xi real positive.
struct Solution {
  double lambda = 0.0;
  RowVector xi;
  RowVector sigma_row;
  int multiplicity = 1;
  bool unique = true;
  double pencil_condition = 0.0;
  Matrix markov_gramian;
  double sigma_structure_residual = 0.0;
};

// Returns L with Sigma - A Sigma A* = B L + L* B* (least-squares, minimal
// norm); throws StructureViolation when the best fit misses by more than
// tol.sigma_structure relative to ||Sigma||.
RowVector validate_sigma(const InputToStateFilter& filter, const Matrix& Sigma,
                         const Tolerances& tol = default_tolerances());

// Nearest covariance with the exact displacement structure: least-squares L,
// then the Stein solve rebuilds Sigma from B L + L* B*.
Matrix project_sigma(const InputToStateFilter& filter, const Matrix& Sigma,
                     const Tolerances& tol = default_tolerances());

// cH solving cH = A cH A* + H B*; right-hand side is generally non-Hermitian.
Matrix markov_gramian(const InputToStateFilter& filter, const Vector& H,
                      const Tolerances& tol = default_tolerances());

// Dual solve: Lambda is the smallest generalized eigenvalue of the pencil
// (Sigma, cH* Gramian^{-1} cH), xi its eigenvector, sigma_row the recovered
// numerator row. Sigma structure validation is advisory unless strict_sigma.
Solution solve(const InputToStateFilter& filter, const InterpolationData& data,
               bool strict_sigma = false, const Tolerances& tol = default_tolerances());

} // namespace mci
