#include "mci/interp.hpp"

#include <cmath>

#include "mci/errors.hpp"
#include "mci/numkit.hpp"

namespace mci {

namespace {

constexpr double kTiny = 1e-300;

struct StructureFit {
  RowVector L;
  double relative_residual;
};

// least-squares fit of Sigma - A Sigma A* = B L + L* B* over the row L;
// 2n real unknowns against the n^2 complex entries of the displacement
StructureFit fit_structure(const InputToStateFilter& filter, const Matrix& Sigma) {
  const Eigen::Index n = filter.order();
  const Vector& B = filter.B();
  const Matrix R = Sigma - filter.A() * Sigma * filter.A().adjoint();

  RealMatrix M = RealMatrix::Zero(2 * n * n, 2 * n);
  RealVector rhs = RealVector::Zero(2 * n * n);
  Eigen::Index row = 0;
  RowVector coeff(2 * n); // complex coefficient per real unknown (x_1..x_n, y_1..y_n)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      coeff.setZero();
      // (B L)_ij = B_i L_j and (L* B*)_ij = conj(L_i) conj(B_j), L = x + iy
      coeff(j) += B(i);
      coeff(n + j) += Complex(0.0, 1.0) * B(i);
      coeff(i) += std::conj(B(j));
      coeff(n + i) -= Complex(0.0, 1.0) * std::conj(B(j));
      for (Eigen::Index k = 0; k < 2 * n; ++k) {
        M(row, k) = coeff(k).real();
        M(row + 1, k) = coeff(k).imag();
      }
      rhs(row) = R(i, j).real();
      rhs(row + 1) = R(i, j).imag();
      row += 2;
    }
  }
  Eigen::BDCSVD<RealMatrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  RealVector x = svd.solve(rhs);

  RowVector L(n);
  for (Eigen::Index k = 0; k < n; ++k) L(k) = Complex(x(k), x(n + k));
  const Matrix fitted = B * L + L.adjoint() * B.adjoint();
  const double res = (R - fitted).norm() / std::max(Sigma.norm(), kTiny);
  return {L, res};
}

} // namespace

RowVector validate_sigma(const InputToStateFilter& filter, const Matrix& Sigma,
                         const Tolerances& tol) {
  if (Sigma.rows() != filter.order() || Sigma.cols() != filter.order())
    throw DimensionError("covariance size must match the filter order");
  if (!Sigma.allFinite()) throw ValidationError("covariance entries must be finite");
  if ((Sigma - Sigma.adjoint()).norm() > tol.psd * std::max(Sigma.norm(), kTiny))
    throw NotHermitian("covariance must be Hermitian");
  StructureFit fit = fit_structure(filter, 0.5 * (Sigma + Sigma.adjoint()));
  if (fit.relative_residual > tol.sigma_structure)
    throw StructureViolation("covariance does not have the filter's displacement structure");
  return fit.L;
}

Matrix project_sigma(const InputToStateFilter& filter, const Matrix& Sigma,
                     const Tolerances& tol) {
  if (Sigma.rows() != filter.order() || Sigma.cols() != filter.order())
    throw DimensionError("covariance size must match the filter order");
  const Matrix sym = 0.5 * (Sigma + Sigma.adjoint());
  StructureFit fit = fit_structure(filter, sym);
  const Vector& B = filter.B();
  const Matrix Q = B * fit.L + fit.L.adjoint() * B.adjoint();
  Matrix out = solve_stein(filter.A(), Q, tol);
  return 0.5 * (out + out.adjoint());
}

Matrix markov_gramian(const InputToStateFilter& filter, const Vector& H,
                      const Tolerances& tol) {
  if (H.size() != filter.order())
    throw DimensionError("Markov vector length must match the filter order");
  if (!H.allFinite()) throw ValidationError("Markov entries must be finite");
  return solve_stein(filter.A(), filter.A(), H * filter.B().adjoint(), tol);
}

Solution solve(const InputToStateFilter& filter, const InterpolationData& data,
               bool strict_sigma, const Tolerances& tol) {
  const Eigen::Index n = filter.order();
  if (data.sigma.rows() != n || data.sigma.cols() != n || data.markov.size() != n)
    throw DimensionError("interpolation data must match the filter order");
  if (!data.sigma.allFinite() || !data.markov.allFinite())
    throw ValidationError("interpolation data must be finite");
  const double sigma_scale = std::max(data.sigma.norm(), kTiny);
  if ((data.sigma - data.sigma.adjoint()).norm() > tol.psd * sigma_scale)
    throw NotHermitian("target covariance must be Hermitian");
  const Matrix Sigma = 0.5 * (data.sigma + data.sigma.adjoint());
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Sigma, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol.psd * sigma_scale)
      throw NotPSD("target covariance must be positive semidefinite");
  }
  if (data.markov.norm() == 0.0) throw ZeroMarkov("state-Markov vector is zero");

  Solution out;
  out.sigma_structure_residual = fit_structure(filter, Sigma).relative_residual;
  if (strict_sigma && out.sigma_structure_residual > tol.sigma_structure)
    throw StructureViolation("covariance does not have the filter's displacement structure");

  out.markov_gramian = markov_gramian(filter, data.markov, tol);

  // M = cH* Gramian^{-1} cH through the Cholesky factor, never inverting
  const Matrix K = filter.gramian_llt().matrixL().solve(out.markov_gramian);
  Matrix M = K.adjoint() * K;
  M = 0.5 * (M + M.adjoint());

  PencilEig pe = smallest_generalized_eig(Sigma, M, tol);

  // roots of the denominator xi G via the determinant formula; the root set is
  // invariant under scaling of the candidate column
  auto denominator = [&](const Vector& col) {
    const RowVector xi = col.adjoint();
    return (det_poly(filter.A() - filter.B() * xi) - det_poly(filter.A()))
        .shifted_down(tol.zero);
  };
  auto is_stable = [&](const Polynomial& a) {
    return !a.is_zero() && a.roots_outside_disc(tol.stability_margin);
  };

  Vector xi_col = pe.vector;
  Polynomial den = denominator(xi_col);
  if (!is_stable(den) && pe.multiplicity > 1) {
    // any vector in the cluster eigenspace is optimal; the one aligned with
    // Gramian^{-1} B has denominator 1 - conj(b(0)) b(z), the reproducing
    // kernel at the origin, which cannot vanish in the closed disc; it rescues
    // exactly degenerate (all-pass) instances where the solver's arbitrary
    // cluster vector happens to produce an unstable denominator
    const Vector pref = filter.gramian_llt().solve(filter.B());
    const Vector proj = pe.subspace * (pe.subspace.adjoint() * pref);
    if (proj.norm() > 1e-8 * pref.norm()) {
      const Vector cand = proj / proj.norm();
      const Polynomial cden = denominator(cand);
      if (is_stable(cden)) {
        xi_col = cand;
        den = cden;
      }
    }
  }
  Vector sigma_col = filter.gramian_llt().solve(out.markov_gramian * xi_col);

  const double power = std::real(xi_col.dot(M * xi_col)); // equals sigma G sigma*
  if (!(power > kTiny))
    throw DegeneratePencil("recovered numerator direction has zero norm");
  const double t = 1.0 / std::sqrt(power);
  xi_col *= t;
  sigma_col *= t;

  // deterministic phase: first nonzero entry of the xi row real positive
  const double xin = xi_col.norm();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex entry = std::conj(xi_col(i));
    if (std::abs(entry) > tol.zero * xin) {
      const Complex u = entry / std::abs(entry);
      xi_col *= u;
      sigma_col *= u;
      break;
    }
  }

  out.lambda = pe.value;
  out.xi = xi_col.adjoint();
  out.sigma_row = sigma_col.adjoint();
  out.multiplicity = pe.multiplicity;
  out.unique = (pe.multiplicity == 1);
  out.pencil_condition = pe.condition;

  // the optimizer must stay analytic in the closed disc
  if (den.is_zero()) throw UnstableOptimizer("denominator is identically zero");
  if (!den.roots_outside_disc(tol.stability_margin))
    throw UnstableOptimizer("optimizer denominator has a zero in the closed unit disc");
  return out;
}

} // namespace mci
