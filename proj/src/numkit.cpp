#include "mci/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mci/errors.hpp"

namespace mci {

const Tolerances& default_tolerances() {
  static const Tolerances tol;
  return tol;
}

namespace {

constexpr double kTiny = 1e-300;

void require_square(const Matrix& M, const char* who) {
  if (M.rows() != M.cols()) throw DimensionError(std::string(who) + " must be square");
  if (M.rows() == 0) throw DimensionError(std::string(who) + " must be nonempty");
}

bool is_lower_triangular(const Matrix& M) {
  for (Eigen::Index j = 1; j < M.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (M(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

bool is_upper_triangular(const Matrix& M) {
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = j + 1; i < M.rows(); ++i)
      if (M(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

// Y = T1 Y T2* + C for upper-triangular T1 (n x n), T2 (m x m); back
// substitution over i descending, j descending.
Matrix stein_triangular(const Matrix& T1, const Matrix& T2, const Matrix& C) {
  const Eigen::Index n = T1.rows(), m = T2.rows();
  Matrix Y = Matrix::Zero(n, m);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    // R(l) = sum_{r>i} T1(i,r) Y(r,l); contribution of already-solved rows
    RowVector R = RowVector::Zero(m);
    if (i + 1 < n)
      R = T1.row(i).segment(i + 1, n - 1 - i) * Y.bottomRows(n - 1 - i);
    for (Eigen::Index j = m - 1; j >= 0; --j) {
      Complex rhs = C(i, j);
      for (Eigen::Index l = j + 1; l < m; ++l)
        rhs += T1(i, i) * Y(i, l) * std::conj(T2(j, l));
      for (Eigen::Index l = j; l < m; ++l) rhs += R(l) * std::conj(T2(j, l));
      const Complex den = Complex(1.0, 0.0) - T1(i, i) * std::conj(T2(j, j));
      if (std::abs(den) < kTiny)
        throw SpectralRadiusError("eigenvalue product too close to 1");
      Y(i, j) = rhs / den;
    }
  }
  return Y;
}

Matrix stein_general(const Matrix& A, const Matrix& M, const Matrix& Q,
                     const Tolerances& tol) {
  // exact fast path for triangular coefficients: a lower-triangular matrix is
  // upper-triangular in reversed coordinates, and reversal commutes with the
  // equation, so no Schur factorization (and no rounding from it) is needed
  const bool a_lo = is_lower_triangular(A), a_up = is_upper_triangular(A);
  const bool m_lo = is_lower_triangular(M), m_up = is_upper_triangular(M);
  Matrix X;
  if (a_up && m_up) {
    X = stein_triangular(A, M, Q);
  } else if (a_lo && m_lo) {
    Matrix Y = stein_triangular(A.reverse(), M.reverse(), Q.reverse());
    X = Y.reverse();
  } else {
    Eigen::ComplexSchur<Matrix> sa(A);
    if (sa.info() != Eigen::Success) throw SingularSystem("Schur factorization failed");
    const bool same = (&A == &M);
    Eigen::ComplexSchur<Matrix> sm_storage;
    const Matrix* Um = &sa.matrixU();
    const Matrix* Tm = &sa.matrixT();
    if (!same) {
      sm_storage.compute(M);
      if (sm_storage.info() != Eigen::Success)
        throw SingularSystem("Schur factorization failed");
      Um = &sm_storage.matrixU();
      Tm = &sm_storage.matrixT();
    }
    const Matrix C = sa.matrixU().adjoint() * Q * (*Um);
    const Matrix Y = stein_triangular(sa.matrixT(), *Tm, C);
    X = sa.matrixU() * Y * Um->adjoint();
  }
  // sanity envelope; the contract-level residual bound is relative to ||Q||
  const double qn = Q.norm();
  const double envelope = qn + A.norm() * X.norm() * M.norm();
  const double res = (X - A * X * M.adjoint() - Q).norm();
  if (res > std::max(tol.stein_residual * envelope, kTiny))
    throw SingularSystem("Stein solve residual out of tolerance");
  return X;
}

struct CompressedPencil {
  Matrix C;        // pencil compressed onto range(M), Hermitian
  Matrix F;        // n x r, maps compressed coordinates back (M-whitening)
  Matrix N;        // n x (n-r), null-space basis of M
  Matrix T_pinv;   // pseudo-inverse of N* S N
  Matrix NSF;      // N* S F
};

Matrix hermitian_pinv(const Matrix& T, double rel_cut) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(T);
  const auto& d = es.eigenvalues();
  const double cut = rel_cut * std::max(d.cwiseAbs().maxCoeff(), kTiny);
  Vector inv = Vector::Zero(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (std::abs(d(i)) > cut) inv(i) = Complex(1.0 / d(i), 0.0);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix checked_hermitian_psd(const Matrix& X, double rel, const char* who) {
  require_square(X, who);
  const double scale = std::max(X.norm(), kTiny);
  if ((X - X.adjoint()).norm() > rel * scale)
    throw NotPSD(std::string(who) + " is not Hermitian");
  Matrix H = 0.5 * (X + X.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -rel * scale)
    throw NotPSD(std::string(who) + " has a negative eigenvalue");
  return H;
}

} // namespace

double spectral_radius(const Matrix& A) {
  if (A.rows() == 0) return 0.0;
  Eigen::ComplexEigenSolver<Matrix> es(A, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix solve_stein(const Matrix& A, const Matrix& Q, const Tolerances& tol) {
  require_square(A, "A");
  require_square(Q, "Q");
  if (A.rows() != Q.rows()) throw DimensionError("A and Q sizes differ");
  if (spectral_radius(A) >= 1.0 - tol.spectral_radius_margin)
    throw SpectralRadiusError("spectral radius of A must be strictly inside the unit disc");
  Matrix X = stein_general(A, A, Q, tol);
  const bool hermitian_q = (Q - Q.adjoint()).norm() <= tol.zero * std::max(Q.norm(), kTiny);
  if (hermitian_q) X = 0.5 * (X + X.adjoint());
  return X;
}

Matrix solve_stein(const Matrix& A, const Matrix& M, const Matrix& Q,
                   const Tolerances& tol) {
  require_square(A, "A");
  require_square(M, "M");
  if (Q.rows() != A.rows() || Q.cols() != M.rows())
    throw DimensionError("Q must be rows(A) x rows(M)");
  if (spectral_radius(A) * spectral_radius(M) >= 1.0 - tol.spectral_radius_margin)
    throw SpectralRadiusError("product of spectral radii must be strictly inside the unit disc");
  return stein_general(A, M, Q, tol);
}

Polynomial det_poly(const Matrix& M) {
  require_square(M, "M");
  const Eigen::Index n = M.rows();
  std::vector<Complex> c(static_cast<size_t>(n) + 1, Complex(0.0, 0.0));
  c[0] = Complex(1.0, 0.0);
  if (n <= 30) {
    // Faddeev-LeVerrier; the characteristic coefficients of det(tI - M) are,
    // in ascending order, exactly the coefficients of det(I - zM)
    Matrix Mk = M;
    for (Eigen::Index k = 1; k <= n; ++k) {
      const Complex ck = -Mk.trace() / static_cast<double>(k);
      c[static_cast<size_t>(k)] = ck;
      if (k < n) {
        Matrix next = Mk + ck * Matrix::Identity(n, n);
        Mk = M * next;
      }
    }
  } else {
    Eigen::ComplexEigenSolver<Matrix> es(M, false);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex lam = es.eigenvalues()(i);
      // multiply running polynomial by (1 - lam z)
      for (Eigen::Index k = i + 1; k >= 1; --k)
        c[static_cast<size_t>(k)] -= lam * c[static_cast<size_t>(k - 1)];
    }
  }
  return Polynomial(std::move(c));
}

PencilEig smallest_generalized_eig(const Matrix& S, const Matrix& M,
                                   const Tolerances& tol) {
  Matrix Sh = checked_hermitian_psd(S, tol.psd, "S");
  Matrix Mh = checked_hermitian_psd(M, tol.psd, "M");
  if (Sh.rows() != Mh.rows()) throw DimensionError("S and M sizes differ");
  const Eigen::Index n = Sh.rows();
  if (Mh.norm() <= kTiny) throw DegeneratePencil("M is zero");

  // whiten the range of M: columns of F satisfy F* M F = I, N spans ker M
  Eigen::SelfAdjointEigenSolver<Matrix> em(Mh);
  const auto& d = em.eigenvalues(); // ascending
  const double dcut = tol.pencil_rank * std::max(d.cwiseAbs().maxCoeff(), kTiny);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (d(i) > dcut) ++r;
  if (r == 0) throw DegeneratePencil("M has no numerically positive eigenvalue");
  const Eigen::Index z = n - r;
  Matrix F(n, r), N(n, z);
  {
    Eigen::Index fi = 0, ni = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d(i) > dcut)
        F.col(fi++) = em.eigenvectors().col(i) / std::sqrt(d(i));
      else
        N.col(ni++) = em.eigenvectors().col(i);
    }
  }

  // restrict the quotient v*Sv / v*Mv to range(M) after minimizing over ker M;
  // because S is PSD the minimum is the Schur complement of N*SN
  Matrix SF = Sh * F;
  Matrix C = F.adjoint() * SF;
  Matrix T_pinv, NSF;
  if (z > 0) {
    NSF = N.adjoint() * SF;
    T_pinv = hermitian_pinv(N.adjoint() * Sh * N, tol.pencil_rank);
    C -= NSF.adjoint() * T_pinv * NSF;
  }
  C = 0.5 * (C + C.adjoint());

  Eigen::SelfAdjointEigenSolver<Matrix> ec(C);
  const auto& mu = ec.eigenvalues();
  const double scale = std::max(C.norm(), kTiny);
  const double lambda = mu(0);
  if (lambda <= tol.pencil_rank * scale)
    throw DegeneratePencil("no finite positive generalized eigenvalue");

  int multiplicity = 1;
  while (multiplicity < r &&
         mu(multiplicity) - lambda <= tol.pencil_cluster * std::max(lambda, scale))
    ++multiplicity;
  double condition = 0.0;
  if (multiplicity < r) condition = scale / std::max(mu(multiplicity) - lambda, kTiny);

  auto recover = [&](Eigen::Index i) {
    Vector v = F * ec.eigenvectors().col(i);
    if (z > 0) v -= N * (T_pinv * (NSF * ec.eigenvectors().col(i)));
    return v;
  };
  Vector v = recover(0);
  v /= v.norm();
  Matrix subspace(n, multiplicity);
  for (int i = 0; i < multiplicity; ++i) subspace.col(i) = recover(i);
  if (multiplicity > 1) {
    Eigen::HouseholderQR<Matrix> qr(subspace);
    subspace = qr.householderQ() * Matrix::Identity(n, multiplicity);
  } else {
    subspace.col(0) = v;
  }

  // polish the eigenpair with inverse iteration; each step must shrink the
  // pencil residual or the previous iterate is kept
  double lambda_ref = lambda;
  {
    const double opscale = Sh.norm() + lambda * Mh.norm() + kTiny;
    double best = (Sh * v - lambda_ref * (Mh * v)).norm() / opscale;
    for (int it = 0; it < 3 && best > 1e-15; ++it) {
      Matrix K = Sh - lambda_ref * Mh;
      K += (1e-14 * std::max(K.norm(), kTiny)) * Matrix::Identity(n, n);
      Eigen::LDLT<Matrix> ldlt(K);
      if (ldlt.info() != Eigen::Success) break;
      Vector w = ldlt.solve(v);
      if (!w.allFinite() || w.norm() <= kTiny) break;
      w /= w.norm();
      const double den = std::real(w.dot(Mh * w));
      if (den <= kTiny) break;
      const double cand = std::real(w.dot(Sh * w)) / den;
      const double res = (Sh * w - cand * (Mh * w)).norm() / opscale;
      if (!(res < best)) break;
      v = w;
      lambda_ref = cand;
      best = res;
    }
  }

  // the defining property: S - lambda M stays PSD at the returned eigenvalue
  Matrix W = Sh - lambda_ref * Mh;
  Eigen::SelfAdjointEigenSolver<Matrix> ew(W, Eigen::EigenvaluesOnly);
  if (ew.eigenvalues().minCoeff() < -tol.pencil_post * std::max(Sh.norm(), kTiny))
    throw DegeneratePencil("post-verification failed: S - lambda*M not PSD");

  PencilEig out;
  out.value = lambda_ref;
  out.vector = v;
  out.multiplicity = multiplicity;
  out.condition = condition;
  out.subspace = std::move(subspace);
  return out;
}

Polynomial spectral_factor(const Polynomial& b, const Polynomial& a,
                           const Tolerances& tol) {
  if (a.is_zero()) throw UnstableDenominator("denominator is zero");
  if (!a.roots_outside_disc(tol.stability_margin))
    throw UnstableDenominator("denominator has a root inside or on the unit circle");

  const int q = std::max(a.degree(), b.degree());
  const int nu = q + 1;          // complex unknowns d_0..d_q
  const auto& ac = a.coeffs();
  const auto& bc = b.coeffs();
  auto a_at = [&](int k) -> Complex {
    return (k >= 0 && k <= a.degree()) ? ac[static_cast<size_t>(k)] : Complex(0.0, 0.0);
  };

  // match Laurent coefficients m = 0..q of d a* + a d* = b b*, plus one
  // normalization row Im(d0 conj(a0)) = 0 that kills the i*gamma*a kernel
  const int rows = 2 * (q + 1) + 1;
  RealMatrix A = RealMatrix::Zero(rows, 2 * nu);
  RealVector rhs = RealVector::Zero(rows);
  for (int m = 0; m <= q; ++m) {
    RowVector row_d = RowVector::Zero(nu);  // multiplies d_j
    RowVector row_c = RowVector::Zero(nu);  // multiplies conj(d_j)
    for (int j = 0; j < nu; ++j) {
      row_d(j) += std::conj(a_at(j - m));
      row_c(j) += a_at(j + m);
    }
    Complex target(0.0, 0.0);
    for (int l = 0; l + m <= b.degree(); ++l)
      target += bc[static_cast<size_t>(l + m)] * std::conj(bc[static_cast<size_t>(l)]);
    const RowVector plus = row_d + row_c, minus = row_d - row_c;
    for (int j = 0; j < nu; ++j) {
      A(2 * m, j) = plus(j).real();
      A(2 * m, nu + j) = -minus(j).imag();
      A(2 * m + 1, j) = plus(j).imag();
      A(2 * m + 1, nu + j) = minus(j).real();
    }
    rhs(2 * m) = target.real();
    rhs(2 * m + 1) = target.imag();
  }
  const Complex a0 = a_at(0);
  A(rows - 1, 0) = -a0.imag();
  A(rows - 1, nu) = a0.real();

  Eigen::JacobiSVD<RealMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= tol.zero * std::max(sv(0), kTiny))
    throw SingularSystem("spectral factorization system is rank-deficient");
  RealVector x = svd.solve(rhs);

  std::vector<Complex> dc(static_cast<size_t>(nu));
  for (int j = 0; j < nu; ++j) dc[static_cast<size_t>(j)] = Complex(x(j), x(nu + j));
  Polynomial dpoly(std::move(dc));

  // verify the circle identity |b|^2 = 2 Re(d conj(a)) and the stability of d
  double worst = 0.0, scale = kTiny;
  for (int k = 0; k < tol.grid_spectral; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.5) / tol.grid_spectral;
    const Complex zc = std::polar(1.0, th);
    const double lhs = std::norm(b(zc));
    const double rv = 2.0 * (dpoly(zc) * std::conj(a(zc))).real();
    worst = std::max(worst, std::abs(lhs - rv));
    scale = std::max(scale, std::abs(lhs));
  }
  if (worst > tol.spectral_factor_check * scale)
    throw SingularSystem("spectral factorization residual out of tolerance");
  for (Complex rt : dpoly.roots())
    if (std::abs(rt) <= 1.0 - tol.zero)
      throw SingularSystem("spectral factor has a root inside the unit disc");
  return dpoly;
}

} // namespace mci
