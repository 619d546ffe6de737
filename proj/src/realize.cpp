#include "mci/realize.hpp"

#include <cmath>

#include "mci/errors.hpp"
#include "mci/numkit.hpp"

namespace mci {

namespace {

constexpr double kTiny = 1e-300;

Complex xi_times_B(const Solution& solution, const InputToStateFilter& filter) {
  return (solution.xi * filter.B()).value();
}

bool xiB_usable(const Solution& solution, const InputToStateFilter& filter,
                const Tolerances& tol) {
  const double scale = solution.xi.norm() * filter.B().norm();
  return std::abs(xi_times_B(solution, filter)) > tol.zero * std::max(scale, kTiny);
}

void require_solution_rows(const InputToStateFilter& filter, const Solution& solution) {
  if (solution.xi.size() != filter.order() || solution.sigma_row.size() != filter.order())
    throw DimensionError("solution rows must match the filter order");
}

// shared tail of the reduced and companion forms: B = e1, C, D from the
// reachability coordinates
void reduced_output(const InputToStateFilter& filter, const Solution& solution,
                    Vector& B_out, RowVector& C_out, Complex& D_out) {
  const Eigen::Index n = filter.order();
  const Complex xiB = xi_times_B(solution, filter);
  const Matrix beta = Matrix::Identity(n, n) - filter.B() * solution.xi / xiB;
  const Matrix Gt = filter.reach().leftCols(n - 1);
  B_out = Vector::Zero(n - 1);
  if (n > 1) B_out(0) = Complex(1.0, 0.0);
  C_out = solution.sigma_row * beta * filter.A() * Gt / xiB;
  D_out = (solution.sigma_row * filter.B()).value() / xiB;
}

} // namespace

RationalTransferFunction to_rational(const InputToStateFilter& filter,
                                     const Solution& solution, const Tolerances& tol) {
  require_solution_rows(filter, solution);
  const Matrix& A = filter.A();
  const Vector& B = filter.B();
  const Polynomial base = det_poly(A);
  const Polynomial b = (det_poly(A - B * solution.sigma_row) - base).shifted_down(tol.zero);
  const Polynomial a = (det_poly(A - B * solution.xi) - base).shifted_down(tol.zero);
  RationalTransferFunction out(b, a);
  if (!out.stable(tol.stability_margin))
    throw UnstableOptimizer("denominator has a root in the closed unit disc");
  return out;
}

StateSpaceModel to_state_space(const InputToStateFilter& filter, const Solution& solution,
                               RealizationForm form, RealizationNote* note,
                               const Tolerances& tol) {
  require_solution_rows(filter, solution);
  RealizationNote local;
  local.requested = form;
  local.used = form;
  if (form == RealizationForm::rational_companion || !xiB_usable(solution, filter, tol)) {
    local.used = RealizationForm::rational_companion;
    local.fell_back = (form != RealizationForm::rational_companion);
    if (note) *note = local;
    return rational_to_state_space(to_rational(filter, solution, tol), tol);
  }
  if (note) *note = local;

  const Eigen::Index n = filter.order();
  const Matrix& A = filter.A();
  const Vector& B = filter.B();
  const Complex xiB = xi_times_B(solution, filter);

  if (form == RealizationForm::full) {
    const Matrix beta = Matrix::Identity(n, n) - B * solution.xi / xiB;
    return StateSpaceModel::siso(A * beta, A * B, solution.sigma_row * beta / xiB,
                                 (solution.sigma_row * B).value() / xiB,
                                 Domain::discrete);
  }

  Vector Bw;
  RowVector Cw;
  Complex Dw;
  reduced_output(filter, solution, Bw, Cw, Dw);

  if (form == RealizationForm::reduced) {
    const Matrix beta = Matrix::Identity(n, n) - B * solution.xi / xiB;
    const Matrix Gt = filter.reach().leftCols(n - 1);
    const Matrix Ghat =
        filter.reach().partialPivLu().solve(Matrix::Identity(n, n)).bottomRows(n - 1);
    const Matrix Aw = Ghat * A * beta * A * Gt;
    return StateSpaceModel::siso(Aw, Bw, Cw, Dw, Domain::discrete);
  }

  // companion: the reduced dynamics matrix written in closed form from the
  // characteristic coefficients chi_k and the ratios gamma_k = xi A^k B / xi B
  const Polynomial chi = det_poly(A);
  std::vector<Complex> gamma(static_cast<size_t>(n));
  Vector v = B;
  for (Eigen::Index k = 0; k < n; ++k) {
    gamma[static_cast<size_t>(k)] = (solution.xi * v).value() / xiB;
    v = A * v;
  }
  const Eigen::Index m = n - 1;
  Matrix Aw = Matrix::Zero(m, m);
  if (m > 0) {
    for (Eigen::Index j = 0; j + 1 < m; ++j) Aw(0, j) = -gamma[static_cast<size_t>(j + 1)];
    Aw(0, m - 1) = -gamma[static_cast<size_t>(m)] - chi.coeff(static_cast<int>(n - 1));
    for (Eigen::Index i = 1; i < m; ++i) {
      Aw(i, i - 1) = Complex(1.0, 0.0);
      Aw(i, m - 1) -= chi.coeff(static_cast<int>(n - 1 - i));
    }
  }
  return StateSpaceModel::siso(Aw, Bw, Cw, Dw, Domain::discrete);
}

Vector markov_check(const InputToStateFilter& filter, const RationalTransferFunction& model,
                    const Tolerances& tol) {
  if (!model.stable(tol.stability_margin))
    throw UnstableModel("transfer function has a pole in the closed unit disc");
  return filter.ip_G_scalar(model);
}

Vector markov_check(const InputToStateFilter& filter, const StateSpaceModel& model,
                    const Tolerances& tol) {
  model.require_valid();
  if (model.domain != Domain::discrete)
    throw DomainMismatch("state-Markov data needs a discrete model");
  if (model.outputs() != 1) throw DimensionError("model must have a single output");
  if (!model.stable(tol.stability_margin))
    throw UnstableModel("model eigenvalues must lie strictly inside the unit disc");
  const Vector& B = filter.B();
  if (model.order() == 0) return B * std::conj(model.D(0));
  const Matrix P = solve_stein(filter.A(), model.A, B * model.B.adjoint(), tol);
  return B * std::conj(model.D(0)) + filter.A() * (P * model.C.adjoint());
}

Matrix covariance_check(const InputToStateFilter& filter,
                        const RationalTransferFunction& model, double Lambda,
                        CovRoute route, const Tolerances& tol) {
  if (!(Lambda > 0.0)) throw ValidationError("variance must be positive");
  if (route == CovRoute::statespace)
    return covariance_check(filter, rational_to_state_space(model, tol), Lambda,
                            CovRoute::statespace, tol);
  if (!model.stable(tol.stability_margin))
    throw UnstableModel("transfer function has a pole in the closed unit disc");
  // WW* = f + f* on the circle, so <GW, GW> = Psi G + G Psi* with no extra half:
  // with W = 1 the factor f = 1/2 already carries it, and the sum reproduces G.
  const PositiveRealPart f = positive_real_part(filter, model, tol);
  const Matrix& G = filter.gramian();
  Matrix S = Lambda * (f.psi * G + G * f.psi.adjoint());
  return 0.5 * (S + S.adjoint());
}

Matrix covariance_check(const InputToStateFilter& filter, const StateSpaceModel& model,
                        double Lambda, CovRoute route, const Tolerances& tol) {
  if (!(Lambda > 0.0)) throw ValidationError("variance must be positive");
  if (route == CovRoute::polynomial)
    return covariance_check(filter, state_space_to_rational(model), Lambda,
                            CovRoute::polynomial, tol);
  model.require_valid();
  if (model.domain != Domain::discrete)
    throw DomainMismatch("state covariance needs a discrete model");
  if (!model.stable(tol.stability_margin))
    throw UnstableModel("model eigenvalues must lie strictly inside the unit disc");
  const StateSpaceModel chain = cascade(filter, model);
  const Matrix P = solve_stein(chain.A, chain.B * chain.B.adjoint(), tol);
  const Eigen::Index n = filter.order();
  Matrix S = Lambda * P.bottomRightCorner(n, n);
  return 0.5 * (S + S.adjoint());
}

PositiveRealPart positive_real_part(const InputToStateFilter& filter,
                                    const RationalTransferFunction& model,
                                    const Tolerances& tol) {
  if (!model.stable(tol.stability_margin))
    throw UnstableModel("transfer function has a pole in the closed unit disc");
  PositiveRealPart out{spectral_factor(model.num, model.den, tol), Matrix()};
  const Matrix abar = model.den.conjugated().at(filter.A());
  const Matrix dbar = out.d.conjugated().at(filter.A());
  out.psi = abar.partialPivLu().solve(dbar); // polynomials in A commute
  return out;
}

StateSpaceModel cascade(const InputToStateFilter& filter, const StateSpaceModel& model) {
  model.require_valid();
  if (model.domain != Domain::discrete)
    throw DomainMismatch("cascade needs a discrete model");
  if (model.outputs() != 1) throw DimensionError("model must have a single output");
  const Eigen::Index k = model.order();
  const Eigen::Index n = filter.order();
  StateSpaceModel out;
  out.domain = Domain::discrete;
  out.A = Matrix::Zero(k + n, k + n);
  out.A.topLeftCorner(k, k) = model.A;
  out.A.bottomLeftCorner(n, k) = filter.B() * model.C;
  out.A.bottomRightCorner(n, n) = filter.A();
  out.B = Vector(k + n);
  out.B.head(k) = model.B;
  out.B.tail(n) = filter.B() * model.D(0);
  out.C = Matrix(n, k + n);
  out.C.leftCols(k) = filter.B() * model.C;
  out.C.rightCols(n) = filter.A();
  out.D = filter.B() * model.D(0);
  return out;
}

StateSpaceModel rational_to_state_space(const RationalTransferFunction& model,
                                        const Tolerances& tol) {
  double den_scale = 0.0;
  for (Complex c : model.den.coeffs()) den_scale = std::max(den_scale, std::abs(c));
  const Complex d0 = model.den.coeff(0);
  if (std::abs(d0) <= tol.zero * std::max(den_scale, kTiny))
    throw SingularSystem("transfer function has a pole at z = 0");

  const int k = std::max(model.num.degree(), model.den.degree());
  const Complex D = model.num.coeff(0) / d0;
  Matrix A = Matrix::Zero(k, k);
  Vector B = Vector::Zero(k);
  RowVector C = RowVector::Zero(k);
  for (int j = 1; j <= k; ++j) {
    const Complex dj = model.den.coeff(j) / d0;
    const Complex nj = model.num.coeff(j) / d0;
    A(0, j - 1) = -dj;
    C(j - 1) = nj - D * dj;
  }
  for (int i = 1; i < k; ++i) A(i, i - 1) = Complex(1.0, 0.0);
  if (k > 0) B(0) = Complex(1.0, 0.0);
  return StateSpaceModel::siso(std::move(A), std::move(B), C, D, Domain::discrete);
}

RationalTransferFunction state_space_to_rational(const StateSpaceModel& model) {
  model.require_valid();
  if (model.domain != Domain::discrete)
    throw DomainMismatch("rational conversion is defined for discrete models");
  if (model.outputs() != 1) throw DimensionError("model must have a single output");
  if (model.order() == 0)
    return RationalTransferFunction(Polynomial({model.D(0)}), Polynomial::one());
  const Polynomial den = det_poly(model.A);
  const Polynomial diff = det_poly(model.A - model.B * model.C) - den;
  const Polynomial num = den.scaled(model.D(0)) + diff;
  return RationalTransferFunction(num, den);
}

} // namespace mci
