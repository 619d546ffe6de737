#include "mci/model.hpp"

#include <cmath>
#include <numbers>

#include "mci/errors.hpp"
#include "mci/numkit.hpp"

namespace mci {

RationalTransferFunction::RationalTransferFunction(Polynomial num_, Polynomial den_)
    : num(std::move(num_)), den(std::move(den_)) {
  if (den.is_zero()) throw ValidationError("transfer function denominator is zero");
  double scale = 0.0;
  for (Complex c : den.coeffs()) scale = std::max(scale, std::abs(c));
  const Complex d0 = den.coeff(0);
  if (std::abs(d0) > default_tolerances().zero * scale && d0 != Complex(1.0, 0.0)) {
    num = num.scaled(Complex(1.0, 0.0) / d0);
    den = den.scaled(Complex(1.0, 0.0) / d0);
  }
}

Complex RationalTransferFunction::eval(Complex z) const { return num(z) / den(z); }

bool RationalTransferFunction::stable(double margin) const {
  return den.roots_outside_disc(margin);
}

StateSpaceModel StateSpaceModel::siso(Matrix A, Vector B, RowVector C, Complex D,
                                      Domain domain) {
  StateSpaceModel m;
  m.A = std::move(A);
  m.B = std::move(B);
  m.C = C;
  m.D = Vector::Constant(1, D);
  m.domain = domain;
  m.require_valid();
  return m;
}

Vector StateSpaceModel::eval(Complex z) const {
  const Eigen::Index k = A.rows();
  if (k == 0) return D;
  if (domain == Domain::discrete) {
    Matrix I = Matrix::Identity(k, k);
    Vector x = (I - z * A).partialPivLu().solve(B);
    return D + z * (C * x);
  }
  Matrix M = z * Matrix::Identity(k, k) - A;
  Vector x = M.partialPivLu().solve(B);
  return D + C * x;
}

Complex StateSpaceModel::eval_scalar(Complex z) const {
  if (outputs() != 1) throw DimensionError("scalar evaluation needs a single-output model");
  return eval(z)(0);
}

bool StateSpaceModel::stable(double margin) const {
  if (A.rows() == 0) return true;
  if (domain == Domain::discrete) return spectral_radius(A) < 1.0 - margin;
  Eigen::ComplexEigenSolver<Matrix> es(A, false);
  return es.eigenvalues().real().maxCoeff() < 0.0;
}

void StateSpaceModel::require_valid() const {
  if (A.rows() != A.cols()) throw DimensionError("state matrix must be square");
  if (B.size() != A.rows()) throw DimensionError("input vector length must match the order");
  if (C.cols() != A.rows()) throw DimensionError("output matrix width must match the order");
  if (C.rows() < 1 || D.size() != C.rows())
    throw DimensionError("output matrix and feedthrough must have matching rows");
  if (!A.allFinite() || !B.allFinite() || !C.allFinite() || !D.allFinite())
    throw ValidationError("model entries must be finite");
}

std::vector<Complex> circle_grid(int npts, double radius) {
  std::vector<Complex> out(static_cast<size_t>(npts));
  for (int k = 0; k < npts; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.5) / npts;
    out[static_cast<size_t>(k)] = std::polar(radius, th);
  }
  return out;
}

} // namespace mci
