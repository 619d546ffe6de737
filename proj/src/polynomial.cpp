#include "mci/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "mci/errors.hpp"

namespace mci {

namespace {

std::vector<Complex> trimmed(std::vector<Complex> c) {
  if (c.empty()) throw DimensionError("polynomial needs at least one coefficient");
  while (c.size() > 1 && c.back() == Complex(0.0, 0.0)) c.pop_back();
  return c;
}

} // namespace

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(trimmed(std::move(coeffs))) {}

Polynomial::Polynomial(std::initializer_list<Complex> coeffs)
    : Polynomial(std::vector<Complex>(coeffs)) {}

Complex Polynomial::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Complex(0.0, 0.0);
  return coeffs_[static_cast<size_t>(k)];
}

bool Polynomial::is_zero() const {
  return coeffs_.size() == 1 && coeffs_[0] == Complex(0.0, 0.0);
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc(0.0, 0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::conjugated() const {
  std::vector<Complex> c(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), c.begin(),
                 [](Complex v) { return std::conj(v); });
  return Polynomial(std::move(c));
}

std::vector<Complex> Polynomial::roots() const {
  const int d = degree();
  if (d <= 0) return {};
  Matrix companion = Matrix::Zero(d, d);
  const Complex lead = coeffs_.back();
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -coeffs_[static_cast<size_t>(i)] / lead;
  for (int i = 1; i < d; ++i) companion(i, i - 1) = Complex(1.0, 0.0);
  Eigen::ComplexEigenSolver<Matrix> es(companion, false);
  std::vector<Complex> out(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) out[static_cast<size_t>(i)] = es.eigenvalues()(i);
  return out;
}

bool Polynomial::roots_outside_disc(double margin) const {
  for (Complex r : roots())
    if (std::abs(r) <= 1.0 + margin) return false;
  return true;
}

Matrix Polynomial::at(const Matrix& M) const {
  if (M.rows() != M.cols()) throw DimensionError("matrix argument must be square");
  const Eigen::Index n = M.rows();
  Matrix acc = Matrix::Zero(n, n);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = M * acc;
    acc.diagonal().array() += *it;
  }
  return acc;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  std::vector<Complex> c(std::max(coeffs_.size(), other.coeffs_.size()), Complex(0.0, 0.0));
  for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (size_t i = 0; i < other.coeffs_.size(); ++i) c[i] += other.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  std::vector<Complex> c(std::max(coeffs_.size(), other.coeffs_.size()), Complex(0.0, 0.0));
  for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (size_t i = 0; i < other.coeffs_.size(); ++i) c[i] -= other.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  std::vector<Complex> c(coeffs_.size() + other.coeffs_.size() - 1, Complex(0.0, 0.0));
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < other.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * other.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::scaled(Complex c) const {
  std::vector<Complex> out(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), out.begin(),
                 [c](Complex v) { return c * v; });
  return Polynomial(std::move(out));
}

Polynomial Polynomial::shifted_down(double tol) const {
  double scale = 0.0;
  for (Complex c : coeffs_) scale = std::max(scale, std::abs(c));
  if (std::abs(coeffs_[0]) > tol * std::max(scale, 1.0))
    throw SingularSystem("cannot divide by z: constant coefficient is nonzero");
  if (coeffs_.size() == 1) return Polynomial({Complex(0.0, 0.0)});
  return Polynomial(std::vector<Complex>(coeffs_.begin() + 1, coeffs_.end()));
}

} // namespace mci
