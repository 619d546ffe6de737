#include "mci/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mci/errors.hpp"
#include "mci/numkit.hpp"
#include "mci/serialize.hpp"

namespace mci {

namespace {

constexpr double kTiny = 1e-300;

bool lower_triangular(const Matrix& M) {
  for (Eigen::Index j = 1; j < M.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (M(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

std::string points_descriptor(const std::vector<std::pair<Complex, int>>& points) {
  std::string out = "points:";
  bool first = true;
  for (const auto& [p, m] : points) {
    if (!first) out += ';';
    first = false;
    out += fmt_double(p.real()) + "," + fmt_double(p.imag()) + "," + std::to_string(m);
  }
  return out;
}

void check_collisions(const std::vector<Complex>& pts) {
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts[i] - pts[j]) <= 1e-12)
        throw AngleCollision("two generated circle points coincide");
}

} // namespace

InputToStateFilter::InputToStateFilter(Matrix A, Vector B, FilterLayout layout,
                                       std::string descriptor)
    : A_(std::move(A)),
      B_(std::move(B)),
      layout_(layout),
      descriptor_(std::move(descriptor)) {
  const Tolerances& tol = default_tolerances();
  const Eigen::Index n = A_.rows();
  if (n == 0 || A_.cols() != n || B_.size() != n)
    throw DimensionError("filter matrices must be n x n and n x 1 with n >= 1");
  if (!A_.allFinite() || !B_.allFinite())
    throw ValidationError("filter entries must be finite");
  if (spectral_radius(A_) >= 1.0 - tol.spectral_radius_margin)
    throw SpectralRadiusError("filter eigenvalues must lie strictly inside the unit disc");
  lower_triangular_ = lower_triangular(A_);

  reach_ = Matrix(n, n);
  Vector col = B_;
  for (Eigen::Index k = 0; k < n; ++k) {
    reach_.col(k) = col;
    col = A_ * col;
  }
  Eigen::JacobiSVD<Matrix> svd(reach_);
  const auto& sv = svd.singularValues();
  if (sv(n - 1) <= tol.reach_rank * std::max(sv(0), kTiny))
    throw ValidationError("reachability matrix is rank deficient");

  gramian_ = solve_stein(A_, B_ * B_.adjoint(), tol);
  gramian_llt_.compute(gramian_);
  if (gramian_llt_.info() != Eigen::Success)
    throw ValidationError("reachability Gramian is not positive definite");
}

InputToStateFilter InputToStateFilter::caratheodory(int n) {
  if (n < 1) throw DimensionError("order must be at least 1");
  Matrix A = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) A(i, i - 1) = Complex(1.0, 0.0);
  Vector B = Vector::Zero(n);
  B(0) = Complex(1.0, 0.0);
  return InputToStateFilter(std::move(A), std::move(B), FilterLayout::caratheodory,
                            "caratheodory:" + std::to_string(n));
}

InputToStateFilter InputToStateFilter::from_points(
    const std::vector<std::pair<Complex, int>>& points) {
  if (points.empty()) throw DimensionError("at least one interpolation point is required");
  int n = 0;
  for (size_t i = 0; i < points.size(); ++i) {
    const auto& [p, mult] = points[i];
    if (std::abs(p) >= 1.0) throw PointOutsideDisc("interpolation point outside the open disc");
    if (mult < 1) throw DimensionError("multiplicity must be at least 1");
    for (size_t j = i + 1; j < points.size(); ++j)
      if (points[j].first == p)
        throw DuplicatePoint("the same interpolation point is listed twice");
    n += mult;
  }
  Matrix A = Matrix::Zero(n, n);
  Vector B = Vector::Zero(n);
  int at = 0;
  for (const auto& [p, mult] : points) {
    for (int i = 0; i < mult; ++i) {
      A(at + i, at + i) = p;
      if (i > 0) A(at + i, at + i - 1) = Complex(1.0, 0.0);
    }
    B(at) = Complex(1.0, 0.0);
    at += mult;
  }
  return InputToStateFilter(std::move(A), std::move(B), FilterLayout::points,
                            points_descriptor(points));
}

InputToStateFilter InputToStateFilter::circle_even(int n, double radius,
                                                   bool conjugate_closed) {
  if (n < 1) throw DimensionError("order must be at least 1");
  if (!(radius > 0.0 && radius < 1.0))
    throw PointOutsideDisc("circle radius must lie in (0, 1)");
  std::vector<Complex> pts;
  if (conjugate_closed) {
    // mirror pairs exactly; always includes +radius, and -radius for even n
    pts.push_back(Complex(radius, 0.0));
    for (int k = 1; 2 * k < n; ++k) {
      const double th = 2.0 * std::numbers::pi * k / n;
      pts.push_back(std::polar(radius, th));
      pts.push_back(std::conj(std::polar(radius, th)));
    }
    if (n % 2 == 0) pts.push_back(Complex(-radius, 0.0));
  } else {
    for (int k = 0; k < n; ++k)
      pts.push_back(std::polar(radius, 2.0 * std::numbers::pi * k / n));
  }
  check_collisions(pts);
  std::vector<std::pair<Complex, int>> spec;
  for (Complex p : pts) spec.emplace_back(p, 1);
  InputToStateFilter f = from_points(spec);
  f.layout_ = FilterLayout::circle;
  f.descriptor_ = "circle:" + std::to_string(n) + ":" + fmt_double(radius) + ":even" +
                  (conjugate_closed ? "" : ":noconj");
  return f;
}

InputToStateFilter InputToStateFilter::circle_log(int n, double radius,
                                                  const LogSpacing& spacing,
                                                  bool conjugate_closed) {
  if (n < 1) throw DimensionError("order must be at least 1");
  if (!(radius > 0.0 && radius < 1.0))
    throw PointOutsideDisc("circle radius must lie in (0, 1)");
  if (!(spacing.f_lo > 0.0) || !(spacing.f_hi > spacing.f_lo) || !(spacing.T > 0.0))
    throw DimensionError("log spacing needs 0 < f_lo < f_hi and T > 0");
  const double w_lo = 2.0 * std::numbers::pi * spacing.f_lo;
  const double w_hi = 2.0 * std::numbers::pi * spacing.f_hi;
  // Geometric grid over [w_lo, w_hi) with the upper endpoint excluded: angles are
  // theta = omega T mod 2pi, and an inclusive grid whose span aliases to a whole
  // number of turns would fold the top frequency onto the bottom one.
  auto omega = [&](int j, int count) {
    const double t = static_cast<double>(j) / count;
    return std::exp(std::log(w_lo) + t * (std::log(w_hi) - std::log(w_lo)));
  };
  std::vector<Complex> pts;
  if (conjugate_closed) {
    const int pairs = n / 2;
    // odd order keeps one real anchor point at +radius
    if (n % 2 == 1) pts.push_back(Complex(radius, 0.0));
    for (int j = 0; j < pairs; ++j) {
      const double th = omega(j, pairs) * spacing.T;
      pts.push_back(std::polar(radius, th));
      pts.push_back(std::conj(std::polar(radius, th)));
    }
  } else {
    for (int j = 0; j < n; ++j)
      pts.push_back(std::polar(radius, omega(j, n) * spacing.T));
  }
  check_collisions(pts);
  std::vector<std::pair<Complex, int>> spec;
  for (Complex p : pts) spec.emplace_back(p, 1);
  InputToStateFilter f = from_points(spec);
  f.layout_ = FilterLayout::circle;
  f.descriptor_ = "circle:" + std::to_string(n) + ":" + fmt_double(radius) + ":log:" +
                  fmt_double(spacing.f_lo) + ":" + fmt_double(spacing.f_hi) + ":" +
                  fmt_double(spacing.T) + (conjugate_closed ? "" : ":noconj");
  return f;
}

Vector InputToStateFilter::eval_G(Complex z) const {
  const Eigen::Index n = A_.rows();
  const Matrix M = Matrix::Identity(n, n) - z * A_;
  Vector x;
  if (lower_triangular_) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(M(i, i)) < kTiny) throw NearPole("evaluation point is a pole");
    x = M.triangularView<Eigen::Lower>().solve(B_);
  } else {
    x = M.partialPivLu().solve(B_);
  }
  const Tolerances& tol = default_tolerances();
  if (!x.allFinite() || x.norm() > B_.norm() / tol.near_pole)
    throw NearPole("evaluation point is numerically a pole");
  return x;
}

Matrix InputToStateFilter::fbar_apply(const RationalTransferFunction& f,
                                      const Matrix& rhs) const {
  if (!f.stable(default_tolerances().stability_margin))
    throw UnstableF("function must be analytic in the closed unit disc");
  const Matrix den_bar = f.den.conjugated().at(A_);
  const Matrix num_bar = f.num.conjugated().at(A_);
  // fbar(A) = numbar(A) denbar(A)^{-1}; the factors commute as polynomials in A
  return num_bar * den_bar.partialPivLu().solve(rhs);
}

Vector InputToStateFilter::ip_G_scalar(const RationalTransferFunction& f) const {
  return fbar_apply(f, B_);
}

Matrix InputToStateFilter::ip_G_scalar_G(const RationalTransferFunction& f) const {
  return fbar_apply(f, gramian_);
}

Complex InputToStateFilter::blaschke(Complex z) const {
  const Eigen::Index n = A_.rows();
  Complex num, den;
  if (lower_triangular_) {
    num = Complex(1.0, 0.0);
    den = Complex(1.0, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      num *= z - std::conj(A_(i, i));
      den *= Complex(1.0, 0.0) - z * A_(i, i);
    }
  } else {
    num = (z * Matrix::Identity(n, n) - A_.adjoint()).determinant();
    den = (Matrix::Identity(n, n) - z * A_).determinant();
  }
  if (std::abs(den) <= default_tolerances().near_pole * std::max(std::abs(num), 1.0))
    throw NearPole("evaluation point is a pole of the Blaschke product");
  return num / den;
}

InputToStateFilter parse_filter_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  auto as_int = [](const std::string& s) {
    try {
      size_t pos = 0;
      int v = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ParseError("bad integer in filter spec: '" + s + "'");
    }
  };
  auto as_double = [](const std::string& s) {
    try {
      size_t pos = 0;
      double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ParseError("bad number in filter spec: '" + s + "'");
    }
  };

  if (parts.empty() || parts[0].empty()) throw ParseError("empty filter spec");
  const std::string& kind = parts[0];
  if (kind == "caratheodory") {
    if (parts.size() != 2) throw ParseError("expected caratheodory:N");
    return InputToStateFilter::caratheodory(as_int(parts[1]));
  }
  if (kind == "points") {
    if (parts.size() != 2) throw ParseError("expected points:re,im,mult;...");
    std::vector<std::pair<Complex, int>> pts;
    std::stringstream ss(parts[1]);
    std::string item;
    while (std::getline(ss, item, ';')) {
      std::stringstream fs(item);
      std::string re, im, mult;
      if (!std::getline(fs, re, ',') || !std::getline(fs, im, ',') ||
          !std::getline(fs, mult, ','))
        throw ParseError("point entry must be re,im,mult");
      pts.emplace_back(Complex(as_double(re), as_double(im)), as_int(mult));
    }
    return InputToStateFilter::from_points(pts);
  }
  if (kind == "circle") {
    if (parts.size() < 4) throw ParseError("expected circle:N:R:even|log...");
    const int n = as_int(parts[1]);
    const double radius = as_double(parts[2]);
    const std::string& mode = parts[3];
    const bool noconj = parts.back() == "noconj";
    const size_t body = parts.size() - (noconj ? 1 : 0);
    if (mode == "even") {
      if (body != 4) throw ParseError("expected circle:N:R:even[:noconj]");
      return InputToStateFilter::circle_even(n, radius, !noconj);
    }
    if (mode == "log") {
      if (body != 7) throw ParseError("expected circle:N:R:log:FLO:FHI:T[:noconj]");
      LogSpacing spacing{as_double(parts[4]), as_double(parts[5]), as_double(parts[6])};
      return InputToStateFilter::circle_log(n, radius, spacing, !noconj);
    }
    throw ParseError("unknown circle spacing '" + mode + "'");
  }
  throw ParseError("unknown filter layout '" + kind + "'");
}

} // namespace mci
