#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mci/model.hpp"
#include "mci/tolerances.hpp"
#include "mci/types.hpp"

namespace mci {

enum class FilterLayout { caratheodory, points, circle };

struct LogSpacing {
  double f_lo;
  double f_hi;
  double T;
};

// Immutable pair (A, B) together with the cached reachability Gramian and
// reachability matrix. A is lower triangular in every layout (shift matrix,
// diagonal of points, lower Jordan blocks), which keeps the Gramian solve
// exact for the shift and diagonal cases.
class InputToStateFilter {
public:
  static InputToStateFilter caratheodory(int n);
  // (point, multiplicity) pairs; one Jordan block per point
  static InputToStateFilter from_points(
      const std::vector<std::pair<Complex, int>>& points);
  static InputToStateFilter circle_even(int n, double radius,
                                        bool conjugate_closed = true);
  static InputToStateFilter circle_log(int n, double radius, const LogSpacing& spacing,
                                       bool conjugate_closed = true);

  int order() const { return static_cast<int>(A_.rows()); }
  const Matrix& A() const { return A_; }
  const Vector& B() const { return B_; }
  const Matrix& gramian() const { return gramian_; }
  const Matrix& reach() const { return reach_; }
  const Eigen::LLT<Matrix>& gramian_llt() const { return gramian_llt_; }
  FilterLayout layout() const { return layout_; }
  // canonical textual form, accepted back by parse_filter_spec
  const std::string& descriptor() const { return descriptor_; }

  // G(z) = (I - zA)^{-1} B
  Vector eval_G(Complex z) const;
  // <G, f> = fbar(A) B for scalar f analytic in the disc
  Vector ip_G_scalar(const RationalTransferFunction& f) const;
  // <G, f G> = fbar(A) * Gramian
  Matrix ip_G_scalar_G(const RationalTransferFunction& f) const;
  // all-pass det(zI - A*) / det(I - zA)
  Complex blaschke(Complex z) const;

private:
  InputToStateFilter(Matrix A, Vector B, FilterLayout layout, std::string descriptor);

  Matrix fbar_apply(const RationalTransferFunction& f, const Matrix& rhs) const;

  Matrix A_;
  Vector B_;
  Matrix gramian_;
  Matrix reach_;
  Eigen::LLT<Matrix> gramian_llt_;
  FilterLayout layout_;
  std::string descriptor_;
  bool lower_triangular_ = false;
};

// Parses the canonical filter descriptors:
//   caratheodory:N
//   points:re,im,mult;re,im,mult;...
//   circle:N:R:even[:noconj]
//   circle:N:R:log:FLO:FHI:T[:noconj]
InputToStateFilter parse_filter_spec(const std::string& spec);

} // namespace mci
