#include <cmath>
#include <complex>

#include "doctest.h"
#include "mci/errors.hpp"
#include "mci/filter.hpp"
#include "oracles.hpp"

using namespace mci;
using oracle::Rng;

namespace {

RationalTransferFunction constant(Complex c) {
  return RationalTransferFunction(Polynomial{c}, Polynomial::one());
}

const RationalTransferFunction kOne = constant(Complex(1.0, 0.0));

} // namespace

TEST_CASE("shift filter basics") {
  const auto f1 = InputToStateFilter::caratheodory(1);
  CHECK(f1.A()(0, 0) == Complex(0.0, 0.0));
  CHECK(f1.B()(0) == Complex(1.0, 0.0));

  const auto f3 = InputToStateFilter::caratheodory(3);
  Matrix expected = Matrix::Zero(3, 3);
  expected(1, 0) = expected(2, 1) = Complex(1.0, 0.0);
  CHECK((f3.A() - expected).norm() == 0.0);
  CHECK(f3.B()(0) == Complex(1.0, 0.0));
  CHECK(f3.B().tail(2).norm() == 0.0);

  const Vector g = f3.eval_G(Complex(0.5, 0.0));
  CHECK(std::abs(g(0) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(g(1) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(g(2) - Complex(0.25, 0.0)) < 1e-15);
}

TEST_CASE("shift filter gramian is exactly the identity") {
  for (int n = 1; n <= 16; ++n) {
    const auto f = InputToStateFilter::caratheodory(n);
    CHECK((f.gramian() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("point filter fixed cases") {
  const auto f = InputToStateFilter::from_points({{Complex(0.5, 0.0), 1}});
  CHECK(f.A()(0, 0) == Complex(0.5, 0.0));
  CHECK(f.B()(0) == Complex(1.0, 0.0));
  CHECK(std::abs(f.gramian()(0, 0) - Complex(4.0 / 3.0, 0.0)) < 1e-14);

  const auto f2 = InputToStateFilter::from_points(
      {{Complex(0.3, 0.0), 1}, {Complex(-0.4, 0.0), 1}});
  Matrix expected(2, 2);
  expected << Complex(1.0 / 0.91, 0.0), Complex(1.0 / 1.12, 0.0),
      Complex(1.0 / 1.12, 0.0), Complex(1.0 / 0.84, 0.0);
  CHECK((f2.gramian() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("point filter gramian matches the kernel closed form") {
  Rng rng(201);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.uniform_int(2, 6);
    const auto f = rng.point_filter(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Complex pi = f.A()(i, i);
        const Complex pj = f.A()(j, j);
        const Complex closed = Complex(1.0, 0.0) / (Complex(1.0, 0.0) - pi * std::conj(pj));
        CHECK(std::abs(f.gramian()(i, j) - closed) < 1e-12 * std::abs(closed));
      }
  }
}

TEST_CASE("repeated point becomes one jordan block") {
  const auto f = InputToStateFilter::from_points({{Complex(0.5, 0.0), 2}});
  Matrix A(2, 2);
  A << Complex(0.5, 0.0), Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(0.5, 0.0);
  CHECK((f.A() - A).norm() == 0.0);
  CHECK(f.B()(0) == Complex(1.0, 0.0));
  CHECK(f.B()(1) == Complex(0.0, 0.0));
  Matrix reach(2, 2);
  reach << Complex(1.0, 0.0), Complex(0.5, 0.0), Complex(0.0, 0.0), Complex(1.0, 0.0);
  CHECK((f.reach() - reach).norm() == 0.0);
}

TEST_CASE("point filter validation") {
  CHECK_THROWS_AS(InputToStateFilter::from_points({{Complex(1.1, 0.0), 1}}),
                  PointOutsideDisc);
  CHECK_THROWS_AS(InputToStateFilter::from_points(
                      {{Complex(0.5, 0.0), 1}, {Complex(0.5, 0.0), 1}}),
                  DuplicatePoint);
}

TEST_CASE("even circle layout") {
  const auto f1 = InputToStateFilter::circle_even(1, 0.5);
  CHECK(f1.order() == 1);
  CHECK(f1.A()(0, 0) == Complex(0.5, 0.0));

  const auto f = InputToStateFilter::circle_even(14, 0.95);
  REQUIRE(f.order() == 14);
  std::vector<Complex> expected;
  for (int k = 0; k < 14; ++k)
    expected.push_back(std::polar(0.95, 2.0 * std::numbers::pi * k / 14));
  // as a set: every expected point appears once among the diagonal entries
  for (const Complex want : expected) {
    int hits = 0;
    for (int i = 0; i < 14; ++i)
      if (std::abs(f.A()(i, i) - want) < 1e-12) ++hits;
    CHECK(hits == 1);
  }
  // conjugate closure
  for (int i = 0; i < 14; ++i) {
    const Complex p = f.A()(i, i);
    int hits = 0;
    for (int j = 0; j < 14; ++j)
      if (std::abs(f.A()(j, j) - std::conj(p)) < 1e-12) ++hits;
    CHECK(hits == 1);
  }
}

TEST_CASE("log circle layout") {
  const auto f = InputToStateFilter::circle_log(14, 0.9, LogSpacing{10.0, 1e5, 1.0 / 250.0});
  REQUIRE(f.order() == 14);
  for (int i = 0; i < 14; ++i) {
    const Complex p = f.A()(i, i);
    CHECK(std::abs(std::abs(p) - 0.9) < 1e-12);
    int hits = 0;
    for (int j = 0; j < 14; ++j)
      if (std::abs(f.A()(j, j) - std::conj(p)) < 1e-12) ++hits;
    CHECK(hits == 1);
  }
  // odd order keeps a real anchor
  const auto f5 = InputToStateFilter::circle_log(5, 0.8, LogSpacing{1.0, 10.0, 0.01});
  int real_points = 0;
  for (int i = 0; i < 5; ++i)
    if (std::abs(f5.A()(i, i).imag()) < 1e-15) ++real_points;
  CHECK(real_points == 1);
}

TEST_CASE("colliding circle angles are rejected") {
  // f_lo = 1 with T = 1 aliases the first pair to angle 0, so the point
  // collides with its own mirror image
  CHECK_THROWS_AS(InputToStateFilter::circle_log(4, 0.9, LogSpacing{1.0, 2.0, 1.0}),
                  AngleCollision);
}

TEST_CASE("state evaluation fixed points") {
  const auto f = InputToStateFilter::from_points({{Complex(0.5, 0.0), 1}});
  CHECK(std::abs(f.eval_G(Complex(0.0, 0.0))(0) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(f.eval_G(Complex(1.0, 0.0))(0) - Complex(2.0, 0.0)) < 1e-14);
  CHECK_THROWS_AS(f.eval_G(Complex(2.0, 0.0)), NearPole);
}

TEST_CASE("state evaluation shift identity") {
  Rng rng(202);
  for (int trial = 0; trial < 8; ++trial) {
    const auto f = rng.point_filter(rng.uniform_int(1, 6));
    for (int k = 0; k < 16; ++k) {
      const Complex z = rng.disc_point(0.95);
      if (std::abs(z) < 1e-3) continue;
      const Vector g = f.eval_G(z);
      CHECK((f.A() * g - (g - f.B()) / z).norm() < 1e-12 * std::max(1.0, g.norm()));
    }
  }
}

TEST_CASE("inner product fixed cases") {
  const auto shift3 = InputToStateFilter::caratheodory(3);
  CHECK((shift3.ip_G_scalar(kOne) - shift3.B()).norm() < 1e-15);

  const RationalTransferFunction fz(Polynomial{Complex(0.0, 0.0), Complex(1.0, 0.0)},
                                    Polynomial::one());
  Vector e2 = Vector::Zero(3);
  e2(1) = Complex(1.0, 0.0);
  CHECK((shift3.ip_G_scalar(fz) - e2).norm() < 1e-15);

  const auto pole = InputToStateFilter::from_points({{Complex(0.5, 0.0), 1}});
  const RationalTransferFunction f03(Polynomial::one(),
                                     Polynomial{Complex(1.0, 0.0), Complex(-0.3, 0.0)});
  CHECK(std::abs(pole.ip_G_scalar(f03)(0) - Complex(1.0 / 0.85, 0.0)) < 1e-14);
}

TEST_CASE("inner product agrees with circle quadrature") {
  Rng rng(203);
  for (int trial = 0; trial < 8; ++trial) {
    const auto filter = rng.point_filter(rng.uniform_int(1, 5));
    const RationalTransferFunction f = rng.stable_rtf(rng.uniform_int(0, 3), rng.uniform_int(0, 3));
    const Vector direct = filter.ip_G_scalar(f);
    const Vector quad = oracle::ip_quadrature(filter, [&](Complex z) { return f.eval(z); });
    CHECK((direct - quad).norm() < 1e-6 * std::max(1.0, direct.norm()));
  }
}

TEST_CASE("shift filter inner products are taylor coefficients") {
  Rng rng(204);
  const auto shift = InputToStateFilter::caratheodory(4);
  for (int trial = 0; trial < 5; ++trial) {
    const RationalTransferFunction f = rng.stable_rtf(3, 3);
    const Vector ip = shift.ip_G_scalar(f);
    const auto taylor = oracle::taylor(f, 4);
    for (int k = 0; k < 4; ++k)
      CHECK(std::abs(ip(k) - std::conj(taylor[static_cast<size_t>(k)])) < 1e-10);
  }
}

TEST_CASE("gramian weighted inner product") {
  const auto pole = InputToStateFilter::from_points({{Complex(0.5, 0.0), 1}});
  CHECK(std::abs(pole.ip_G_scalar_G(kOne)(0, 0) - Complex(4.0 / 3.0, 0.0)) < 1e-14);
  const RationalTransferFunction fz(Polynomial{Complex(0.0, 0.0), Complex(1.0, 0.0)},
                                    Polynomial::one());
  CHECK(std::abs(pole.ip_G_scalar_G(fz)(0, 0) - Complex(2.0 / 3.0, 0.0)) < 1e-14);

  const auto shift2 = InputToStateFilter::caratheodory(2);
  const RationalTransferFunction f03(Polynomial::one(),
                                     Polynomial{Complex(1.0, 0.0), Complex(-0.3, 0.0)});
  Matrix expected(2, 2);
  expected << Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.3, 0.0), Complex(1.0, 0.0);
  CHECK((shift2.ip_G_scalar_G(f03) - expected).norm() < 1e-14);
}

TEST_CASE("unstable weight functions are rejected") {
  const auto shift2 = InputToStateFilter::caratheodory(2);
  const RationalTransferFunction bad(Polynomial::one(),
                                     Polynomial{Complex(1.0, 0.0), Complex(-2.0, 0.0)});
  CHECK_THROWS_AS(shift2.ip_G_scalar(bad), UnstableF);
  CHECK_THROWS_AS(shift2.ip_G_scalar_G(bad), UnstableF);
}

TEST_CASE("all-pass factor") {
  const auto pole = InputToStateFilter::from_points({{Complex(0.5, 0.0), 1}});
  CHECK(std::abs(pole.blaschke(Complex(0.5, 0.0))) < 1e-15);
  CHECK(std::abs(pole.blaschke(Complex(0.0, 0.0)) - Complex(-0.5, 0.0)) < 1e-15);

  Rng rng(205);
  for (int trial = 0; trial < 6; ++trial) {
    const auto f = rng.point_filter(rng.uniform_int(1, 6));
    for (const Complex z : circle_grid(16))
      CHECK(std::abs(std::abs(f.blaschke(z)) - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(f.blaschke(std::polar(1.0, std::numbers::pi / 3))) - 1.0) <
          1e-10);
  }
}

TEST_CASE("constructor invariants for random layouts") {
  Rng rng(206);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = rng.point_filter(rng.uniform_int(1, 6));
    const Matrix residual =
        f.gramian() - f.A() * f.gramian() * f.A().adjoint() - f.B() * f.B().adjoint();
    CHECK(residual.norm() < 1e-12 * f.gramian().norm());
    const Eigen::SelfAdjointEigenSolver<Matrix> es(f.gramian());
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    const Eigen::JacobiSVD<Matrix> svd(f.reach());
    CHECK(svd.singularValues()(svd.singularValues().size() - 1) >
          1e-10 * svd.singularValues()(0));
  }
}

TEST_CASE("filter spec grammar") {
  const auto c = parse_filter_spec("caratheodory:4");
  CHECK(c.layout() == FilterLayout::caratheodory);
  CHECK(c.order() == 4);
  CHECK(c.descriptor() == "caratheodory:4");

  const auto p = parse_filter_spec("points:0.5,0,1;-0.25,0.1,2");
  CHECK(p.order() == 3);
  CHECK(p.A()(0, 0) == Complex(0.5, 0.0));
  CHECK(p.A()(1, 1) == Complex(-0.25, 0.1));
  // canonical descriptor parses back to the same filter
  const auto p2 = parse_filter_spec(p.descriptor());
  CHECK((p.A() - p2.A()).norm() == 0.0);

  const auto ce = parse_filter_spec("circle:14:0.95:even");
  CHECK(ce.order() == 14);
  CHECK(ce.layout() == FilterLayout::circle);
  const auto cl = parse_filter_spec("circle:14:0.9:log:10:100000:0.004");
  CHECK(cl.order() == 14);
  const auto cn = parse_filter_spec("circle:5:0.5:even:noconj");
  CHECK(cn.order() == 5);

  CHECK_THROWS_AS(parse_filter_spec(""), ParseError);
  CHECK_THROWS_AS(parse_filter_spec("caratheodory"), ParseError);
  CHECK_THROWS_AS(parse_filter_spec("caratheodory:x"), ParseError);
  CHECK_THROWS_AS(parse_filter_spec("points:0.5,0"), ParseError);
  CHECK_THROWS_AS(parse_filter_spec("circle:4:0.9:spiral"), ParseError);
  CHECK_THROWS_AS(parse_filter_spec("ring:4"), ParseError);
}
