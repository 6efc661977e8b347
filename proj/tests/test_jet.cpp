#include <doctest.h>

#include <cmath>

#include "rsplit/jet.hpp"

using namespace rsplit;

TEST_CASE("jet derivatives of composite functions") {
  const double x0 = 0.7, y0 = -0.4;
  Jet x = Jet::variable(0, x0), y = Jet::variable(1, y0);
  Jet f = sin(x * y) + exp(x) / (1.0 + y * y) + sqrt(x + 2.0) * pow(y + 3.0, 1.5) + log(x + 1.0);

  auto F = [](double a, double b) {
    return std::sin(a * b) + std::exp(a) / (1 + b * b) + std::sqrt(a + 2) * std::pow(b + 3, 1.5) + std::log(a + 1);
  };
  CHECK(f.value() == doctest::Approx(F(x0, y0)).epsilon(1e-14));
  const double h = 1e-4;
  const double fx = (F(x0 + h, y0) - F(x0 - h, y0)) / (2 * h);
  const double fy = (F(x0, y0 + h) - F(x0, y0 - h)) / (2 * h);
  const double fxy = (F(x0 + h, y0 + h) - F(x0 + h, y0 - h) - F(x0 - h, y0 + h) + F(x0 - h, y0 - h)) / (4 * h * h);
  CHECK(f.partial(0) == doctest::Approx(fx).epsilon(1e-7));
  CHECK(f.partial(1) == doctest::Approx(fy).epsilon(1e-7));
  CHECK(f.partial2(0, 1) == doctest::Approx(fxy).epsilon(1e-6));
  CHECK(f.partial2(0, 1) == doctest::Approx(f.partial2(1, 0)).epsilon(1e-15));
  CHECK(f.d(0).partial(1) == doctest::Approx(f.partial2(0, 1)).epsilon(1e-14));
  CHECK(f.d(0).d(1).order() == 2);
}

TEST_CASE("jet exact polynomial arithmetic") {
  Jet x = Jet::variable(0, 2.0), t = Jet::variable(3, 1.5);
  Jet p = x * x * t;  // x²t
  CHECK(p.partial(0) == doctest::Approx(2 * 2.0 * 1.5));
  CHECK(p.partial(3) == doctest::Approx(4.0));
  CHECK(p.partial2(0, 0) == doctest::Approx(2 * 1.5));
  CHECK(p.partial2(0, 3) == doctest::Approx(4.0));
  CHECK(p.d(0).d(0).d(3).value() == doctest::Approx(2.0));
  Jet q = 1.0 / x;
  CHECK(q.partial2(0, 0) == doctest::Approx(2.0 / 8.0));
  CHECK_THROWS(p.d(0).d(0).d(0).d(0).d(0));
}

TEST_CASE("jet composition equals direct evaluation") {
  // g(u, v) expanded at the identity seed, then composed with u = x + y², v = sin(x)
  const double x0 = 0.3, y0 = 0.8;
  Jet x = Jet::variable(0, x0), y = Jet::variable(1, y0);
  Jet u = x + y * y, v = sin(x);
  auto g = [](const Jet& a, const Jet& b) { return exp(a) * b + a * a * a; };
  Jet direct = g(u, v);
  Jet gu = g(Jet::variable(0, u.value()), Jet::variable(1, v.value()));
  std::array<Jet, 4> delta{u - u.value(), v - v.value(), Jet(0.0), Jet(0.0)};
  Jet composed = gu.compose(delta);
  for (int idx = 0; idx < Jet::kSize; ++idx) CHECK(composed.coef(idx) == doctest::Approx(direct.coef(idx)).epsilon(1e-12));
}
