#include "rsplit/random_fields.hpp"

#include <array>
#include <boost/random/sobol.hpp>
#include <boost/random/uniform_01.hpp>
#include <random>

namespace rsplit {

namespace {

struct Coefs {
  std::array<std::array<double, 10>, 6> c{};
};

Coefs draw(std::uint64_t seed) {
  std::mt19937_64 r(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Coefs k;
  for (auto& row : k.c)
    for (auto& x : row) x = u(r);
  return k;
}

Jet component(const std::array<double, 10>& c, const Coords& x) {
  return c[0] + c[1] * x[0] + c[2] * x[1] * x[2] + c[3] * sin(x[3] + c[4] * x[0]) + c[5] * x[0] * x[0] * x[1] +
         c[6] * cos(x[2] - x[1]) * x[3] + c[7] * exp(0.5 * c[8] * x[2]) * x[0] + c[9] * x[3] * x[3] * x[1];
}

}  // namespace

FormField random_form_field(Chart chart, Meta meta, std::uint64_t seed) {
  const Coefs k = draw(seed);
  return FormField(chart, meta, [k, meta](const Coords& x) {
    Form<Jet> f(meta);
    for (int p = 0; p < f.size(); ++p) f.c[p] = component(k.c[p], x);
    return f;
  });
}

VecField random_vec_field(Chart chart, Meta meta, std::uint64_t seed) {
  const Coefs k = draw(seed);
  return VecField(chart, meta, [k, meta](const Coords& x) {
    MultiVec<Jet> f(meta);
    for (int p = 0; p < f.size(); ++p) f.c[p] = component(k.c[p], x);
    return f;
  });
}

FormField random_christoffel(int ncoords, std::uint64_t seed, double amp) {
  std::mt19937_64 r(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  // coefficients of 1, t, x_j, t·x_j, t², x_j x_k, t²·x_1, t³
  std::array<std::array<double, 16>, 3> c{};
  for (auto& row : c)
    for (auto& v : row) v = u(r);
  Meta m;
  m.n = ncoords - 1;
  m.k = 1;
  m.lie = LieValue::alg();
  return FormField({ncoords, true}, m, [c, m](const Coords& x) {
    Form<Jet> f(m);
    for (int i = 0; i < m.n; ++i) {
      const auto& a = c[i];
      const Jet& t = x[0];
      Jet s = a[0] + a[1] * t + a[2] * t * t + a[3] * t * t * t;
      for (int j = 1; j < 4; ++j) s += a[3 + j] * x[j] + a[6 + j] * t * x[j];
      s += a[10] * x[1] * x[2] + a[11] * x[2] * x[3] + a[12] * x[1] * x[3] + a[13] * x[1] * x[1] +
           a[14] * t * t * x[1] + a[15] * x[3] * x[3];
      f.c[i] = s;
    }
    return f;
  });
}

std::vector<Point> sobol_points(const Point& lo, const Point& hi, int count, int dims, std::uint64_t skip) {
  boost::random::sobol gen(dims);
  gen.discard(skip * dims);
  boost::random::uniform_01<double> u;
  std::vector<Point> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Point p = lo;
    for (int d = 0; d < dims; ++d) p[d] = lo[d] + (hi[d] - lo[d]) * u(gen);
    out.push_back(p);
  }
  return out;
}

std::vector<Point> random_points(const Point& lo, const Point& hi, int count, std::uint64_t seed) {
  std::mt19937_64 r(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) {
    Point p;
    for (int d = 0; d < 4; ++d) p[d] = lo[d] + (hi[d] - lo[d]) * u(r);
    out.push_back(p);
  }
  return out;
}

}  // namespace rsplit
