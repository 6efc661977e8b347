#include "rsplit/fields.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <stdexcept>

namespace rsplit {

Coords seed(const Point& p) {
  Coords x;
  for (int i = 0; i < Jet::kVars; ++i) x[i] = Jet::variable(i, p[i]);
  return x;
}

Coords constant_coords(const Point& p) {
  Coords x;
  for (int i = 0; i < Jet::kVars; ++i) x[i] = Jet(p[i]).truncated(0);
  return x;
}

Point point_of(const Coords& x) {
  Point p;
  for (int i = 0; i < Jet::kVars; ++i) p[i] = x[i].value();
  return p;
}

bool is_identity_seed(const Coords& x) {
  for (int i = 0; i < Jet::kVars; ++i) {
    if (x[i].order() != Jet::kMaxOrder) return false;
    for (int idx = 1; idx < Jet::kSize; ++idx) {
      const double want = (Jet::degree(idx) == 1 && Jet::exponent(idx)[i] == 1) ? 1.0 : 0.0;
      if (x[i].coef(idx) != want) return false;
    }
  }
  return true;
}

Jet recompose(const Jet& j, const Coords& x) {
  bool constant = true;
  for (const auto& xi : x) constant = constant && xi.order() == 0;
  if (constant) return j.truncated(0);
  std::array<Jet, Jet::kVars> delta;
  for (int i = 0; i < Jet::kVars; ++i) delta[i] = x[i] - x[i].value();
  return j.compose(delta);
}

FormField scalar_field(Chart chart, ScalarFn f, Dimension pd, LieValue lie) {
  Meta m;
  m.n = chart.axes();
  m.k = 0;
  m.lie = lie;
  m.pd = pd;
  return FormField(chart, m, [f = std::move(f), m](const Coords& x) {
    Form<Jet> r(m);
    r.c[0] = f(x);
    return r;
  });
}

namespace {
template <class A, class B>
void require_same_chart(const A& a, const B& b, const char* what) {
  if (!(a.chart() == b.chart())) throw MetaError(std::string(what) + ": chart mismatch");
}

}  // namespace

FormField wedge(const FormField& a, const FormField& b) {
  require_same_chart(a, b, "wedge");
  const Meta m = wedge(Form<double>(a.meta()), Form<double>(b.meta())).m;
  return FormField(a.chart(), m, [a, b](const Coords& x) { return wedge(a(x), b(x)); });
}

VecField wedge(const VecField& a, const VecField& b) {
  require_same_chart(a, b, "wedge");
  const Meta m = wedge(MultiVec<double>(a.meta()), MultiVec<double>(b.meta())).m;
  return VecField(a.chart(), m, [a, b](const Coords& x) { return wedge(a(x), b(x)); });
}

FormField contract(const VecField& v, const FormField& g) {
  require_same_chart(v, g, "contract");
  const Meta m = contract(MultiVec<double>(v.meta()), Form<double>(g.meta())).m;
  return FormField(g.chart(), m, [v, g](const Coords& x) { return contract(v(x), g(x)); });
}

VecField contract(const FormField& g, const VecField& v) {
  require_same_chart(v, g, "contract");
  const Meta m = contract(Form<double>(g.meta()), MultiVec<double>(v.meta())).m;
  return VecField(v.chart(), m, [v, g](const Coords& x) { return contract(g(x), v(x)); });
}

FormField sign_n(const FormField& a) { return a.meta().k % 2 ? -a : a; }

FormField rebase_lie(const FormField& a, double lambda) {
  const Meta m = rebase_lie(Form<double>(a.meta()), lambda).m;
  return FormField(a.chart(), m, [a, lambda](const Coords& x) { return rebase_lie(a(x), lambda); });
}

FormField retag(const FormField& a, LieValue lie, Dimension pd) {
  Meta m = a.meta();
  m.lie = lie;
  m.pd = pd;
  return FormField(a.chart(), m, [a, m](const Coords& x) {
    auto v = a(x);
    v.m = m;
    return v;
  });
}

FormField exterior_d(const FormField& g, bool allow_top) {
  const Meta gm = g.meta();
  Meta m = gm;
  m.k += 1;
  const Chart chart = g.chart();
  if (gm.k >= gm.n) {
    if (!allow_top) throw MetaError("exterior_d: top-degree input");
    return zero_field<Kind::Form>(chart, m);
  }
  return FormField(chart, m, [g, m, chart](const Coords& x) {
    return local_op<Form<Jet>>(x, [&](const Coords& s) {
      const auto v = g(s);
      Form<Jet> r(m);
      for (int p = 0; p < v.size(); ++p) {
        const int I = v.mask(p);
        for (int a = 0; a < m.n; ++a) {
          if (I & (1 << a)) continue;
          Jet t = v.c[p].d(chart.coord_of_axis(a));
          if (merge_sign(1 << a, I) > 0)
            r.at_mask(I | (1 << a)) += t;
          else
            r.at_mask(I | (1 << a)) -= t;
        }
      }
      return r;
    });
  });
}

FormField group_derivative(const FormField& a, Group grp) {
  if (!a.chart().parametric) throw MetaError("group_derivative: parametric field required");
  Meta m = a.meta();
  const bool vanishes = m.lie.down[int(grp)] >= 1;
  m.lie = m.lie.with_down(grp);
  if (vanishes) return zero_field<Kind::Form>(a.chart(), m);
  return FormField(a.chart(), m, [a, m](const Coords& x) {
    return local_op<Form<Jet>>(x, [&](const Coords& s) {
      auto v = a(s);
      for (int p = 0; p < v.size(); ++p) v.c[p] = v.c[p].d(0);
      v.m = m;
      return v;
    });
  });
}

FormField lie_derivative(const VecField& v, const FormField& g) {
  if (v.meta().k != 1) throw MetaError("lie_derivative: 1-vector required");
  const int k = g.meta().k;
  const int n = g.meta().n;
  if (k == 0) return contract(v, exterior_d(g));
  if (k >= n) return exterior_d(contract(v, g));
  return exterior_d(contract(v, g)) + contract(v, exterior_d(g));
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  using Q = boost::math::quadrature::gauss<double, 15>;
  struct Rec {
    const std::function<double(double)>& f;
    double go(double lo, double hi, double whole, double tol, int depth) const {
      const double mid = 0.5 * (lo + hi);
      const double left = Q::integrate(f, lo, mid);
      const double right = Q::integrate(f, mid, hi);
      if (depth >= 40 || std::abs(left + right - whole) <= tol) return left + right;
      return go(lo, mid, left, 0.5 * tol, depth + 1) + go(mid, hi, right, 0.5 * tol, depth + 1);
    }
  };
  if (a == b) return 0.0;
  if (a > b) return -integrate_1d(f, b, a, abs_tol);
  Rec r{f};
  return r.go(a, b, Q::integrate(f, a, b), abs_tol, 0);
}

Form<double> integrate_G(const FormField& a, double t0, double t1, const Point& x, double abs_tol,
                         double lie_scale) {
  if (!a.chart().parametric) throw MetaError("integrate_G: parametric field required");
  Meta m = a.meta();
  if (m.lie.down[0] < 1) throw MetaError("integrate_G: integrand must be dual-valued");
  m.lie.down[0]--;
  Form<double> r(m);
  for (int p = 0; p < r.size(); ++p) {
    r.c[p] = integrate_1d(
        [&](double t) {
          Point q = x;
          q[0] = t;
          return a.value(q).c[p];
        },
        t0, t1, abs_tol) / lie_scale;
  }
  return r;
}

FormField pullback(const FormField& g, Chart new_chart, CoordMap map) {
  const Chart old_chart = g.chart();
  if (old_chart.axes() != new_chart.axes()) throw MetaError("pullback: axis count mismatch");
  const Meta m = g.meta();
  return FormField(new_chart, m, [g, m, map, old_chart, new_chart](const Coords& x) {
    return local_op<Form<Jet>>(x, [&](const Coords& s) {
      const Coords y = map(s);
      const auto v = g(y);
      Mat<Jet> jac(m.n);
      for (int a = 0; a < m.n; ++a)
        for (int b = 0; b < m.n; ++b) jac(a, b) = y[old_chart.coord_of_axis(a)].d(new_chart.coord_of_axis(b));
      Form<Jet> r(m);
      for (int q = 0; q < r.size(); ++q)
        for (int p = 0; p < v.size(); ++p) r.c[q] += v.c[p] * minor_det(jac, v.mask(p), r.mask(q));
      return r;
    });
  });
}

}  // namespace rsplit
