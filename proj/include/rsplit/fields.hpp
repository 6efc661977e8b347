#pragma once

#include <array>
#include <functional>
#include <memory>
#include <utility>

#include "rsplit/exterior.hpp"
#include "rsplit/jet.hpp"
#include "rsplit/linalg.hpp"

namespace rsplit {

using Point = std::array<double, Jet::kVars>;
using Coords = std::array<Jet, Jet::kVars>;

// Coordinates of a chart.  A bundle chart with ncoords coordinates has one axis
// per coordinate; a parametric chart treats coordinate 0 as the fiber parameter
// t and has axes for coordinates 1..ncoords-1.
struct Chart {
  int ncoords = 4;
  bool parametric = false;

  int axes() const { return parametric ? ncoords - 1 : ncoords; }
  int coord_of_axis(int a) const { return parametric ? a + 1 : a; }
  bool operator==(const Chart&) const = default;
};

Coords seed(const Point& p);
Coords constant_coords(const Point& p);
Point point_of(const Coords& x);
bool is_identity_seed(const Coords& x);

// Re-expand a jet computed at the identity seed around point_of(x) in terms of x.
Jet recompose(const Jet& j, const Coords& x);

template <Kind K>
class Field {
 public:
  using Value = Alt<Jet, K>;
  using Fn = std::function<Value(const Coords&)>;

  Field() = default;
  Field(Chart chart, Meta meta, Fn fn)
      : chart_(chart), meta_(meta), fn_(std::make_shared<const Fn>(std::move(fn))) {
    if (meta_.n != chart_.axes()) throw MetaError("Field: axis count does not match chart");
  }

  const Chart& chart() const { return chart_; }
  const Meta& meta() const { return meta_; }
  bool valid() const { return static_cast<bool>(fn_); }

  Value operator()(const Coords& x) const { return (*fn_)(x); }
  Value jet_at(const Point& p) const { return (*this)(seed(p)); }
  Alt<double, K> value(const Point& p) const { return values((*this)(constant_coords(p))); }

 private:
  Chart chart_{};
  Meta meta_{};
  std::shared_ptr<const Fn> fn_;
};

using FormField = Field<Kind::Form>;
using VecField = Field<Kind::Vec>;

// Scalar function of chart coordinates (no metadata).
using ScalarFn = std::function<Jet(const Coords&)>;

// Evaluate fn at the identity seed around point_of(x), then re-express in x.
template <class V, class Fn>
V local_op(const Coords& x, Fn&& fn) {
  if (is_identity_seed(x)) return fn(x);
  V r = fn(seed(point_of(x)));
  for (int p = 0; p < r.size(); ++p) r.c[p] = recompose(r.c[p], x);
  return r;
}

// ---- construction --------------------------------------------------------------

template <Kind K>
Field<K> constant_field(Chart chart, const Alt<double, K>& a) {
  return Field<K>(chart, a.m, [a](const Coords&) { return to_jet(a); });
}

template <Kind K>
Field<K> zero_field(Chart chart, Meta meta) {
  return Field<K>(chart, meta, [meta](const Coords&) { return Alt<Jet, K>(meta); });
}

// A 0-form from a scalar function.
FormField scalar_field(Chart chart, ScalarFn f, Dimension pd = {}, LieValue lie = {});

// ---- pointwise algebra ----------------------------------------------------------

template <Kind K>
Field<K> operator+(const Field<K>& a, const Field<K>& b) {
  require_compatible(a.meta(), b.meta(), "field add");
  return Field<K>(a.chart(), a.meta(), [a, b](const Coords& x) { return a(x) + b(x); });
}
template <Kind K>
Field<K> operator-(const Field<K>& a, const Field<K>& b) {
  require_compatible(a.meta(), b.meta(), "field sub");
  return Field<K>(a.chart(), a.meta(), [a, b](const Coords& x) { return a(x) - b(x); });
}
template <Kind K>
Field<K> operator-(const Field<K>& a) {
  return Field<K>(a.chart(), a.meta(), [a](const Coords& x) { return -a(x); });
}
template <Kind K>
Field<K> operator*(double s, const Field<K>& a) {
  return Field<K>(a.chart(), a.meta(), [a, s](const Coords& x) { return a(x) * Jet(s); });
}

// Multiply by a 0-form field f (tensor semantics for the Lie values).
template <Kind K>
Field<K> mul(const FormField& f, const Field<K>& a) {
  if (f.meta().k != 0) throw MetaError("mul: multiplier must be a 0-form");
  Meta m = a.meta();
  m.lie = LieValue::combine(f.meta().lie, a.meta().lie);
  m.pd = f.meta().pd * a.meta().pd;
  m.twist_x = f.meta().twist_x != a.meta().twist_x;
  m.twist_g = f.meta().twist_g != a.meta().twist_g;
  return Field<K>(a.chart(), m, [f, a, m](const Coords& x) {
    auto v = a(x);
    const Jet s = f(x).c[0];
    v *= s;
    v.m = m;
    return v;
  });
}

FormField wedge(const FormField& a, const FormField& b);
VecField wedge(const VecField& a, const VecField& b);
FormField contract(const VecField& v, const FormField& g);
VecField contract(const FormField& g, const VecField& v);
FormField sign_n(const FormField& a);
FormField rebase_lie(const FormField& a, double lambda);
FormField retag(const FormField& a, LieValue lie, Dimension pd);

// ---- derivatives ------------------------------------------------------------------

// Exterior derivative over the chart axes (dα = dx^i ∧ ∂_i α).  Top-degree input
// is an error unless allow_top is set, in which case the zero space results.
FormField exterior_d(const FormField& g, bool allow_top = false);

// Group derivative ∂_t ⊗ dt on parametric fields; zero on dual-valued input.
FormField group_derivative(const FormField& a, Group g = Group::G);

// Lie derivative of a form along a 1-vector field (Cartan formula).
FormField lie_derivative(const VecField& v, const FormField& g);

// Partial derivative of every component with respect to a coordinate.
template <Kind K>
Field<K> partial(const Field<K>& a, int coord) {
  return Field<K>(a.chart(), a.meta(), [a, coord](const Coords& x) {
    return local_op<Alt<Jet, K>>(x, [&](const Coords& s) {
      auto v = a(s);
      for (int p = 0; p < v.size(); ++p) v.c[p] = v.c[p].d(coord);
      return v;
    });
  });
}

// Integral over t ∈ [t0, t1] of a dual-valued parametric field at fixed base
// point, using the orientation of e (reversed intervals flip the sign).  When
// the integrand's Lie basis is λ·∂_t instead of ∂_t, pass lie_scale = λ.
Form<double> integrate_G(const FormField& a, double t0, double t1, const Point& x, double abs_tol = 1e-10,
                         double lie_scale = 1.0);

// Adaptive Gauss–Legendre quadrature on [a, b].
double integrate_1d(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-10);

// Pullback of a bundle form field along a coordinate map (new coords -> old coords).
using CoordMap = std::function<Coords(const Coords&)>;
FormField pullback(const FormField& g, Chart new_chart, CoordMap map);

}  // namespace rsplit
