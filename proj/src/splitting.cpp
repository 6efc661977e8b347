#include "rsplit/splitting.hpp"

#include <cmath>
#include <stdexcept>

namespace rsplit {

namespace {

// Γ as plain substitution coefficients (dx⁰ ↦ −Γᵢdxⁱ is a scalar map).
Form<Jet> plain(Form<Jet> g) {
  g.m.lie = {};
  g.m.pd = {};
  return g;
}

MultiVec<Jet> axis0_vector(int n) { return basis<Jet, Kind::Vec>(n, 1); }

}  // namespace

SplittingStructure::SplittingStructure(int ncoords, FormField christoffel, Group group)
    : ncoords_(ncoords), gamma_(std::move(christoffel)), group_(group) {
  const Meta& m = gamma_.meta();
  if (!gamma_.chart().parametric || gamma_.chart().ncoords != ncoords)
    throw MetaError("SplittingStructure: Γ must be a parametric field on the chart");
  if (m.k != 1 || !(m.lie == LieValue::alg(group)) || m.twist_x || m.twist_g || !m.pd.is_one())
    throw MetaError("SplittingStructure: Γ must be an untwisted dimensionless Lie-algebra valued 1-form");
}

SplittingStructure SplittingStructure::natural(int ncoords, Group group) {
  Meta m;
  m.n = ncoords - 1;
  m.k = 1;
  m.lie = LieValue::alg(group);
  return SplittingStructure(ncoords, zero_field<Kind::Form>({ncoords, true}, m), group);
}

VecField SplittingStructure::w() const {
  Meta m;
  m.n = ncoords_;
  m.k = 1;
  m.lie = LieValue::coalg(group_);
  return VecField(bundle(), m, [m](const Coords&) {
    MultiVec<Jet> v(m);
    v.c[0] = Jet(1.0);
    return v;
  });
}

FormField SplittingStructure::omega() const {
  Meta m;
  m.n = ncoords_;
  m.k = 1;
  m.lie = LieValue::alg(group_);
  FormField g = gamma_;
  return FormField(bundle(), m, [m, g](const Coords& x) {
    Form<Jet> f(m);
    f.c[0] = Jet(1.0);
    const auto gv = g(x);
    for (int i = 0; i < gv.size(); ++i) f.c[i + 1] = gv.c[i];
    return f;
  });
}

FormField SplittingStructure::sigma_star(const FormField& g) const {
  if (!(g.chart() == bundle())) throw MetaError("sigma_star: bundle field required");
  Meta m = g.meta();
  m.n = ncoords_ - 1;
  FormField gm = gamma_;
  const int n = ncoords_;
  return FormField(base(), m, [g, gm, n](const Coords& x) {
    const auto v = g(x);
    auto r = drop_axis0(v);
    if (v.m.k >= 1) r -= wedge(plain(gm(x)), drop_axis0(contract(axis0_vector(n), v)));
    return r;
  });
}

FormField SplittingStructure::pi_star(const FormField& a) const {
  if (!(a.chart() == base())) throw MetaError("pi_star: parametric field required");
  Meta m = a.meta();
  m.n = ncoords_;
  return FormField(bundle(), m, [a](const Coords& x) { return lift_axis0(a(x)); });
}

VecField SplittingStructure::sigma_push(const VecField& k) const {
  if (!(k.chart() == base())) throw MetaError("sigma_push: parametric field required");
  Meta m = k.meta();
  m.n = ncoords_;
  FormField gm = gamma_;
  const int n = ncoords_;
  return VecField(bundle(), m, [k, gm, n](const Coords& x) {
    const auto v = k(x);
    auto r = lift_axis0(v);
    if (v.m.k >= 1) r -= wedge(axis0_vector(n), lift_axis0(contract(plain(gm(x)), v)));
    return r;
  });
}

VecField SplittingStructure::pi_push(const VecField& v) const {
  if (!(v.chart() == bundle())) throw MetaError("pi_push: bundle field required");
  Meta m = v.meta();
  m.n = ncoords_ - 1;
  return VecField(base(), m, [v](const Coords& x) { return drop_axis0(v(x)); });
}

FormPair SplittingStructure::split_form(const FormField& g) const {
  FormPair p{sigma_star(g), std::nullopt};
  if (g.meta().k >= 1) {
    // ι_w keeps the Lie factor of w as a tensor factor (no pairing).
    FormField iw = contract(w(), g);
    p.second = sigma_star(retag(iw, g.meta().lie.with_down(group_), iw.meta().pd));
  }
  return p;
}

FormField SplittingStructure::unsplit_form(const FormPair& p) const {
  FormField r = pi_star(p.first);
  if (p.second) r = r + wedge(omega(), pi_star(*p.second));
  return r;
}

VecPair SplittingStructure::split_vector(const VecField& v) const {
  VecPair p{pi_push(v), std::nullopt};
  if (v.meta().k >= 1) {
    VecField iw = contract(omega(), v);
    Meta m = iw.meta();
    m.lie = v.meta().lie.with_up(group_);
    p.second = pi_push(VecField(v.chart(), m, [iw, m](const Coords& x) {
      auto r = iw(x);
      r.m = m;
      return r;
    }));
  }
  return p;
}

VecField SplittingStructure::unsplit_vector(const VecPair& p) const {
  VecField r = sigma_push(p.first);
  if (p.second) r = r + wedge(w(), sigma_push(*p.second));
  return r;
}

VecField SplittingStructure::hor(const VecField& v) const { return contract(omega(), wedge(w(), v)); }

VecField SplittingStructure::ver(const VecField& v) const {
  if (v.meta().k == 0) return zero_field<Kind::Vec>(v.chart(), v.meta());
  return wedge(w(), contract(omega(), v));
}

FormField SplittingStructure::chi() const { return dG(gamma_); }

FormField SplittingStructure::Omega() const { return D(gamma_); }

FormField SplittingStructure::D(const FormField& a) const {
  if (!(a.chart() == base())) throw MetaError("D: parametric field required");
  Meta m = a.meta();
  m.k += 1;
  if (m.k > m.n) return zero_field<Kind::Form>(base(), m);
  FormField gm = gamma_;
  return FormField(base(), m, [a, gm, m](const Coords& x) {
    return local_op<Form<Jet>>(x, [&](const Coords& s) {
      const auto v = a(s);
      const auto G = gm(s);
      Form<Jet> r(m);
      for (int p = 0; p < v.size(); ++p) {
        const int I = v.mask(p);
        const Jet dt = v.c[p].d(0);
        for (int i = 0; i < m.n; ++i) {
          if (I & (1 << i)) continue;
          Jet t = v.c[p].d(i + 1) - G.c[i] * dt;
          if (merge_sign(1 << i, I) > 0)
            r.at_mask(I | (1 << i)) += t;
          else
            r.at_mask(I | (1 << i)) -= t;
        }
      }
      return r;
    });
  });
}

FormPair operator+(const FormPair& a, const FormPair& b) {
  FormPair r{a.first + b.first, std::nullopt};
  if (a.second && b.second) r.second = *a.second + *b.second;
  else if (a.second || b.second) throw MetaError("pair add: mismatched pairs");
  return r;
}

FormPair operator-(const FormPair& a, const FormPair& b) {
  FormPair r{a.first - b.first, std::nullopt};
  if (a.second && b.second) r.second = *a.second - *b.second;
  else if (a.second || b.second) throw MetaError("pair sub: mismatched pairs");
  return r;
}

FormPair SplittingStructure::split_d(const FormPair& p) const {
  FormPair r{D(p.first), dG(p.first)};
  if (p.second) {
    r.first = r.first + wedge(Omega(), *p.second);
    r.second = *r.second + wedge(chi(), *p.second) - D(*p.second);
  }
  return r;
}

FormPair SplittingStructure::split_d_direct(const FormPair& p) const {
  return split_form(exterior_d(unsplit_form(p), true));
}

FormPair SplittingStructure::split_d_factorized(const FormPair& p) const {
  FormField a = p.first;
  if (p.second) a = a + wedge(gamma_, *p.second);
  FormPair r{exterior_d(a, true), dG(a)};
  if (p.second) r.second = *r.second - exterior_d(*p.second, true);
  r.first = r.first - wedge(gamma_, *r.second);
  return r;
}

std::array<std::array<double, 4>, 4> SplittingStructure::anholonomity(const Point& p) const {
  Meta m;
  m.n = ncoords_;
  m.k = 1;
  FormField gm = gamma_;
  FormField eps0(bundle(), m, [m, gm](const Coords& x) {
    Form<Jet> f(m);
    f.c[0] = Jet(1.0);
    const auto g = gm(x);
    for (int i = 0; i < g.size(); ++i) f.c[i + 1] = g.c[i];
    return f;
  });
  const auto de = exterior_d(eps0).value(p);
  const auto G = gm.value(p);
  std::array<MultiVec<double>, 4> frame;
  for (int mu = 0; mu < ncoords_; ++mu) {
    frame[mu] = basis<double, Kind::Vec>(ncoords_, 1 << mu);
    if (mu > 0) frame[mu].c[0] = -G.c[mu - 1];
  }
  std::array<std::array<double, 4>, 4> C{};
  for (int mu = 0; mu < ncoords_; ++mu)
    for (int nu = 0; nu < ncoords_; ++nu) C[mu][nu] = contract(frame[nu], contract(frame[mu], de)).c[0];
  return C;
}

std::pair<FormField, FormField> SplittingStructure::bianchi_residuals() const {
  const FormField Om = Omega(), ch = chi();
  return {dG(Om) - D(ch), D(Om) + wedge(Om, ch)};
}

namespace {
template <Kind K>
Field<K> sign_field(const Field<K>& a) {
  return a.meta().k % 2 ? -a : a;
}

}  // namespace

FormField as_form0(const VecField& l) {
  if (l.meta().k != 0) throw MetaError("as_form0: 0-vector required");
  return FormField(l.chart(), l.meta(), [l](const Coords& x) {
    auto v = l(x);
    Form<Jet> f(v.m);
    f.c[0] = v.c[0];
    return f;
  });
}

FormField SplittingStructure::L_k(const VecField& k, const FormField& a) const {
  FormField r = contract(k, D(a));
  if (a.meta().k >= 1) r = r + D(contract(k, a));
  return r;
}
VecField as_vec0(const FormField& f) {
  if (f.meta().k != 0) throw MetaError("as_vec0: 0-form required");
  return VecField(f.chart(), f.meta(), [f](const Coords& x) {
    auto v = f(x);
    MultiVec<Jet> r(v.m);
    r.c[0] = v.c[0];
    return r;
  });
}

FormPair SplittingStructure::split_contract(const VecPair& v, const FormPair& g) const {
  const VecField& k = v.first;
  FormPair r{contract(k, g.first), std::nullopt};
  if (v.second && g.second) r.first = r.first + contract(*v.second, *g.second);
  if (g.second && g.first.meta().k > k.meta().k) r.second = contract(sign_field(k), *g.second);
  return r;
}

FormPair SplittingStructure::split_wedge(const FormPair& a, const FormPair& g) const {
  FormPair r{wedge(a.first, g.first), std::nullopt};
  std::optional<FormField> s;
  if (a.second) s = wedge(*a.second, g.first);
  if (g.second) {
    FormField t = wedge(sign_field(a.first), *g.second);
    s = s ? *s + t : t;
  }
  r.second = s;
  return r;
}

FormPair SplittingStructure::split_lie(const VecPair& v, const FormPair& g) const {
  if (v.first.meta().k != 1 || !v.second) throw MetaError("split_lie: 1-vector required");
  const VecField& k = v.first;
  const FormField l = as_form0(*v.second);
  const FormField& a = g.first;
  FormPair r{L_k(k, a) + mul(l, dG(a)), std::nullopt};
  // [∂_G, ι_k] α
  std::optional<FormField> second;
  if (a.meta().k >= 1) second = dG(contract(k, a)) - contract(k, dG(a));
  if (g.second) {
    const FormField& b = *g.second;
    r.first = r.first + wedge(D(l), b) + wedge(mul(l, chi()), b) + wedge(contract(k, Omega()), b);
    FormField t = L_k(k, b) + dG(mul(l, b)) - wedge(contract(k, chi()), b);
    second = second ? *second + t : t;
  }
  r.second = second;
  return r;
}

FormPair change_connection(const SplittingStructure& from, const SplittingStructure& to, const FormPair& p) {
  if (!p.second) return p;
  return {p.first + wedge(from.gamma() - to.gamma(), *p.second), p.second};
}

// ---- transitions ------------------------------------------------------------------

Transition::Transition(int ncoords, ScalarFn phi, Group group) : ncoords_(ncoords), phi_(std::move(phi)), group_(group) {}

FormField Transition::dphi_dt() const {
  ScalarFn phi = phi_;
  return scalar_field({ncoords_, true}, [phi](const Coords& x) {
    Meta m;
    m.n = 0;
    return local_op<Form<Jet>>(x, [&](const Coords& s) {
             Form<Jet> f(m);
             f.c[0] = phi(s).d(0);
             return f;
           }).c[0];
  });
}

double Transition::map_time(const Point& xj) const { return phi_(constant_coords(xj)).value(); }

void Transition::require_monotone(std::span<const Point> pts) const {
  const FormField d = dphi_dt();
  for (const auto& p : pts)
    if (!(d.value(p).c[0] > 0)) throw std::domain_error("Transition: ∂ₜφ must be positive at every sample");
}

FormField Transition::pull(const FormField& a) const {
  if (!a.chart().parametric || a.chart().ncoords != ncoords_) throw MetaError("Transition::pull: parametric field required");
  const int e = a.meta().lie.down[int(group_)] - a.meta().lie.up[int(group_)];
  ScalarFn phi = phi_;
  FormField dphi = dphi_dt();
  return FormField(a.chart(), a.meta(), [a, phi, dphi, e](const Coords& x) {
    Coords y = x;
    y[0] = phi(x);
    auto v = a(y);
    if (e != 0) {
      Jet f = dphi(x).c[0];
      Jet fac(1.0);
      for (int i = 0; i < std::abs(e); ++i) fac = fac * f;
      if (e < 0) fac = 1.0 / fac;
      v *= fac;
    }
    return v;
  });
}

FormPair Transition::pull(const FormPair& p) const {
  FormPair r{pull(p.first), std::nullopt};
  if (p.second) r.second = pull(*p.second);
  return r;
}

FormField Transition::affine_form() const {
  Meta m;
  m.n = ncoords_ - 1;
  m.k = 1;
  m.lie = LieValue::alg(group_);
  ScalarFn phi = phi_;
  return FormField({ncoords_, true}, m, [phi, m](const Coords& x) {
    return local_op<Form<Jet>>(x, [&](const Coords& s) {
      const Jet P = phi(s);
      const Jet inv = 1.0 / P.d(0);
      Form<Jet> f(m);
      for (int a = 0; a < m.n; ++a) f.c[a] = -(P.d(a + 1) * inv);
      return f;
    });
  });
}

SplittingStructure Transition::transform(const SplittingStructure& s) const {
  return SplittingStructure(ncoords_, pull(s.gamma()) - affine_form(), group_);
}

SplittingStructure Transition::transform_via_bundle(const SplittingStructure& s) const {
  FormField om = s.omega();
  Meta pm = om.meta();
  pm.lie = {};
  FormField plain_om(s.bundle(), pm, [om, pm](const Coords& x) {
    auto v = om(x);
    v.m = pm;
    return v;
  });
  ScalarFn phi = phi_;
  FormField pulled = pullback(plain_om, s.bundle(), [phi](const Coords& x) {
    Coords y = x;
    y[0] = phi(x);
    return y;
  });
  Meta m;
  m.n = ncoords_ - 1;
  m.k = 1;
  m.lie = LieValue::alg(group_);
  FormField g({ncoords_, true}, m, [pulled, m](const Coords& x) {
    const auto v = pulled(x);
    Form<Jet> f(m);
    const Jet inv = 1.0 / v.c[0];
    for (int a = 0; a < m.n; ++a) f.c[a] = v.c[a + 1] * inv;
    return f;
  });
  return SplittingStructure(ncoords_, g, group_);
}

// ---- classification -----------------------------------------------------------

ClassFlags classify_connection(const SplittingStructure& s, std::span<const Point> pts, double tol) {
  auto vanishes = [&](const FormField& f) {
    for (const auto& p : pts)
      if (max_abs(f.value(p)) > tol) return false;
    return true;
  };
  ClassFlags c;
  c.natural = vanishes(s.gamma());
  c.flat = vanishes(s.Omega());
  c.principal = vanishes(s.chi());
  c.holonomic = true;
  for (const auto& p : pts) {
    const auto C = s.anholonomity(p);
    for (const auto& row : C)
      for (double v : row) c.holonomic = c.holonomic && std::abs(v) <= tol;
  }
  return c;
}

}  // namespace rsplit
