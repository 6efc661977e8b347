#include "rsplit/metric.hpp"

#include <cmath>
#include <fmt/format.h>
#include <random>

namespace rsplit {

namespace {

Mat<Jet> spatial(const Mat<Jet>& m) {
  Mat<Jet> r(m.n - 1);
  for (int i = 1; i < m.n; ++i)
    for (int j = 1; j < m.n; ++j) r(i - 1, j - 1) = m(i, j);
  return r;
}

template <class Fn>
Mat<Jet> local_mat(const Coords& x, Fn&& fn) {
  if (is_identity_seed(x)) return fn(x);
  Mat<Jet> r = fn(seed(point_of(x)));
  for (int i = 0; i < r.n; ++i)
    for (int j = 0; j < r.n; ++j) r(i, j) = recompose(r(i, j), x);
  return r;
}

std::string where(const Point& p) { return fmt::format("({}, {}, {}, {})", p[0], p[1], p[2], p[3]); }

template <Kind K>
Field<K> sgn(const Field<K>& a) {
  return a.meta().k % 2 ? -a : a;
}

// c₀^power · a, with the physical dimension of c₀ accounted for.
template <Kind K>
Field<K> cpow(double c0, int power, const Field<K>& a) {
  Meta m = a.meta();
  m.pd = m.pd * dim::Velocity.pow(power);
  const double f = std::pow(c0, power);
  return Field<K>(a.chart(), m, [a, f, m](const Coords& x) {
    auto v = a(x);
    v *= Jet(f);
    v.m = m;
    return v;
  });
}

SymField cpow(double c0, int power, const SymField& a) {
  const double f = std::pow(c0, power);
  return SymField(a.chart(), [a, f](const Coords& x) { return Jet(f) * a(x); }, a.pd() * dim::Velocity.pow(power),
                  a.lie());
}

std::optional<FormField> opt_add(std::optional<FormField> a, const std::optional<FormField>& b) {
  if (!b) return a;
  if (!a) return b;
  return *a + *b;
}

}  // namespace

// ---- SymField -------------------------------------------------------------------

void SymField::require_lorentzian(std::span<const Point> pts) const {
  for (const auto& p : pts) {
    const Mat<double> g = value(p);
    if (!(g(0, 0) > 0)) throw MetricError("metric: g00 must be positive at " + where(p));
    Mat<double> s(g.n - 1);
    for (int i = 1; i < g.n; ++i)
      for (int j = 1; j < g.n; ++j) s(i - 1, j - 1) = -g(i, j);
    for (int k = 1; k <= s.n; ++k) {
      const int mask = (1 << k) - 1;
      if (!(minor_det(s, mask, mask) > 0))
        throw MetricError("metric: spatial block not negative definite at " + where(p));
    }
    if (!nondegenerate_at(*this, p)) throw MetricError("metric: degenerate at " + where(p));
  }
}

void SymField::require_riemannian(std::span<const Point> pts) const {
  for (const auto& p : pts) {
    const Mat<double> h = value(p);
    for (int k = 1; k <= h.n; ++k) {
      const int mask = (1 << k) - 1;
      if (!(minor_det(h, mask, mask) > 0)) throw MetricError("metric: not positive definite at " + where(p));
    }
  }
}

double max_abs(const Mat<double>& m) {
  double r = 0;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

bool nondegenerate_at(const SymField& g, const Point& p) {
  const Mat<double> m = g.value(p);
  const double scale = std::pow(max_abs(m), m.n);
  return std::abs(det(m)) > kDegenerateTol * scale;
}

SymField operator+(const SymField& a, const SymField& b) {
  if (!(a.chart() == b.chart()) || !(a.pd() == b.pd()) || !(a.lie() == b.lie()))
    throw MetaError("SymField add: incompatible operands");
  return SymField(a.chart(), [a, b](const Coords& x) {
    Mat<Jet> r = a(x), s = b(x);
    for (int i = 0; i < r.n; ++i)
      for (int j = 0; j < r.n; ++j) r(i, j) += s(i, j);
    return r;
  }, a.pd(), a.lie());
}

SymField operator*(double s, const SymField& a) {
  return SymField(a.chart(), [a, s](const Coords& x) { return Jet(s) * a(x); }, a.pd(), a.lie());
}

SymField operator-(const SymField& a, const SymField& b) { return a + (-1.0) * b; }

SymField mul(const FormField& f, const SymField& a) {
  if (f.meta().k != 0) throw MetaError("mul: multiplier must be a 0-form");
  return SymField(a.chart(), [f, a](const Coords& x) { return f(x).c[0] * a(x); }, f.meta().pd * a.pd(),
                  LieValue::combine(f.meta().lie, a.lie()));
}

SymField inverse(const SymField& g) {
  return SymField(g.chart(), [g](const Coords& x) { return inverse(g(x)); }, g.pd().inv(), g.lie());
}

FormField riesz(const SymField& g, const VecField& v) {
  if (!(g.chart() == v.chart())) throw MetaError("riesz: chart mismatch");
  const Dimension gd = g.pd();
  const Meta m = lower(Mat<double>::identity(g.n()), MultiVec<double>(v.meta()), gd).m;
  return FormField(v.chart(), m, [g, v, gd](const Coords& x) { return lower(g(x), v(x), gd); });
}

VecField riesz_inv(const SymField& g, const FormField& f) {
  if (!(g.chart() == f.chart())) throw MetaError("riesz_inv: chart mismatch");
  const Dimension gd = g.pd();
  const Meta m = raise(Mat<double>::identity(g.n()), Form<double>(f.meta()), gd).m;
  return VecField(f.chart(), m, [g, f, gd](const Coords& x) { return raise(inverse(g(x)), f(x), gd); });
}

FormField volume_form(const SymField& g) {
  const Meta m = volume_form(Mat<double>::identity(g.n())).m;
  return FormField(g.chart(), m, [g](const Coords& x) {
    const Mat<Jet> gx = g(x);
    if (std::abs(det(gx).value()) < 1e-300) throw MetricError("volume_form: singular metric");
    return volume_form(gx);
  });
}

FormField hodge(const SymField& g, const FormField& f) {
  if (!(g.chart() == f.chart())) throw MetaError("hodge: chart mismatch");
  const auto I = Mat<double>::identity(g.n());
  const Meta m = hodge(I, I, Form<double>(f.meta())).m;
  return FormField(f.chart(), m, [g, f](const Coords& x) {
    const Mat<Jet> gx = g(x);
    if (std::abs(det(gx).value()) < 1e-300) throw MetricError("hodge: singular metric");
    return hodge(gx, inverse(gx), f(x));
  });
}

SymField lie_derivative(const VecField& v, const SymField& T) {
  if (v.meta().k != 1) throw MetaError("lie_derivative: 1-vector required");
  if (!(v.chart() == T.chart())) throw MetaError("lie_derivative: chart mismatch");
  const Chart chart = T.chart();
  return SymField(chart, [v, T, chart](const Coords& x) {
    return local_mat(x, [&](const Coords& s) {
      const auto vv = v(s);
      const Mat<Jet> t = T(s);
      const int n = t.n;
      std::array<Jet, kMaxAxes> c;
      for (int a = 0; a < n; ++a) c[a] = vv.at_mask(1 << a);
      Mat<Jet> r(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Jet acc(0.0);
          for (int e = 0; e < n; ++e) {
            acc += c[e] * t(a, b).d(chart.coord_of_axis(e));
            acc += t(e, b) * c[e].d(chart.coord_of_axis(a));
            acc += t(a, e) * c[e].d(chart.coord_of_axis(b));
          }
          r(a, b) = acc;
        }
      return r;
    });
  }, v.meta().pd * T.pd(), LieValue::combine(v.meta().lie, T.lie()));
}

SymField group_derivative(const SymField& T, Group g) {
  if (T.lie().down[int(g)] >= 1)
    return SymField(T.chart(), [T](const Coords& x) { return Mat<Jet>(T(x).n); }, T.pd(), T.lie());
  return SymField(T.chart(), [T](const Coords& x) {
    return local_mat(x, [&](const Coords& s) {
      Mat<Jet> t = T(s);
      for (int i = 0; i < t.n; ++i)
        for (int j = 0; j < t.n; ++j) t(i, j) = t(i, j).d(0);
      return t;
    });
  }, T.pd(), T.lie().with_down(g));
}

FormField trace(const SymField& h, const SymField& lam) {
  if (!(h.chart() == lam.chart())) throw MetaError("trace: chart mismatch");
  return scalar_field(h.chart(), [h, lam](const Coords& x) { return trace(inverse(h(x)) * lam(x)); },
                      lam.pd() / h.pd(), lam.lie());
}

// ---- Observer -------------------------------------------------------------------

Observer::Observer(SplittingStructure s, MetricField g, double c0) : s_(std::move(s)), g_(std::move(g)), c0_(c0) {
  if (!(g_.chart() == s_.bundle())) throw MetaError("Observer: metric must live on the bundle chart");
  if (!(c0_ > 0)) throw std::invalid_argument("Observer: c0 must be positive");
}

Mat<Jet> Observer::frame_metric(const Coords& x) const {
  const Mat<Jet> g = g_(x);
  const auto G = s_.gamma()(x);
  Mat<Jet> E = Mat<Jet>::identity(g.n);
  for (int i = 1; i < g.n; ++i) E(0, i) = -G.at_mask(1 << (i - 1));
  return transpose(E) * g * E;
}

SymField Observer::sigma_star(const SymField& T) const {
  if (!(T.chart() == s_.bundle())) throw MetaError("sigma_star: bundle tensor required");
  const FormField G = s_.gamma();
  return SymField(s_.base(), [T, G](const Coords& x) {
    const Mat<Jet> t = T(x);
    const auto gv = G(x);
    Mat<Jet> E = Mat<Jet>::identity(t.n);
    for (int i = 1; i < t.n; ++i) E(0, i) = -gv.at_mask(1 << (i - 1));
    return spatial(transpose(E) * t * E);
  }, T.pd(), T.lie());
}

SymField Observer::h_sigma() const { return -1.0 * sigma_star(g_); }

SymField Observer::h_pi() const {
  const MetricField g = g_;
  return SymField(s_.base(), [g](const Coords& x) {
    return inverse(Jet(-1.0) * spatial(inverse(g(x))));
  }, g_.pd(), {});
}

FormField Observer::lapse_field(int which) const {
  static const char* names[] = {"N", "N^-1", "N^dag", "N^-dag", "xi"};
  const LieValue lies[] = {LieValue::coalg(s_.group()), LieValue::alg(s_.group()), LieValue::coalg(s_.group()),
                           LieValue::alg(s_.group()), LieValue::scalar()};
  const Dimension pds[] = {dim::L, dim::L.inv(), dim::L, dim::L.inv(), dim::One};
  const MetricField g = g_;
  const FormField G = s_.gamma();
  const char* name = names[which];
  return scalar_field(s_.base(), [g, G, which, name](const Coords& x) {
    const Mat<Jet> gx = g(x);
    const Jet gww = gx(0, 0);
    Jet oo(0.0);
    if (which >= 2) {
      const Mat<Jet> gi = inverse(gx);
      const auto gv = G(x);
      std::array<Jet, kMaxAxes> om;
      om[0] = Jet(1.0);
      for (int i = 1; i < gx.n; ++i) om[i] = gv.at_mask(1 << (i - 1));
      for (int a = 0; a < gx.n; ++a)
        for (int b = 0; b < gx.n; ++b) oo += om[a] * gi(a, b) * om[b];
    }
    if (!(gww.value() > 0)) throw MetricError(fmt::format("{}: w is not time-like at {}", name, where(point_of(x))));
    if (which >= 2 && !(oo.value() > 0))
      throw MetricError(fmt::format("{}: omega is not time-like at {}", name, where(point_of(x))));
    switch (which) {
      case 0: return sqrt(gww);
      case 1: return Jet(1.0) / sqrt(gww);
      case 2: return Jet(1.0) / sqrt(oo);
      case 3: return sqrt(oo);
      default: return sqrt(gww * oo);
    }
  }, pds[which], lies[which]);
}

FormField Observer::N() const { return lapse_field(0); }
FormField Observer::N_inv() const { return lapse_field(1); }
FormField Observer::N_dag() const { return lapse_field(2); }
FormField Observer::N_inv_dag() const { return lapse_field(3); }
FormField Observer::xi() const { return lapse_field(4); }

VecField Observer::w_dag() const {
  Meta m;
  m.n = ncoords();
  m.k = 1;
  m.lie = LieValue::coalg(s_.group());
  const MetricField g = g_;
  const FormField G = s_.gamma();
  return VecField(s_.bundle(), m, [g, G, m](const Coords& x) {
    const Mat<Jet> gi = inverse(g(x));
    const auto gv = G(x);
    std::array<Jet, kMaxAxes> om;
    om[0] = Jet(1.0);
    for (int i = 1; i < m.n; ++i) om[i] = gv.at_mask(1 << (i - 1));
    MultiVec<Jet> r(m);
    Jet oo(0.0);
    for (int a = 0; a < m.n; ++a)
      for (int b = 0; b < m.n; ++b) oo += om[a] * gi(a, b) * om[b];
    for (int a = 0; a < m.n; ++a) {
      Jet acc(0.0);
      for (int b = 0; b < m.n; ++b) acc += gi(a, b) * om[b];
      r.at_mask(1 << a) = acc / oo;
    }
    return r;
  });
}

FormField Observer::omega_dag() const {
  Meta m;
  m.n = ncoords();
  m.k = 1;
  m.lie = LieValue::alg(s_.group());
  const MetricField g = g_;
  return FormField(s_.bundle(), m, [g, m](const Coords& x) {
    const Mat<Jet> gx = g(x);
    Form<Jet> r(m);
    for (int a = 0; a < m.n; ++a) r.at_mask(1 << a) = gx(a, 0) / gx(0, 0);
    return r;
  });
}

VecField Observer::shift() const { return -s_.pi_push(w_dag()); }

FormField Observer::shift_form() const { return -s_.sigma_star(omega_dag()); }

bool Observer::is_regular(std::span<const Point> pts, double tol) const {
  const FormField nu = shift_form();
  for (const auto& p : pts)
    if (max_abs(nu.value(p)) > tol) return false;
  return true;
}

void Observer::require_regular_at(const Coords& x) const {
  const Mat<Jet> gh = frame_metric(constant_coords(point_of(x)));
  for (int i = 1; i < gh.n; ++i) {
    const double r = std::abs(gh(0, i).value()) / std::sqrt(std::abs(gh(0, 0).value() * gh(i, i).value()));
    if (r > 1e-9) throw MetricError("regular metric splitting used at nonregular point " + where(point_of(x)));
  }
}

FormPair Observer::regular_only(FormPair p) const {
  auto guard = [this](const FormField& f) {
    const Observer self = *this;
    return FormField(f.chart(), f.meta(), [self, f](const Coords& x) {
      self.require_regular_at(x);
      return f(x);
    });
  };
  FormPair r{guard(p.first), std::nullopt};
  if (p.second) r.second = guard(*p.second);
  return r;
}

VecPair Observer::regular_only(VecPair p) const {
  auto guard = [this](const VecField& f) {
    const Observer self = *this;
    return VecField(f.chart(), f.meta(), [self, f](const Coords& x) {
      self.require_regular_at(x);
      return f(x);
    });
  };
  VecPair r{guard(p.first), std::nullopt};
  if (p.second) r.second = guard(*p.second);
  return r;
}

// ---- direct routes ----

FormPair Observer::riesz_direct(const VecPair& v) const {
  return s_.split_form(riesz(g_, s_.unsplit_vector(v)));
}

VecPair Observer::riesz_inv_direct(const FormPair& a) const {
  return s_.split_vector(riesz_inv(g_, s_.unsplit_form(a)));
}

FormPair Observer::hodge_direct(const FormPair& a) const { return s_.split_form(hodge(g_, s_.unsplit_form(a))); }

// ---- matrix routes ----

namespace {

// Block pieces shared by the regular and nonregular formulas.
struct Blocks {
  FormField a;
  std::optional<FormField> b;
};

Blocks riesz_blocks(const SymField& h, const FormField& lapse, const VecPair& v) {
  Blocks r{riesz(h, sgn(v.first)), std::nullopt};
  if (v.second) r.b = mul(lapse, mul(lapse, riesz(h, sgn(*v.second))));
  return r;
}

// *_h on a pair: (L⁻¹ *(n β̃), L *α) with L the given lapse and its inverse.
Blocks hodge_blocks(const SymField& h, const FormField& lapse, const FormField& lapse_inv, const FormPair& p) {
  const FormField& al = p.first;
  const int n = al.meta().n;
  std::optional<FormField> b;
  if (al.meta().k <= n) b = mul(lapse, hodge(h, al));
  if (p.second) return {mul(lapse_inv, hodge(h, sgn(*p.second))), b};
  Meta m = al.meta();
  m.k = n + 1;
  m.twist_x = !m.twist_x;
  m.pd = m.pd * dim::L.pow(n + 1);
  return {zero_field<Kind::Form>(al.chart(), m), b};
}

FormField xi_pow(const FormField& xi, double p) {
  return scalar_field(xi.chart(), [xi, p](const Coords& x) { return pow(xi(x).c[0], p); });
}

// [[Id, −ε_ν], [ι_N, s Id − ι_N∘ε_ν]] applied to (a, b).
FormPair apply_M(const FormField& nu, const VecField& Nv, const FormField& s, const Blocks& x) {
  if (!x.b) return {x.a, std::nullopt};
  const FormField nb = wedge(nu, *x.b);
  FormPair r{x.a - nb, mul(s, *x.b)};
  if (nb.meta().k >= 1) r.second = *r.second - contract(Nv, nb);
  if (x.a.meta().k >= 1) r.second = contract(Nv, x.a) + *r.second;
  return r;
}

// [[s Id − ε_ν∘ι_N, −ε_ν], [ι_N, Id]] applied to (a, b).
FormPair apply_Mp(const FormField& nu, const VecField& Nv, const FormField& s, const Blocks& x) {
  FormField first = mul(s, x.a);
  if (x.a.meta().k >= 1) first = first - wedge(nu, contract(Nv, x.a));
  if (!x.b) return {first, std::nullopt};
  FormPair r{first - wedge(nu, *x.b), *x.b};
  if (x.a.meta().k >= 1) r.second = contract(Nv, x.a) + *r.second;
  return r;
}

FormPair scale_pair(const FormField& s, const FormPair& p) {
  FormPair r{mul(s, p.first), std::nullopt};
  if (p.second) r.second = mul(s, *p.second);
  return r;
}

}  // namespace

FormPair Observer::split_riesz_regular(const VecPair& v) const {
  const Blocks b = riesz_blocks(h_sigma(), N(), v);
  return regular_only(FormPair{b.a, b.b});
}

VecPair Observer::split_riesz_inv_regular(const FormPair& a) const {
  const SymField h = h_sigma();
  VecPair r{riesz_inv(h, sgn(a.first)), std::nullopt};
  if (a.second) r.second = mul(N_inv(), mul(N_inv(), riesz_inv(h, sgn(*a.second))));
  return regular_only(r);
}

FormPair Observer::split_hodge_regular(const FormPair& a) const {
  const Blocks b = hodge_blocks(h_sigma(), N(), N_inv(), a);
  return regular_only(FormPair{b.a, b.b});
}

FormPair Observer::split_riesz_nonregular(const VecPair& v, Basis basis) const {
  const FormField nu = shift_form();
  const VecField Nv = shift();
  if (basis == Basis::Sigma) return apply_M(nu, Nv, xi_pow(xi(), -2), riesz_blocks(h_sigma(), N(), v));
  const FormField x2 = xi_pow(xi(), 2);
  return scale_pair(x2, apply_Mp(nu, Nv, xi_pow(xi(), -2), riesz_blocks(h_pi(), N_dag(), v)));
}

VecPair Observer::split_riesz_inv_nonregular(const FormPair& a, Basis basis) const {
  const FormField nu = shift_form();
  const VecField Nv = shift();
  const FormField& al = a.first;
  FormField p = al;
  std::optional<FormField> q;
  if (basis == Basis::Sigma) {
    // ξ²[[ξ⁻² − ε_ν ι_N, ε_ν], [−ι_N, Id]]
    const FormField x2 = xi_pow(xi(), 2);
    if (al.meta().k >= 1) p = p - mul(x2, wedge(nu, contract(Nv, al)));
    if (a.second) {
      p = p + mul(x2, wedge(nu, *a.second));
      q = mul(x2, *a.second);
      if (al.meta().k >= 1) q = *q - mul(x2, contract(Nv, al));
    }
  } else {
    // [[Id, ε_ν], [−ι_N, ξ⁻² − ι_N ε_ν]]
    if (a.second) {
      const FormField nb = wedge(nu, *a.second);
      p = p + nb;
      q = mul(xi_pow(xi(), -2), *a.second);
      if (nb.meta().k >= 1) q = *q - contract(Nv, nb);
      if (al.meta().k >= 1) q = *q - contract(Nv, al);
    }
  }
  const SymField h = basis == Basis::Sigma ? h_sigma() : h_pi();
  const FormField li = basis == Basis::Sigma ? N_inv() : N_inv_dag();
  VecPair r{riesz_inv(h, sgn(p)), std::nullopt};
  if (q) r.second = mul(li, mul(li, riesz_inv(h, sgn(*q))));
  return r;
}

FormPair Observer::split_hodge_nonregular(const FormPair& a, Basis basis) const {
  const FormField nu = shift_form();
  const VecField Nv = shift();
  const FormField x1 = xi();
  if (basis == Basis::Sigma)
    return scale_pair(x1, apply_M(nu, Nv, xi_pow(x1, -2), hodge_blocks(h_sigma(), N(), N_inv(), a)));
  return scale_pair(x1, apply_Mp(nu, Nv, xi_pow(x1, -2), hodge_blocks(h_pi(), N_dag(), N_inv_dag(), a)));
}

// ---- four-velocity and time derivative ----

VecField Observer::u() const { return cpow(c0_, 1, mul(s_.pi_star(N_inv()), s_.w())); }

FormField Observer::mu() const { return riesz(g_, u()); }

FormField Observer::d_tau(const FormField& a) const { return cpow(c0_, 1, mul(N_inv(), s_.dG(a))); }

FormField Observer::d_tau_lie(const FormField& a) const {
  return s_.sigma_star(lie_derivative(u(), s_.pi_star(a)));
}

SymField Observer::d_tau(const SymField& T) const { return cpow(c0_, 1, mul(N_inv(), group_derivative(T, s_.group()))); }

SymField Observer::lie_w_g() const { return lie_derivative(s_.w(), g_); }

// ---- proxies ----

FormPair Observer::proxy_forms(const FormPair& a) const {
  FormPair r{a.first, std::nullopt};
  if (a.second) r.second = cpow(c0_, 1, mul(N_inv(), *a.second));
  return r;
}

FormPair Observer::unproxy_forms(const FormPair& a) const {
  FormPair r{a.first, std::nullopt};
  if (a.second) r.second = cpow(c0_, -1, mul(N(), *a.second));
  return r;
}

VecPair Observer::proxy_vectors(const VecPair& v) const {
  VecPair r{v.first, std::nullopt};
  if (v.second) r.second = cpow(c0_, -1, mul(N(), *v.second));
  return r;
}

VecPair Observer::unproxy_vectors(const VecPair& v) const {
  VecPair r{v.first, std::nullopt};
  if (v.second) r.second = cpow(c0_, 1, mul(N_inv(), *v.second));
  return r;
}

FormField Observer::delta_bar() const {
  const FormField n = N(), ni = N_inv();
  return cpow(c0_, 2, mul(ni, mul(n, s_.chi())) - mul(ni, s_.D(n)));
}

FormField Observer::eta2_bar() const { return cpow(c0_, 1, mul(N(), s_.Omega())); }

FormPair Observer::proxy_split_d(const FormPair& a) const {
  const FormField& al = a.first;
  FormPair r{s_.D(al), d_tau(al)};
  if (a.second) {
    const FormField& be = *a.second;
    r.first = r.first + cpow(c0_, -2, wedge(eta2_bar(), be));
    r.second = *r.second + cpow(c0_, -2, wedge(delta_bar(), be)) - s_.D(be);
  }
  return r;
}

FormPair Observer::proxy_split_d_direct(const FormPair& a) const {
  return proxy_forms(s_.split_d_direct(unproxy_forms(a)));
}

FormPair Observer::proxy_contract(const VecPair& v, const FormPair& a) const {
  const VecField& k = v.first;
  FormPair r{contract(k, a.first), std::nullopt};
  if (v.second && a.second) r.first = r.first + contract(*v.second, *a.second);
  if (a.second && a.first.meta().k > k.meta().k) r.second = contract(sgn(k), *a.second);
  return r;
}

FormPair Observer::proxy_wedge(const FormPair& g, const FormPair& a) const {
  FormPair r{wedge(g.first, a.first), std::nullopt};
  std::optional<FormField> s;
  if (g.second) s = wedge(*g.second, a.first);
  if (a.second) s = opt_add(s, wedge(sgn(g.first), *a.second));
  r.second = s;
  return r;
}

FormPair Observer::proxy_lie(const VecPair& v, const FormPair& a) const {
  if (v.first.meta().k != 1 || !v.second) throw MetaError("proxy_lie: 1-vector required");
  const VecField& k = v.first;
  const FormField l = as_form0(*v.second);
  const FormField& al = a.first;
  FormPair r{s_.L_k(k, al) + mul(l, d_tau(al)), std::nullopt};
  std::optional<FormField> second;
  if (al.meta().k >= 1) second = d_tau(contract(k, al)) - contract(k, d_tau(al));
  if (a.second) {
    const FormField& be = *a.second;
    r.first = r.first + wedge(s_.D(l), be) +
              cpow(c0_, -2, mul(l, wedge(delta_bar(), be)) + wedge(contract(k, eta2_bar()), be));
    FormField t = s_.L_k(k, be) + d_tau(mul(l, be)) - cpow(c0_, -2, wedge(contract(k, delta_bar()), be));
    second = opt_add(second, t);
  }
  r.second = second;
  return r;
}

FormPair Observer::proxy_riesz_regular(const VecPair& v) const {
  const SymField h = h_sigma();
  FormPair r{riesz(h, sgn(v.first)), std::nullopt};
  if (v.second) r.second = cpow(c0_, 2, riesz(h, sgn(*v.second)));
  return regular_only(r);
}

FormPair Observer::proxy_hodge_regular(const FormPair& a) const {
  const FormField one = scalar_field(s_.base(), [](const Coords&) { return Jet(1.0); });
  const Blocks b = hodge_blocks(h_sigma(), cpow(c0_, 1, one), cpow(c0_, -1, one), a);
  return regular_only(FormPair{b.a, b.b});
}

// Proxy shift fields: v̄ = c₀N⁻¹N⃗ (times ξ² for the Π version) and υ = c₀⁻¹Nν.
FormPair Observer::proxy_riesz_nonregular(const VecPair& v, Basis basis) const {
  const FormField ups = cpow(c0_, -1, mul(N(), shift_form()));
  VecField vb = cpow(c0_, 1, mul(N_inv(), shift()));
  const SymField h = basis == Basis::Sigma ? h_sigma() : h_pi();
  Blocks b{riesz(h, sgn(v.first)), std::nullopt};
  if (v.second) b.b = cpow(c0_, 2, riesz(h, sgn(*v.second)));
  if (basis == Basis::Sigma) return apply_M(ups, vb, xi_pow(xi(), -2), b);
  vb = mul(xi_pow(xi(), 2), vb);
  const FormField one = scalar_field(s_.base(), [](const Coords&) { return Jet(1.0); });
  return apply_Mp(ups, vb, one, b);
}

VecPair Observer::proxy_riesz_inv_nonregular(const FormPair& a, Basis basis) const {
  const FormField ups = cpow(c0_, -1, mul(N(), shift_form()));
  VecField vb = cpow(c0_, 1, mul(N_inv(), shift()));
  const FormField& al = a.first;
  FormField p = al;
  std::optional<FormField> q;
  if (basis == Basis::Sigma) {
    const FormField x2 = xi_pow(xi(), 2);
    if (al.meta().k >= 1) p = p - mul(x2, wedge(ups, contract(vb, al)));
    if (a.second) {
      p = p + mul(x2, wedge(ups, *a.second));
      q = mul(x2, *a.second);
      if (al.meta().k >= 1) q = *q - mul(x2, contract(vb, al));
    }
  } else {
    vb = mul(xi_pow(xi(), 2), vb);
    if (a.second) {
      const FormField nb = wedge(ups, *a.second);
      p = p + nb;
      q = *a.second;
      if (nb.meta().k >= 1) q = *q - contract(vb, nb);
      if (al.meta().k >= 1) q = *q - contract(vb, al);
    }
  }
  const SymField h = basis == Basis::Sigma ? h_sigma() : h_pi();
  VecPair r{riesz_inv(h, sgn(p)), std::nullopt};
  if (q) r.second = cpow(c0_, -2, riesz_inv(h, sgn(*q)));
  return r;
}

FormPair Observer::proxy_hodge_nonregular(const FormPair& a, Basis basis) const {
  const FormField ups = cpow(c0_, -1, mul(N(), shift_form()));
  VecField vb = cpow(c0_, 1, mul(N_inv(), shift()));
  const FormField one = scalar_field(s_.base(), [](const Coords&) { return Jet(1.0); });
  const SymField h = basis == Basis::Sigma ? h_sigma() : h_pi();
  const Blocks b = hodge_blocks(h, cpow(c0_, 1, one), cpow(c0_, -1, one), a);
  if (basis == Basis::Sigma) return scale_pair(xi(), apply_M(ups, vb, xi_pow(xi(), -2), b));
  vb = mul(xi_pow(xi(), 2), vb);
  return apply_Mp(ups, vb, one, b);
}

// ---- kinematics ----

Kinematics kinematics(const Observer& o) {
  const auto& s = o.splitting();
  const double c0 = o.c0();
  const FormField mu = o.mu();
  const VecField u = o.u();
  Kinematics k;
  k.delta = cpow(c0, -1, mul(o.N(), s.sigma_star(lie_derivative(u, mu))));
  k.eta = 0.5 * s.sigma_star(exterior_d(mu));
  k.lambda = -0.5 * o.sigma_star(lie_derivative(u, o.metric()));
  const SymField h = o.h_sigma();
  k.lambda_scalar = trace(h, k.lambda);
  const double inv_dim = 1.0 / h.n();
  k.sigma = k.lambda - inv_dim * mul(k.lambda_scalar, h);
  return k;
}

Kinematics kinematics_from_structure(const Observer& o) {
  const auto& s = o.splitting();
  const double c0 = o.c0();
  const FormField N = o.N();
  Kinematics k;
  k.delta = cpow(c0, 1, mul(N, s.chi()) - s.D(N));
  k.eta = 0.5 * cpow(c0, 1, mul(N, s.Omega()));
  const SymField h = o.h_sigma();
  k.lambda = 0.5 * o.d_tau(h);
  k.lambda_scalar = trace(h, k.lambda);
  const double inv_dim = 1.0 / h.n();
  k.sigma = k.lambda - inv_dim * mul(k.lambda_scalar, h);
  return k;
}

MetricFlags classify_metric(const Observer& o, std::span<const Point> pts, double tol) {
  MetricFlags f;
  f.regular = o.is_regular(pts, tol);
  const auto& s = o.splitting();
  const FormField ni = o.N_inv();
  const FormField dni = s.D(ni), gni = s.dG(ni);
  const SymField lwg = o.lie_w_g();
  bool lapse_const = true, killing = true;
  for (const auto& p : pts) {
    if (max_abs(dni.value(p)) > tol || max_abs(gni.value(p)) > tol) lapse_const = false;
    if (max_abs(lwg.value(p)) > tol) killing = false;
  }
  f.metric = f.regular && lapse_const;
  f.standard = f.metric && classify_connection(s, pts, tol).natural;
  f.stationary = killing;
  return f;
}

SplittingStructure orthogonal_splitting(const MetricField& g, Group group) {
  const int nc = g.chart().ncoords;
  Meta m;
  m.n = nc - 1;
  m.k = 1;
  m.lie = LieValue::alg(group);
  FormField G({nc, true}, m, [g, m](const Coords& x) {
    const Mat<Jet> gx = g(x);
    Form<Jet> f(m);
    for (int i = 0; i < m.n; ++i) f.at_mask(1 << i) = gx(0, i + 1) / gx(0, 0);
    return f;
  });
  return SplittingStructure(nc, G, group);
}

MetricField random_metric(int ncoords, std::uint64_t seed, double amp) {
  std::mt19937_64 r(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::array<std::array<std::array<double, 6>, kMaxAxes>, kMaxAxes> c{};
  for (int a = 0; a < kMaxAxes; ++a)
    for (int b = a; b < kMaxAxes; ++b)
      for (auto& v : c[a][b]) v = u(r);
  return MetricField({ncoords, false}, [c, amp, ncoords](const Coords& x) {
    Mat<Jet> g(ncoords);
    for (int a = 0; a < ncoords; ++a)
      for (int b = a; b < ncoords; ++b) {
        const auto& k = c[a][b];
        Jet v = k[0] + k[1] * x[0] + k[2] * sin(x[1] + k[3] * x[2]) + k[4] * x[3] * x[0] + k[5] * cos(x[0] - x[3]) * x[1];
        v = Jet(amp) * v;
        if (a == b) v += Jet(a == 0 ? 1.3 : -1.0);
        g(a, b) = v;
        g(b, a) = v;
      }
    return g;
  });
}

}  // namespace rsplit
