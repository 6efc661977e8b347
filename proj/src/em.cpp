#include "rsplit/em.hpp"

#include <fmt/format.h>

#include <cmath>

#include "rsplit/random_fields.hpp"

namespace rsplit {

namespace {

FormField constant0(Chart c, double v, Dimension pd = {}, LieValue lie = {}) {
  return scalar_field(c, [v](const Coords&) { return Jet(v); }, pd, lie);
}

FormField half(const FormField& a) { return 0.5 * a; }

// ι_ℓ for a 0-vector ℓ
FormField imul(const VecField& l, const FormField& a) { return mul(as_form0(l), a); }

FormField c0_pow(const Observer& o, int power) {
  return constant0(o.splitting().base(), std::pow(o.c0(), power), dim::Velocity.pow(power));
}

Meta form_meta(int n, int k, Dimension pd, bool twisted = false, LieValue lie = {}) {
  Meta m;
  m.n = n;
  m.k = k;
  m.pd = pd;
  m.twist_x = twisted;
  m.lie = lie;
  return m;
}

// Component a_{idx} of a form for an arbitrary index list.
Jet component(const Form<Jet>& a, const std::vector<int>& idx) {
  int sign = 1, mask = 0;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (mask & (1 << idx[i])) return Jet(0.0);
    mask |= 1 << idx[i];
    for (size_t j = i + 1; j < idx.size(); ++j)
      if (idx[i] > idx[j]) sign = -sign;
  }
  return a.at_mask(mask) * Jet(double(sign));
}

void require_killing(const MetricField& g, const VecField& n, std::span<const Point> pts, const char* what) {
  if (!is_killing(g, n, pts)) throw MetricError(fmt::format("{}: vector field is not a Killing field", what));
}

}  // namespace

// ---- fields ---------------------------------------------------------------------

MaxwellFieldSet maxwell_from_potentials(const FormField& A, const FormField& H) {
  return {A, exterior_d(A), H, exterior_d(H)};
}

MaxwellFieldSet random_maxwell(int ncoords, std::uint64_t seed, const MetricField* g, double Z0) {
  const Chart c{ncoords, false};
  const FormField A = random_form_field(c, form_meta(ncoords, 1, dim::Faraday), seed);
  if (g) return maxwell_from_potentials(A, vacuum_excitation(*g, exterior_d(A), Z0));
  return maxwell_from_potentials(A, random_form_field(c, form_meta(ncoords, 2, dim::Charge, true), seed + 7));
}

SplitEmFields split_em(const SplittingStructure& s, const MaxwellFieldSet& f) {
  SplitEmFields r;
  if (f.A) {
    const FormPair a = s.split_form(*f.A);
    r.a = a.first;
    r.phi = -*a.second;
  }
  const FormPair F = s.split_form(f.F), H = s.split_form(f.H), J = s.split_form(f.J);
  r.b = F.first;
  r.e = -*F.second;
  r.d = H.first;
  r.h = *H.second;
  r.rho = J.first;
  r.j = -*J.second;
  return r;
}

MaxwellFieldSet unsplit_em(const SplittingStructure& s, const SplitEmFields& f) {
  MaxwellFieldSet r;
  if (f.a) r.A = s.unsplit_form({*f.a, -*f.phi});
  r.F = s.unsplit_form({f.b, -f.e});
  r.H = s.unsplit_form({f.d, f.h});
  r.J = s.unsplit_form({f.rho, -f.j});
  return r;
}

SplitEmFields proxy_em(const Observer& o, const SplitEmFields& f) {
  SplitEmFields r;
  if (f.a) {
    const FormPair a = o.proxy_forms({*f.a, -*f.phi});
    r.a = a.first;
    r.phi = -*a.second;
  }
  r.b = f.b;
  r.e = -*o.proxy_forms({f.b, -f.e}).second;
  r.d = f.d;
  r.h = *o.proxy_forms({f.d, f.h}).second;
  r.rho = f.rho;
  r.j = -*o.proxy_forms({f.rho, -f.j}).second;
  return r;
}

// ---- residuals --------------------------------------------------------------------

ResidualBuilder& ResidualBuilder::add(const FormField& t) {
  parts_.push_back(t);
  dims_.push_back(t.meta().pd);
  return *this;
}

ResidualBuilder& ResidualBuilder::sub(const FormField& t) { return add(-t); }

Residual ResidualBuilder::build() const {
  if (parts_.empty()) throw std::invalid_argument("ResidualBuilder: no terms");
  if (!homogeneous()) {
    std::string d;
    for (const auto& x : dims_) d += " " + x.str();
    throw DimensionError(fmt::format("{}: summands of unequal dimension:{}", id_, d));
  }
  FormField v = parts_[0];
  for (size_t i = 1; i < parts_.size(); ++i) v = v + parts_[i];
  return {id_, v, dims_};
}

std::vector<Residual> maxwell_residuals(const SplittingStructure& s, const SplitEmFields& f) {
  const FormField W = s.Omega(), X = s.chi();
  std::vector<Residual> r;
  r.push_back(ResidualBuilder("gauss_magnetic").add(s.D(f.b)).sub(wedge(W, f.e)).build());
  r.push_back(ResidualBuilder("faraday").add(s.D(f.e)).add(s.dG(f.b)).sub(wedge(X, f.e)).build());
  r.push_back(ResidualBuilder("gauss_electric").add(s.D(f.d)).sub(f.rho).add(wedge(W, f.h)).build());
  r.push_back(ResidualBuilder("ampere_maxwell").add(s.D(f.h)).sub(f.j).sub(s.dG(f.d)).sub(wedge(X, f.h)).build());
  if (f.a) {
    r.push_back(ResidualBuilder("potential_b").add(s.D(*f.a)).sub(f.b).sub(wedge(W, *f.phi)).build());
    r.push_back(
        ResidualBuilder("potential_e").add(s.D(*f.phi)).add(f.e).add(s.dG(*f.a)).sub(wedge(X, *f.phi)).build());
  }
  r.push_back(ResidualBuilder("continuity").add(s.D(f.j)).add(s.dG(f.rho)).sub(wedge(X, f.j)).build());
  return r;
}

std::vector<Residual> maxwell_residuals_alt(const SplittingStructure& s, const SplitEmFields& f) {
  const FormField G = s.gamma();
  const FormField bs = f.b - wedge(G, f.e);
  const FormField ds = f.d + wedge(G, f.h);
  const FormField rs = f.rho - wedge(G, f.j);
  const Group g = s.group();
  std::vector<Residual> r;
  r.push_back(ResidualBuilder("alt_gauss_magnetic").add(exterior_d(bs)).build());
  r.push_back(ResidualBuilder("alt_faraday").add(exterior_d(f.e)).add(group_derivative(bs, g)).build());
  r.push_back(ResidualBuilder("alt_gauss_electric").add(exterior_d(ds)).sub(rs).build());
  r.push_back(ResidualBuilder("alt_ampere_maxwell").add(exterior_d(f.h)).sub(f.j).sub(group_derivative(ds, g)).build());
  return r;
}

std::vector<Residual> maxwell_residuals_proxy(const Observer& o, const SplitEmFields& f) {
  const SplittingStructure& s = o.splitting();
  const FormField ci = c0_pow(o, -2);
  const FormField et = mul(ci, o.eta2_bar()), de = mul(ci, o.delta_bar());
  std::vector<Residual> r;
  r.push_back(ResidualBuilder("proxy_gauss_magnetic").add(s.D(f.b)).sub(wedge(et, f.e)).build());
  r.push_back(ResidualBuilder("proxy_faraday").add(s.D(f.e)).add(o.d_tau(f.b)).sub(wedge(de, f.e)).build());
  r.push_back(ResidualBuilder("proxy_gauss_electric").add(s.D(f.d)).sub(f.rho).add(wedge(et, f.h)).build());
  r.push_back(
      ResidualBuilder("proxy_ampere_maxwell").add(s.D(f.h)).sub(f.j).sub(o.d_tau(f.d)).sub(wedge(de, f.h)).build());
  if (f.a) {
    r.push_back(ResidualBuilder("proxy_potential_b").add(s.D(*f.a)).sub(f.b).sub(wedge(et, *f.phi)).build());
    r.push_back(ResidualBuilder("proxy_potential_e")
                    .add(s.D(*f.phi))
                    .add(f.e)
                    .add(o.d_tau(*f.a))
                    .sub(wedge(de, *f.phi))
                    .build());
  }
  r.push_back(ResidualBuilder("proxy_continuity").add(s.D(f.j)).add(o.d_tau(f.rho)).sub(wedge(de, f.j)).build());
  return r;
}

// ---- constitutive relations --------------------------------------------------------

FormField vacuum_excitation(const MetricField& g, const FormField& F, double Z0) {
  return mul(constant0(g.chart(), 1.0 / Z0, dim::Z0.inv()), hodge(g, F));
}

FormField eps0_field(Chart c, double Z0, double c0) { return constant0(c, 1.0 / (Z0 * c0), dim::Eps0); }
FormField mu0_field(Chart c, double Z0, double c0) { return constant0(c, Z0 / c0, dim::Mu0); }

std::pair<FormField, FormField> constitutive_regular(const Observer& o, const SplitEmFields& f, double Z0) {
  const FormField zi = constant0(o.splitting().base(), 1.0 / Z0, dim::Z0.inv());
  const SymField h = o.h();
  const FormField d = mul(zi, mul(o.N_inv(), hodge(h, f.e)));
  const FormField ht = mul(zi, mul(o.N(), hodge(h, f.b)));
  auto guard = [o](const FormField& a) {
    return FormField(a.chart(), a.meta(), [o, a](const Coords& x) {
      o.require_regular_at(x);
      return a(x);
    });
  };
  return {guard(d), guard(ht)};
}

std::pair<Form<double>, Form<double>> constitutive_components(const Observer& o, const SplitEmFields& f, double Z0,
                                                               const Point& p) {
  o.require_regular_at(constant_coords(p));
  const Mat<double> h = o.h().value(p);
  const Mat<double> hi = inverse(h);
  const double g00 = values(o.frame_metric(constant_coords(p)))(0, 0);
  const double sh = std::sqrt(std::abs(det(h)));
  const auto e = f.e.value(p);
  const auto b = f.b.value(p);
  auto eps = [](int i, int j, int k) {
    if (i == j || j == k || i == k) return 0.0;
    return ((i > j) + (j > k) + (i > k)) % 2 == 1 ? -1.0 : 1.0;
  };
  // raised Levi-Civita symbol ε̂_{ij}^k = ε̂_{ijl} h^{lk}
  auto eps1 = [&](int i, int j, int k) {
    double s = 0;
    for (int l = 0; l < 3; ++l) s += eps(i, j, l) * hi(l, k);
    return s;
  };
  auto eps2 = [&](int i, int k, int l) {
    double s = 0;
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c) s += eps(i, a, c) * hi(a, k) * hi(c, l);
    return s;
  };
  Form<double> d(f.d.meta()), ht(f.h.meta());
  for (int q = 0; q < d.size(); ++q) {
    const int m = d.mask(q);
    int i = -1, j = -1;
    for (int a = 0; a < 3; ++a)
      if (m & (1 << a)) (i < 0 ? i : j) = a;
    double s = 0;
    for (int k = 0; k < 3; ++k) s += eps1(i, j, k) * e.at_mask(1 << k);
    d.c[q] = s * sh / (Z0 * std::sqrt(g00));
  }
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        const double bkl = k == l ? 0.0 : (k < l ? 1.0 : -1.0) * b.at_mask((1 << k) | (1 << l));
        s += eps2(i, k, l) * bkl;
      }
    ht.at_mask(1 << i) = 0.5 * s * sh * std::sqrt(g00) / Z0;
  }
  return {d, ht};
}

FormField lagrangian(const MaxwellFieldSet& f) { return -0.5 * wedge(f.F, f.H); }

// ---- energy-momentum --------------------------------------------------------------

EnergyMomentum energy_momentum(const SplitEmFields& f, const std::optional<VecField>& k,
                               const std::optional<VecField>& l) {
  EnergyMomentum r;
  if (k) {
    r.p = wedge(contract(*k, f.b), f.d);
    r.m = -wedge(contract(*k, f.d), f.e) - wedge(contract(*k, f.b), f.h) +
          half(contract(*k, wedge(f.d, f.e) + wedge(f.b, f.h)));
  }
  if (l) {
    r.w = half(wedge(imul(*l, f.e), f.d) + wedge(imul(*l, f.h), f.b));
    r.s = half(wedge(imul(*l, f.e), f.h) + wedge(f.e, imul(*l, f.h)));
  }
  return r;
}

FormField energy_momentum_4d(const MaxwellFieldSet& f, const VecField& n) {
  return half(wedge(contract(n, f.H), f.F) - wedge(contract(n, f.F), f.H));
}

FormPair split_energy_momentum_direct(const SplittingStructure& s, const MaxwellFieldSet& f, const VecPair& n) {
  return s.split_form(energy_momentum_4d(f, s.unsplit_vector(n)));
}

FormPair split_energy_momentum(const SplitEmFields& f, const VecPair& n) {
  const EnergyMomentum t = energy_momentum(f, n.first, n.second);
  return {*t.w - *t.p, -*t.m - *t.s};
}

FormField four_force(const MaxwellFieldSet& f, const VecField& n) { return wedge(contract(n, f.F), f.J); }

ForceDensity force_density(const SplitEmFields& f, const std::optional<VecField>& k,
                           const std::optional<VecField>& l) {
  ForceDensity r;
  if (k) r.f = wedge(contract(*k, f.e), f.rho) + wedge(contract(*k, f.b), f.j);
  if (l) r.r = -half(wedge(imul(*l, f.e), f.j) + wedge(f.e, imul(*l, f.j)));
  return r;
}

// ---- Θ tensor and body force ----------------------------------------------------------

SymField theta(const MetricField& g, const VecField& n) { return lie_derivative(n, g); }

FormField theta_trace(const MetricField& g, const VecField& n) { return trace(g, theta(g, n)); }

FormField theta_bar(const MetricField& g, const VecField& n, const FormField& a) {
  const SymField lg = theta(g, n);
  Meta m = a.meta();
  m.pd = a.meta().pd * n.meta().pd;
  m.lie = LieValue::combine(n.meta().lie, a.meta().lie);
  return FormField(a.chart(), m, [g, lg, a, m](const Coords& x) {
    const Mat<Jet> M = lg(x) * inverse(g(x));
    const auto av = a(x);
    Form<Jet> r(m);
    const int dim = m.n;
    for (int q = 0; q < r.size(); ++q) {
      std::vector<int> idx;
      for (int i = 0; i < dim; ++i)
        if (r.mask(q) & (1 << i)) idx.push_back(i);
      Jet acc(0.0);
      for (size_t j = 0; j < idx.size(); ++j) {
        std::vector<int> rep = idx;
        for (int b = 0; b < dim; ++b) {
          rep[j] = b;
          acc += M(idx[j], b) * component(av, rep);
        }
      }
      r.c[q] = acc;
    }
    return r;
  });
}

FormField body_force(const MaxwellFieldSet& f, const VecField& n) {
  return -half(wedge(f.F, lie_derivative(n, f.H)) - wedge(f.H, lie_derivative(n, f.F)));
}

FormField body_force_vacuum(const MetricField& g, const FormField& F, const VecField& n, double Z0) {
  const FormField comm = lie_derivative(n, hodge(g, F)) - hodge(g, lie_derivative(n, F));
  return mul(constant0(g.chart(), -0.5 / Z0, dim::Z0.inv()), wedge(F, comm));
}

FormField trautman_residual(const MetricField& g, const VecField& n, const FormField& a) {
  const FormField sa = hodge(g, a);
  const FormField lhs = lie_derivative(n, sa) - hodge(g, lie_derivative(n, a));
  return lhs - theta_bar(g, n, sa) + 0.5 * mul(theta_trace(g, n), sa);
}

bool is_killing(const MetricField& g, const VecField& n, std::span<const Point> pts, double tol) {
  const SymField lg = lie_derivative(n, g);
  for (const auto& p : pts)
    if (max_abs(values(lg.jet_at(p))) > tol) return false;
  return true;
}

// ---- balance ----------------------------------------------------------------------------

BalanceResiduals balance_residuals(const Observer& o, const SplitEmFields& f, const std::optional<VecField>& k,
                                   const std::optional<VecField>& l, std::span<const Point> pts) {
  const SplittingStructure& s = o.splitting();
  const FormField X = s.chi();
  const EnergyMomentum t = energy_momentum(f, k, l);
  const ForceDensity fr = force_density(f, k, l);
  BalanceResiduals r;
  if (k) {
    const VecField n = s.sigma_push(*k);
    require_killing(o.metric(), n, pts, "momentum balance");
    r.momentum =
        ResidualBuilder("momentum_balance").add(*fr.f).add(s.dG(*t.p)).add(wedge(X, *t.m)).sub(s.D(*t.m)).build();
  }
  if (l) {
    const VecField n = wedge(s.w(), s.sigma_push(*l));
    require_killing(o.metric(), n, pts, "energy balance");
    r.energy =
        ResidualBuilder("energy_balance").add(*fr.r).sub(s.dG(*t.w)).add(wedge(X, *t.s)).sub(s.D(*t.s)).build();
  }
  return r;
}

ProxyEnergyMomentum proxy_energy_momentum(const SplitEmFields& f, const std::optional<VecField>& k) {
  ProxyEnergyMomentum r;
  if (k) {
    r.p = wedge(contract(*k, f.b), f.d);
    r.m = -wedge(contract(*k, f.d), f.e) - wedge(contract(*k, f.b), f.h) +
          half(contract(*k, wedge(f.d, f.e) + wedge(f.b, f.h)));
    r.f = wedge(contract(*k, f.e), f.rho) + wedge(contract(*k, f.b), f.j);
  }
  r.w = half(wedge(f.e, f.d) + wedge(f.h, f.b));
  r.s = wedge(f.e, f.h);
  r.r = -wedge(f.e, f.j);
  return r;
}

BalanceResiduals proxy_balance_residuals(const Observer& o, const SplitEmFields& f, const std::optional<VecField>& k,
                                         std::span<const Point> pts) {
  const SplittingStructure& s = o.splitting();
  const FormField de = mul(c0_pow(o, -2), o.delta_bar());
  const ProxyEnergyMomentum t = proxy_energy_momentum(f, k);
  BalanceResiduals r;
  if (k) {
    require_killing(o.metric(), s.sigma_push(*k), pts, "proxy momentum balance");
    r.momentum = ResidualBuilder("proxy_momentum_balance")
                     .add(*t.f)
                     .add(o.d_tau(*t.p))
                     .add(wedge(de, *t.m))
                     .sub(s.D(*t.m))
                     .build();
  }
  require_killing(o.metric(), wedge(s.w(), s.sigma_push(as_vec0(o.N_inv()))), pts, "Poynting balance");
  r.energy =
      ResidualBuilder("poynting").add(t.r).sub(o.d_tau(t.w)).add(wedge(de, t.s)).sub(s.D(t.s)).build();
  return r;
}

// ---- Schiff charges and currents ----------------------------------------------------------

SchiffStarFields schiff_star_fields(const Observer& o, const SplitEmFields& f, double Z0) {
  const SplittingStructure& s = o.splitting();
  const FormField zi = constant0(s.base(), 1.0 / Z0, dim::Z0.inv());
  const SymField hs = o.h_sigma();
  const FormField nm = o.N_inv_dag(), nd = o.N_dag();
  const VecField shift = o.shift();
  SchiffStarFields r;
  r.d_star = mul(zi, mul(nm, hodge(hs, f.e)));
  r.h_star = mul(zi, mul(nd, hodge(hs, f.b)));
  r.p_S = f.d - r.d_star;
  r.m_S = r.h_star - f.h;
  r.p_S_hodge = mul(zi, mul(nm, hodge(hs, contract(shift, f.b))));
  r.m_S_hodge = -contract(shift, f.d);
  r.rho_S = -s.D(r.p_S);
  r.j_S = s.D(r.m_S) + s.dG(r.p_S);
  return r;
}

std::vector<Residual> schiff_residuals(const Observer& o, const SplitEmFields& f, const SchiffStarFields& st) {
  const SplittingStructure& s = o.splitting();
  std::vector<Residual> r;
  r.push_back(
      ResidualBuilder("schiff_ampere").add(s.D(st.h_star)).sub(f.j).sub(st.j_S).sub(s.dG(st.d_star)).build());
  r.push_back(ResidualBuilder("schiff_gauss").add(s.D(st.d_star)).sub(f.rho).sub(st.rho_S).build());
  return r;
}

}  // namespace rsplit
