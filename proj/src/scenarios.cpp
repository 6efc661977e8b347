#include "rsplit/scenarios.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "rsplit/random_fields.hpp"

namespace rsplit {

namespace {

constexpr Chart kP{4, true};
constexpr Chart kB{4, false};
constexpr Chart kAxB{3, false};
constexpr Chart kY{3, true};

Meta form_meta(int n, int k, Dimension pd = {}, LieValue lie = {}, bool twisted = false) {
  Meta m;
  m.n = n;
  m.k = k;
  m.pd = pd;
  m.lie = lie;
  m.twist_x = twisted;
  return m;
}

LieValue lie_of(std::initializer_list<Group> up, std::initializer_list<Group> down) {
  LieValue v;
  for (Group g : up) v.up[int(g)]++;
  for (Group g : down) v.down[int(g)]++;
  return v;
}

using CompFn = std::function<void(const Coords&, Form<Jet>&)>;

FormField form_field(Chart c, Meta m, CompFn fill) {
  return FormField(c, m, [m, fill = std::move(fill)](const Coords& x) {
    Form<Jet> f(m);
    fill(x, f);
    return f;
  });
}

FormField constant0(Chart c, double v, Dimension pd = {}, LieValue lie = {}) {
  return scalar_field(c, [v](const Coords&) { return Jet(v); }, pd, lie);
}

Jet gamma_of(const Jet& beta) { return Jet(1.0) / sqrt(1.0 - beta * beta); }

void require_positive(const char* what, double v) {
  if (!(v > 0)) throw ScenarioError(fmt::format("{} must be positive (got {})", what, v));
}

void check_params(const ScenarioParams& p) {
  require_positive("omega", p.omega);
  require_positive("L", p.L);
  require_positive("c0", p.c0);
  require_positive("Z0", p.Z0);
}

Meta zero_meta_like(const Meta& m, int n, int k) {
  Meta r = m;
  r.n = n;
  r.k = k;
  return r;
}

std::function<bool(const Point&)> radial_ok(const ScenarioParams& p, int i, int j, double margin) {
  return [p, i, j, margin](const Point& x) {
    const double r = j < 0 ? x[i] : std::hypot(x[i], x[j]);
    return r > margin && p.omega * r < p.c0;
  };
}

Scenario make(std::string name, std::string coords, std::string singular, const ScenarioParams& p, Observer o) {
  return Scenario{std::move(name), std::move(coords), std::move(singular), p, std::move(o), std::nullopt, {}, {}, {},
                  {}, {}, {}};
}

}  // namespace

std::vector<Point> Scenario::sample(int n, std::uint64_t skip) const {
  std::vector<Point> out;
  std::uint64_t k = skip;
  while (int(out.size()) < n) {
    const int batch = std::max(16, 2 * (n - int(out.size())));
    for (const auto& p : sobol_points(lo, hi, batch, 4, k))
      if (int(out.size()) < n && (!admissible || admissible(p))) out.push_back(p);
    k += batch;
    if (k > skip + 1000000) throw ScenarioError(name + ": sampling box has no admissible points");
  }
  return out;
}

FormField beta_field(Chart c, const ScenarioParams& p, Coordinates coords) {
  const double k = p.omega / p.c0;
  if (coords == Coordinates::Cylindrical)
    return scalar_field(c, [k](const Coords& x) { return k * x[1]; });
  return scalar_field(c, [k](const Coords& x) { return k * sqrt(x[1] * x[1] + x[2] * x[2]); });
}

FormField gamma_field(Chart c, const ScenarioParams& p, Coordinates coords) {
  const FormField b = beta_field(c, p, coords);
  return scalar_field(c, [b](const Coords& x) { return gamma_of(b(x).c[0]); });
}

// ---- Minkowski, observer at rest ----------------------------------------------------

Scenario scenario_minkowski_rest(double L, Coordinates c) {
  require_positive("L", L);
  const bool cyl = c == Coordinates::Cylindrical;
  const MetricField g(kB, [L, cyl](const Coords& x) {
    Mat<Jet> m(4);
    m(0, 0) = Jet(L * L);
    m(1, 1) = Jet(-1.0);
    m(2, 2) = cyl ? -(x[1] * x[1]) : Jet(-1.0);
    m(3, 3) = Jet(-1.0);
    return m;
  });
  ScenarioParams p;
  p.omega = 0;
  p.L = L;
  Scenario s = make("minkowski_rest", cyl ? "(t, r, phi, z)" : "(t, x, y, z)", cyl ? "r = 0" : "none", p,
                    Observer(SplittingStructure::natural(4), g));
  const auto co = LieValue::coalg();
  s.oracle.emplace("N", constant0(kP, L, dim::L, co));
  s.oracle.emplace("Gamma", zero_field<Kind::Form>(kP, form_meta(3, 1, {}, LieValue::alg())));
  s.oracle.emplace("Omega", zero_field<Kind::Form>(kP, form_meta(3, 2, {}, LieValue::alg())));
  s.oracle.emplace("delta", zero_field<Kind::Form>(kP, form_meta(3, 1, dim::Velocity * dim::L, co)));
  s.oracle.emplace("eta", zero_field<Kind::Form>(kP, form_meta(3, 2, dim::Velocity * dim::L)));
  s.oracle_tensors.emplace("lambda", SymField(kP, [](const Coords&) { return Mat<Jet>(3); },
                                              dim::Velocity * dim::L));
  if (cyl) {
    s.lo = {0, 0.1, 0, -1};
    s.hi = {1, 2, 2 * std::numbers::pi, 1};
    s.admissible = [](const Point& x) { return x[1] > 1e-6; };
  } else {
    s.lo = {0, -1, -1, -1};
    s.hi = {1, 1, 1, 1};
  }
  return s;
}

// ---- rotating observer, regular splitting -------------------------------------------

Scenario scenario_rotating(double omega, double L, double c0) {
  ScenarioParams p;
  p.omega = omega;
  p.L = L;
  p.c0 = c0;
  return scenario_rotating(p);
}

Scenario scenario_rotating(const ScenarioParams& p) {
  check_params(p);
  const double w = p.omega, L = p.L, c0 = p.c0;
  const double k = w / c0;
  const MetricField g(kB, [=](const Coords& x) {
    const Jet r = x[1], beta = k * r;
    Mat<Jet> m(4);
    m(0, 0) = (1.0 - beta * beta) * (L * L);
    m(0, 2) = m(2, 0) = -(beta * r) * L;
    m(1, 1) = Jet(-1.0);
    m(2, 2) = -(r * r);
    m(3, 3) = Jet(-1.0);
    return m;
  });
  const auto al = LieValue::alg(), co = LieValue::coalg();
  // Γ = −(ω/(c₀L))(γr)² dφ
  const FormField Gamma = form_field(kP, form_meta(3, 1, {}, al), [=](const Coords& x, Form<Jet>& f) {
    const Jet gr = gamma_of(k * x[1]) * x[1];
    f.at_mask(0b010) = -(k / L) * gr * gr;
  });
  Scenario s = make("rotating", "(t, r, phi, z)", "axis r = 0 and light cylinder omega r >= c0", p,
                    Observer(SplittingStructure(4, Gamma, Group::G), g, c0));
  s.lo = {0, 0.1 * c0 / w, 0, -1};
  s.hi = {1, 0.8 * c0 / w, 2 * std::numbers::pi, 1};
  s.admissible = radial_ok(p, 1, -1, 1e-9);

  s.oracle_tensors.emplace("g", g);
  s.oracle_tensors.emplace("h", SymField(kP, [=](const Coords& x) {
    const Jet gr = gamma_of(k * x[1]) * x[1];
    Mat<Jet> m(3);
    m(0, 0) = Jet(1.0);
    m(1, 1) = gr * gr;
    m(2, 2) = Jet(1.0);
    return m;
  }));
  s.oracle_tensors.emplace("lambda", SymField(kP, [](const Coords&) { return Mat<Jet>(3); },
                                              dim::Velocity * dim::L));
  s.oracle.emplace("Gamma", Gamma);
  s.oracle.emplace("N", scalar_field(kP, [=](const Coords& x) { return L / gamma_of(k * x[1]); }, dim::L, co));
  s.oracle.emplace("N_inv",
                   scalar_field(kP, [=](const Coords& x) { return gamma_of(k * x[1]) / L; }, dim::L.inv(), al));
  s.oracle.emplace("omega", form_field(kB, form_meta(4, 1, {}, al), [=](const Coords& x, Form<Jet>& f) {
    const Jet gr = gamma_of(k * x[1]) * x[1];
    f.at_mask(0b0001) = Jet(1.0);
    f.at_mask(0b0100) = -(k / L) * gr * gr;
  }));
  s.oracle.emplace("chi", zero_field<Kind::Form>(kP, form_meta(3, 1, {}, LieValue::tensor())));
  // Ω = −2βγ⁴L⁻¹ dr∧dφ
  s.oracle.emplace("Omega", form_field(kP, form_meta(3, 2, {}, al), [=](const Coords& x, Form<Jet>& f) {
    const Jet beta = k * x[1], g2 = 1.0 / (1.0 - beta * beta);
    f.at_mask(0b011) = -2.0 / L * beta * g2 * g2;
  }));
  // Ω = −(2/(c₀N))γ³ωr dr∧dφ
  const FormField N = s.oracle.at("N");
  s.oracle.emplace("Omega_alt", form_field(kP, form_meta(3, 2, {}, al), [=](const Coords& x, Form<Jet>& f) {
    const Jet gm = gamma_of(k * x[1]);
    f.at_mask(0b011) = -2.0 / (c0 * N(x).c[0]) * gm * gm * gm * w * x[1];
  }));
  // δ̃ = βγωL dr and δ̃ = c₀⁻¹Nγ²ω²r dr
  const Dimension dpd = dim::Velocity * dim::L;
  s.oracle.emplace("delta", form_field(kP, form_meta(3, 1, dpd, co), [=](const Coords& x, Form<Jet>& f) {
    const Jet beta = k * x[1];
    f.at_mask(0b001) = beta * gamma_of(beta) * (w * L);
  }));
  s.oracle.emplace("delta_alt", form_field(kP, form_meta(3, 1, dpd, co), [=](const Coords& x, Form<Jet>& f) {
    const Jet gm = gamma_of(k * x[1]);
    f.at_mask(0b001) = N(x).c[0] * gm * gm * x[1] * (w * w / c0);
  }));
  // η = −γ³ωr dr∧dφ and η = −γ²ω *₃dz
  s.oracle.emplace("eta", form_field(kP, form_meta(3, 2, dpd), [=](const Coords& x, Form<Jet>& f) {
    const Jet gm = gamma_of(k * x[1]);
    f.at_mask(0b011) = -(gm * gm * gm) * x[1] * w;
  }));
  const FormField dz = form_field(kP, form_meta(3, 1, dim::L), [](const Coords&, Form<Jet>& f) {
    f.at_mask(0b100) = Jet(1.0);
  });
  const FormField g2w = scalar_field(kP, [=](const Coords& x) {
    const Jet gm = gamma_of(k * x[1]);
    return -w * gm * gm;
  }, dim::T.inv());
  // *₃ relative to the chart orientation (r, φ, z)
  FormField star_dz = hodge(s.oracle_tensors.at("h"), dz);
  Meta sm = star_dz.meta();
  sm.twist_x = false;
  star_dz = FormField(kP, sm, [star_dz, sm](const Coords& x) {
    auto v = star_dz(x);
    v.m = sm;
    return v;
  });
  s.oracle.emplace("eta_hodge", mul(g2w, star_dz));

  Meta wm = form_meta(4, 1, {}, co);
  s.oracle_vectors.emplace("w", VecField(kB, wm, [wm](const Coords&) {
    MultiVec<Jet> v(wm);
    v.c[0] = Jet(1.0);
    return v;
  }));
  return s;
}

// ---- rotating observer, natural splitting ------------------------------------------

Scenario scenario_schiff_natural(double omega, double L) {
  ScenarioParams p;
  p.omega = omega;
  p.L = L;
  p.c0 = L;
  return scenario_schiff_natural(p);
}

Scenario scenario_schiff_natural(const ScenarioParams& p) {
  check_params(p);
  const double L = p.L, W = p.omega * p.L / p.c0;  // angular velocity per unit coordinate time
  const MetricField g(kB, [=](const Coords& x) {
    Mat<Jet> m(4);
    m(0, 0) = L * L - W * W * (x[1] * x[1] + x[2] * x[2]);
    m(0, 1) = m(1, 0) = W * x[2];
    m(0, 2) = m(2, 0) = -W * x[1];
    m(1, 1) = m(2, 2) = m(3, 3) = Jet(-1.0);
    return m;
  });
  Scenario s = make("schiff_natural", "(t, x, y, z)", "light cylinder omega sqrt(x^2 + y^2) >= c0", p,
                    Observer(SplittingStructure::natural(4), g, p.c0));
  const double rmax = 0.8 * p.c0 / p.omega / std::sqrt(2.0);
  s.lo = {0, -rmax, -rmax, -1};
  s.hi = {1, rmax, rmax, 1};
  s.admissible = radial_ok(p, 1, 2, 0.0);
  s.oracle_tensors.emplace("g", g);
  s.oracle_tensors.emplace("h", SymField(kP, [](const Coords&) {
    Mat<Jet> m(3);
    for (int i = 0; i < 3; ++i) m(i, i) = Jet(1.0);
    return m;
  }));
  const auto al = LieValue::alg(), co = LieValue::coalg();
  const FormField gm = gamma_field(kP, p, Coordinates::Cartesian);
  s.oracle.emplace("N", scalar_field(kP, [=](const Coords& x) { return L / gm(x).c[0]; }, dim::L, co));
  s.oracle.emplace("N_dag", constant0(kP, L, dim::L, co));
  s.oracle.emplace("N_inv_dag", constant0(kP, 1.0 / L, dim::L.inv(), al));
  s.oracle.emplace("xi", scalar_field(kP, [=](const Coords& x) { return 1.0 / gm(x).c[0]; }));
  // ν = −(γ²/L²)W(y dx − x dy)
  s.oracle.emplace("nu", form_field(kP, form_meta(3, 1, {}, al), [=](const Coords& x, Form<Jet>& f) {
    const Jet g2 = gm(x).c[0] * gm(x).c[0] / (L * L);
    f.at_mask(0b001) = -W * g2 * x[2];
    f.at_mask(0b010) = W * g2 * x[1];
  }));
  // Softened point charge at rest in the nonrotating frame: A = −φ(s) dt with s
  // rotation invariant, H = Z₀⁻¹*₄F.
  const double kq = p.Z0 * p.L * p.Q / (4 * std::numbers::pi), a2 = p.R1 * p.R1;
  const FormField A = form_field(kB, form_meta(4, 1, dim::Faraday), [=](const Coords& x, Form<Jet>& f) {
    f.at_mask(0b0001) = -kq / sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3] + a2);
  });
  s.fields = maxwell_from_potentials(A, vacuum_excitation(g, exterior_d(A), p.Z0));
  // N⃗ = W(x∂_y − y∂_x)
  const Meta vm = form_meta(3, 1, {}, co);
  s.oracle_vectors.emplace("shift", VecField(kP, vm, [=](const Coords& x) {
    MultiVec<Jet> v(vm);
    v.at_mask(0b001) = -W * x[2];
    v.at_mask(0b010) = W * x[1];
    return v;
  }));
  return s;
}

// ---- charge at rest seen from the rotating splitting --------------------------------

FormField rest_frame_current(const Scenario& rot, ScalarFn rho) {
  const double a = rot.params.omega * rot.params.L / rot.params.c0;
  return form_field(kB, form_meta(4, 3, dim::Charge, {}, true), [=](const Coords& x, Form<Jet>& f) {
    const Jet q = rho(x);
    f.at_mask(0b1110) = q;
    f.at_mask(0b1011) = -a * q;  // dr∧dt∧dz
  });
}

std::pair<FormField, FormField> rest_frame_current_split_oracle(const Scenario& rot, ScalarFn rho) {
  const ScenarioParams p = rot.params;
  const FormField g = gamma_field(kP, p), b = beta_field(kP, p);
  const FormField rho0 = form_field(kP, form_meta(3, 3, dim::Charge, {}, true), [=](const Coords& x, Form<Jet>& f) {
    f.at_mask(0b111) = rho(x);
  });
  const FormField g2 = scalar_field(kP, [g](const Coords& x) { return g(x).c[0] * g(x).c[0]; });
  const Meta wm = form_meta(3, 1, {}, LieValue::coalg(Group::U));
  const VecField w_ring(kP, wm, [wm](const Coords&) {
    MultiVec<Jet> v(wm);
    v.at_mask(0b010) = Jet(1.0);
    return v;
  });
  const FormField lambda_inv = scalar_field(kP, [L = p.L](const Coords& x) { return L / x[1]; }, {},
                                            lie_of({Group::U}, {Group::G}));
  return {mul(g2, rho0), -1.0 * mul(b, mul(lambda_inv, contract(w_ring, rho0)))};
}

// ---- axial splitting --------------------------------------------------------------------

Point to_axial(const Point& p) { return {p[2], p[1], p[3], 0.0}; }
Point from_axial(const Point& y, double t0) { return {t0, y[1], y[0], y[2]}; }

FormPair axial_split(const AxialReduction& ax, const FormField& a) {
  if (!(a.chart() == kP)) throw ScenarioError("axial_split: expected a parametric field on (t; r, phi, z)");
  const double t0 = ax.t0;
  const FormField B = pullback(a, kAxB, [t0](const Coords& x) { return Coords{Jet(t0), x[1], x[0], x[2]}; });
  return ax.axial.split_form(B);
}

FormField axial_unsplit(const AxialReduction& ax, const FormPair& p) {
  const FormField B = ax.axial.unsplit_form(p);
  return pullback(B, kP, [](const Coords& x) { return Coords{x[2], x[1], x[3], Jet(0.0)}; });
}

AxialReduction axial_reduce(const Scenario& rot, double t0) {
  if (rot.splitting().ncoords() != 4) throw ScenarioError("axial_reduce: expected a four-dimensional scenario");
  const SymField h3 = rot.observer.h_sigma();
  const SymField h_ax(kAxB, [h3, t0](const Coords& x) {
    const Mat<Jet> m = h3(Coords{Jet(t0), x[1], x[0], x[2]});
    static constexpr int old_axis[3] = {1, 0, 2};  // (φ, r, z) → (r, φ, z)
    Mat<Jet> r(3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) r(a, b) = m(old_axis[a], old_axis[b]);
    return r;
  }, h3.pd(), h3.lie());
  const SymField h_bar(kY, [h_ax](const Coords& x) {
    const Mat<Jet> m = h_ax(x);
    Mat<Jet> r(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = m(i + 1, j + 1) - m(0, i + 1) * m(0, j + 1) / m(0, 0);
    return r;
  }, h3.pd(), h3.lie());
  const FormField N_ring =
      scalar_field(kY, [h_ax](const Coords& x) { return sqrt(h_ax(x)(0, 0)); }, dim::L, LieValue::coalg(Group::U));

  AxialReduction ax{rot.params, t0, h_ax, orthogonal_splitting(h_ax, Group::U), h_bar, N_ring,
                    {}, {}, {}, {}, beta_field(kY, rot.params), gamma_field(kY, rot.params), {}};
  const auto& s = rot.splitting();
  ax.N_bar = axial_split(ax, rot.observer.N()).first;
  const FormField N_bar_inv = axial_split(ax, rot.observer.N_inv()).first;
  const FormField g = ax.gamma;
  const FormField g_m2 = scalar_field(kY, [g](const Coords& x) { return 1.0 / (g(x).c[0] * g(x).c[0]); });
  ax.Lambda = mul(g_m2, mul(ax.N_ring, N_bar_inv));
  ax.Gamma_bar = *axial_split(ax, s.gamma()).second;
  ax.Omega_bar = *axial_split(ax, s.Omega()).second;

  const ScenarioParams p = rot.params;
  const LieValue ug = lie_of({Group::G}, {Group::U});
  const double k = p.omega / p.c0, L = p.L;
  ax.oracle.emplace("N_ring", scalar_field(kY, [k](const Coords& x) { return gamma_of(k * x[1]) * x[1]; }, dim::L,
                                           LieValue::coalg(Group::U)));
  ax.oracle.emplace("N_bar",
                    scalar_field(kY, [=](const Coords& x) { return L / gamma_of(k * x[1]); }, dim::L, LieValue::coalg()));
  ax.oracle.emplace("Lambda", scalar_field(kY, [L](const Coords& x) { return x[1] / L; }, {}, ug));
  // Γ̄ = −(ω/(c₀L))(γr)² and Γ̄ = −βγ²Λ
  ax.oracle.emplace("Gamma_bar", scalar_field(kY, [=](const Coords& x) {
    const Jet gr = gamma_of(k * x[1]) * x[1];
    return -(k / L) * gr * gr;
  }, {}, ug));
  const FormField bg2 = scalar_field(kY, [=](const Coords& x) {
    const Jet gm = gamma_of(k * x[1]);
    return k * x[1] * gm * gm;
  });
  ax.oracle.emplace("Gamma_bar_alt", -1.0 * mul(bg2, ax.oracle.at("Lambda")));
  // Ω̄ = 2βγ⁴L⁻¹ dr and Ω̄ = d(βγ²Λ)
  ax.oracle.emplace("Omega_bar", form_field(kY, form_meta(2, 1, {}, ug), [=](const Coords& x, Form<Jet>& f) {
    const Jet beta = k * x[1], g2 = 1.0 / (1.0 - beta * beta);
    f.at_mask(0b01) = 2.0 / L * beta * g2 * g2;
  }));
  ax.oracle.emplace("Omega_bar_alt", exterior_d(mul(bg2, ax.oracle.at("Lambda"))));
  ax.oracle.emplace("Omega_bar_neg_dGamma", -1.0 * exterior_d(ax.Gamma_bar));
  return ax;
}

AxialEmSplit reduce_em(const AxialReduction& ax, const SplitEmFields& f, std::span<const Point> pts, double tol) {
  AxialEmSplit out;
  auto split = [&](const FormField& a, const char* name) {
    FormPair p = axial_split(ax, a);
    for (const FormField* e : {&p.first, p.second ? &*p.second : nullptr}) {
      if (!e) continue;
      const FormField dphi = partial(*e, 0);
      for (const auto& y : pts)
        if (max_abs(dphi.value(y)) > tol)
          throw ScenarioError(fmt::format("reduce_em: {} is not axisymmetric at (phi, r, z) = ({}, {}, {})", name,
                                          y[0], y[1], y[2]));
    }
    return p;
  };
  const FormPair e = split(f.e, "e"), b = split(f.b, "b"), h = split(f.h, "h"), d = split(f.d, "d"),
                 j = split(f.j, "j"), rho = split(f.rho, "rho");
  out.reduced = {e.first, *b.second, h.first, *d.second, j.first, *rho.second};
  out.trivial = {{"e_u", *e.second}, {"b_g", b.first}, {"h_u", *h.second},
                 {"d_g", d.first},   {"j_u", *j.second}};
  return out;
}

SplitEmFields lift_em(const AxialReduction& ax, const ReducedEm& r) {
  auto first_only = [&](const FormField& a) {
    Meta m = zero_meta_like(a.meta(), 2, a.meta().k - 1);
    m.lie = a.meta().lie.with_down(Group::U);
    return axial_unsplit(ax, {a, zero_field<Kind::Form>(kY, m)});
  };
  auto second_only = [&](const FormField& a) {
    Meta m = zero_meta_like(a.meta(), 2, a.meta().k + 1);
    m.lie.down[int(Group::U)]--;
    return axial_unsplit(ax, {zero_field<Kind::Form>(kY, m), a});
  };
  SplitEmFields f;
  f.e = first_only(r.e);
  f.b = second_only(r.b);
  f.h = first_only(r.h);
  f.d = second_only(r.d);
  f.j = first_only(r.j);
  f.rho = second_only(r.rho);
  return f;
}

std::vector<Residual> reduced_maxwell_residuals(const AxialReduction& ax, const ReducedEm& r) {
  const FormField& W = ax.Omega_bar;
  return {
      ResidualBuilder("reduced_faraday").sub(exterior_d(r.b)).sub(wedge(W, r.e)).build(),
      ResidualBuilder("reduced_gauss").sub(exterior_d(r.d)).sub(r.rho).add(wedge(W, r.h)).build(),
      ResidualBuilder("reduced_e_closed").add(exterior_d(r.e)).build(),
      ResidualBuilder("reduced_ampere").add(exterior_d(r.h)).sub(r.j).build(),
  };
}

std::pair<FormField, FormField> reduced_constitutive(const AxialReduction& ax, const ReducedEm& r, double Z0) {
  const FormField g = ax.gamma;
  const FormField g2L = mul(scalar_field(kY, [g](const Coords& x) { return g(x).c[0] * g(x).c[0]; }), ax.Lambda);
  const FormField zi = constant0(kY, 1.0 / Z0, dim::Z0.inv()), z = constant0(kY, Z0, dim::Z0);
  return {mul(zi, mul(g2L, hodge(ax.h_bar, r.e))), mul(z, mul(g2L, hodge(ax.h_bar, r.h)))};
}

// ---- Schiff's rotating spheres ---------------------------------------------------------

bool SchiffSolution::smooth_at(const Point& y) const {
  const double r = y[1], s = std::hypot(y[1], y[2]), tube = 0.02 * params.R1;
  return r > tube && s < params.R && std::abs(s - params.R1) > tube && std::abs(s - params.R2) > tube;
}

std::vector<Point> SchiffSolution::sample(int n, std::uint64_t skip) const {
  std::vector<Point> out;
  std::uint64_t k = skip;
  const double R = params.R;
  while (int(out.size()) < n) {
    for (const auto& p : sobol_points({0, 0, -R, 0}, {2 * std::numbers::pi, R, R, 0}, 64, 3, k)) {
      if (int(out.size()) < n && smooth_at(p)) out.push_back(p);
    }
    k += 64;
  }
  return out;
}

SchiffSolution scenario_schiff_solution(const ScenarioParams& p) {
  check_params(p);
  if (!(0 < p.R1 && p.R1 < p.R2 && p.R2 < p.R))
    throw ScenarioError(fmt::format("schiff: need 0 < R1 < R2 < R (got {}, {}, {})", p.R1, p.R2, p.R));
  if (!(p.omega * p.R < p.c0))
    throw ScenarioError(fmt::format("schiff: omega R = {} must be below c0 = {}", p.omega * p.R, p.c0));
  SchiffSolution sol{p, axial_reduce(scenario_rotating(p)), {}, {}, {}, {}};
  const AxialReduction& ax = sol.axial;
  const double R1 = p.R1, R2 = p.R2;
  const double ke = p.Z0 * p.L * p.Q / (4 * std::numbers::pi), kd = p.Q / (4 * std::numbers::pi);
  auto shell = [R1, R2](const Coords& x) {
    const double s = std::hypot(x[1].value(), x[2].value());
    return s > R1 && s < R2;
  };
  const auto co = LieValue::coalg(), cu = LieValue::coalg(Group::U);
  // Coulomb field between the spheres: ē₀ = k(r dr + z dz)/s³, d̄₀ = (Q/4π) r(r dz − z dr)/s³
  ReducedEm& z0 = sol.zeroth;
  z0.e = form_field(kY, form_meta(2, 1, dim::Faraday, co), [=](const Coords& x, Form<Jet>& f) {
    if (!shell(x)) return;
    const Jet s2 = x[1] * x[1] + x[2] * x[2], s3 = s2 * sqrt(s2);
    f.at_mask(0b01) = ke * x[1] / s3;
    f.at_mask(0b10) = ke * x[2] / s3;
  });
  z0.d = form_field(kY, form_meta(2, 1, dim::Charge, cu, true), [=](const Coords& x, Form<Jet>& f) {
    if (!shell(x)) return;
    const Jet s2 = x[1] * x[1] + x[2] * x[2], s3 = s2 * sqrt(s2);
    f.at_mask(0b01) = -kd * x[1] * x[2] / s3;
    f.at_mask(0b10) = kd * x[1] * x[1] / s3;
  });
  z0.b = zero_field<Kind::Form>(kY, form_meta(2, 1, dim::Faraday, cu));
  z0.h = zero_field<Kind::Form>(kY, form_meta(2, 1, dim::Charge, co, true));
  z0.rho = zero_field<Kind::Form>(kY, form_meta(2, 2, dim::Charge, cu, true));
  z0.j = zero_field<Kind::Form>(kY, form_meta(2, 2, dim::Charge, co, true));

  const FormField beta = ax.beta, g = ax.gamma;
  const FormField g2 = scalar_field(kY, [g](const Coords& x) { return g(x).c[0] * g(x).c[0]; });
  const FormField Lambda_inv = scalar_field(kY, [L = p.L](const Coords& x) { return L / x[1]; }, {},
                                            lie_of({Group::U}, {Group::G}));
  sol.Omega_bar_1 = exterior_d(mul(beta, ax.Lambda));

  // (b̄₁, h̄₁) = β(−Λē₀, Λ⁻¹d̄₀), (ē₁, d̄₁) = (ē₀, d̄₀)
  ReducedEm& z1 = sol.first;
  z1 = z0;
  z1.b = -1.0 * mul(beta, mul(ax.Lambda, z0.e));
  z1.h = mul(beta, mul(Lambda_inv, z0.d));
  // (ē, d̄) = (ē₁, γ²d̄₁), (b̄, h̄) = (γ²b̄₁, h̄₁), (ρ̄, ȷ̄) = (γ², −βΛ⁻¹)ρ̄₀
  ReducedEm& ex = sol.exact;
  ex = z1;
  ex.d = mul(g2, z1.d);
  ex.b = mul(g2, z1.b);
  ex.rho = mul(g2, z0.rho);
  ex.j = -1.0 * mul(beta, mul(Lambda_inv, z0.rho));
  return sol;
}

}  // namespace rsplit
