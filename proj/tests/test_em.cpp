#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rsplit/em.hpp"
#include "rsplit/random_fields.hpp"

using namespace rsplit;

namespace {

const Chart kB{4, false};
const Chart kP{4, true};

Meta meta(int n, int k, Dimension pd = {}, LieValue lie = {}, bool tw = false) {
  Meta m;
  m.n = n;
  m.k = k;
  m.pd = pd;
  m.lie = lie;
  m.twist_x = tw;
  return m;
}

std::vector<Point> pts(int n = 6, std::uint64_t seed = 5) {
  return random_points({-0.6, -0.6, -0.6, -0.6}, {0.6, 0.6, 0.6, 0.6}, n, seed);
}

template <Kind K>
double diff_at(const Field<K>& a, const Field<K>& b, const Point& p) {
  return max_abs(a.value(p) - b.value(p));
}

template <Kind K>
double norm_at(const Field<K>& a, const Point& p) {
  return max_abs(a.value(p));
}

// Unconstrained parametric fields of the right types.
SplitEmFields random_split(std::uint64_t seed) {
  const auto co = LieValue::coalg();
  SplitEmFields f;
  f.a = random_form_field(kP, meta(3, 1, dim::Faraday), seed);
  f.phi = random_form_field(kP, meta(3, 0, dim::Faraday, co), seed + 1);
  f.b = random_form_field(kP, meta(3, 2, dim::Faraday), seed + 2);
  f.e = random_form_field(kP, meta(3, 1, dim::Faraday, co), seed + 3);
  f.d = random_form_field(kP, meta(3, 2, dim::Charge, {}, true), seed + 4);
  f.h = random_form_field(kP, meta(3, 1, dim::Charge, co, true), seed + 5);
  f.rho = random_form_field(kP, meta(3, 3, dim::Charge, {}, true), seed + 6);
  f.j = random_form_field(kP, meta(3, 2, dim::Charge, co, true), seed + 7);
  return f;
}

double max_residual(const std::vector<Residual>& rs, const std::vector<Point>& ps) {
  double m = 0;
  for (const auto& r : rs)
    for (const auto& p : ps) m = std::max(m, norm_at(r.value, p));
  return m;
}

// time-independent metric with nonzero g0i, constant g00 and no z dependence or z mixing
MetricField stationary_metric() {
  return MetricField(kB, [](const Coords& x) {
    Mat<Jet> m(4);
    m(0, 0) = Jet(1.3);
    m(0, 1) = m(1, 0) = 0.1 * sin(x[2]);
    m(0, 2) = m(2, 0) = Jet(0.12) * x[1];
    m(1, 1) = Jet(-1.0) - 0.1 * x[2] * x[2];
    m(2, 2) = Jet(-1.0) - 0.05 * x[1] * x[1];
    m(1, 2) = m(2, 1) = Jet(0.03) * x[1] * x[2];
    m(3, 3) = Jet(-1.0);
    return m;
  });
}

}  // namespace

TEST_CASE("splitting of the electromagnetic fields") {
  const SplittingStructure s(4, random_christoffel(4, 3, 0.2));
  const MaxwellFieldSet f = random_maxwell(4, 11);
  CHECK(f.F.meta().pd == dim::Faraday);
  CHECK(f.H.meta().twist_x);
  CHECK(wedge(f.F, f.H).meta().pd == dim::A);
  const SplitEmFields sf = split_em(s, f);
  CHECK(sf.e.meta().lie == LieValue::coalg());
  CHECK(sf.h.meta().twist_x);
  CHECK(sf.b.meta().pd == sf.e.meta().pd);
  CHECK(sf.d.meta().pd == dim::Charge);
  const MaxwellFieldSet back = unsplit_em(s, sf);
  for (const auto& p : pts()) {
    CHECK(diff_at(back.F, f.F, p) < 1e-12);
    CHECK(diff_at(back.H, f.H, p) < 1e-12);
    CHECK(diff_at(back.J, f.J, p) < 1e-12);
    CHECK(diff_at(*back.A, *f.A, p) < 1e-12);
  }
  // components: b_ij = F_ij, ẽ_i = F_i0, d_ij = H_ij, h̃_i = H_0i in the adapted frame
  const SplittingStructure nat = SplittingStructure::natural(4);
  const SplitEmFields nf = split_em(nat, f);
  for (const auto& p : pts(3)) {
    const auto F = f.F.value(p), H = f.H.value(p);
    const auto b = nf.b.value(p), e = nf.e.value(p), d = nf.d.value(p), h = nf.h.value(p);
    CHECK(b.at_mask(0b011) == doctest::Approx(F.at_mask(0b0110)));
    CHECK(b.at_mask(0b110) == doctest::Approx(F.at_mask(0b1100)));
    CHECK(e.at_mask(0b001) == doctest::Approx(-F.at_mask(0b0011)));  // F_10 = −F_01
    CHECK(d.at_mask(0b101) == doctest::Approx(H.at_mask(0b1010)));
    CHECK(h.at_mask(0b100) == doctest::Approx(H.at_mask(0b1001)));
  }
  // F = dx∧dy: b = dx∧dy, ẽ = 0
  Form<double> dxdy(meta(4, 2, dim::Faraday));
  dxdy.at_mask(0b0110) = 1.0;
  MaxwellFieldSet g{std::nullopt, constant_field(kB, dxdy), f.H, f.J};
  const SplitEmFields gs = split_em(nat, g);
  CHECK(gs.b.value(pts(1)[0]).at_mask(0b011) == 1.0);
  CHECK(norm_at(gs.e, pts(1)[0]) == 0.0);
}

TEST_CASE("split Maxwell equations") {
  const MaxwellFieldSet f = random_maxwell(4, 21);
  SUBCASE("nonintegrable connection") {
    const SplittingStructure s(4, random_christoffel(4, 8, 0.25));
    const auto rs = maxwell_residuals(s, split_em(s, f));
    CHECK(rs.size() == 7);
    for (const auto& r : rs) CHECK(r.homogeneous());
    CHECK(max_residual(rs, pts()) < 1e-10);
  }
  SUBCASE("natural splitting reduces to plain d") {
    const SplittingStructure s = SplittingStructure::natural(4);
    const SplitEmFields sf = split_em(s, f);
    CHECK(max_residual(maxwell_residuals(s, sf), pts()) < 1e-10);
    for (const auto& p : pts(3)) {
      CHECK(diff_at(s.D(sf.b), exterior_d(sf.b), p) == 0.0);
      CHECK(norm_at(s.chi(), p) == 0.0);
      CHECK(norm_at(s.Omega(), p) == 0.0);
    }
  }
  SUBCASE("residuals detect inconsistent fields") {
    const SplittingStructure s(4, random_christoffel(4, 8, 0.25));
    CHECK(max_residual(maxwell_residuals(s, random_split(300)), pts()) > 1e-3);
  }
}

TEST_CASE("alternative formulation") {
  const SplittingStructure s(4, random_christoffel(4, 14, 0.25));
  const SplittingStructure nat = SplittingStructure::natural(4);
  const MaxwellFieldSet f = random_maxwell(4, 31);
  CHECK(max_residual(maxwell_residuals_alt(s, split_em(s, f)), pts()) < 1e-10);
  // equals the natural equations after the change of connection, also off shell
  const SplitEmFields r = random_split(400);
  const FormPair F = change_connection(s, nat, {r.b, -r.e});
  const FormPair H = change_connection(s, nat, {r.d, r.h});
  const FormPair J = change_connection(s, nat, {r.rho, -r.j});
  SplitEmFields c = r;
  c.a.reset();
  c.phi.reset();
  c.b = F.first;
  c.e = -*F.second;
  c.d = H.first;
  c.h = *H.second;
  c.rho = J.first;
  c.j = -*J.second;
  const auto alt = maxwell_residuals_alt(s, r);
  const auto natr = maxwell_residuals(nat, c);
  REQUIRE(alt.size() == 4);
  for (const auto& p : pts(4))
    for (int i = 0; i < 4; ++i) CHECK(diff_at(alt[i].value, natr[i].value, p) < 1e-12);
  // Γ = 0: identical to the natural equations
  const auto a0 = maxwell_residuals_alt(nat, r);
  const auto n0 = maxwell_residuals(nat, r);
  for (const auto& p : pts(3))
    for (int i = 0; i < 4; ++i) CHECK(diff_at(a0[i].value, n0[i].value, p) < 1e-14);
}

TEST_CASE("proxy Maxwell equations") {
  const double c0 = 1.6;
  const MetricField g = random_metric(4, 41);
  for (int regular = 0; regular < 2; ++regular) {
    const Observer o(regular ? orthogonal_splitting(g) : SplittingStructure(4, random_christoffel(4, 5, 0.15)), g,
                     c0);
    const MaxwellFieldSet f = random_maxwell(4, 51);
    const SplitEmFields pf = proxy_em(o, split_em(o.splitting(), f));
    CHECK(pf.e.meta().lie.is_scalar());
    CHECK(pf.e.meta().pd == dim::U);
    CHECK(pf.h.meta().pd == dim::I);
    CHECK(pf.phi->meta().pd == dim::U);
    const auto pr = maxwell_residuals_proxy(o, pf);
    for (const auto& r : pr) CHECK(r.homogeneous());
    CHECK(max_residual(pr, pts(4)) < 1e-10);
    // off shell: proxy residuals are the proxies of the Lie-valued ones
    const SplitEmFields r = random_split(500);
    const auto lr = maxwell_residuals(o.splitting(), r);
    const auto prr = maxwell_residuals_proxy(o, proxy_em(o, r));
    const FormField scale = mul(scalar_field(kP, [c0](const Coords&) { return Jet(c0); }, dim::Velocity),
                                o.N_inv());
    const bool second[] = {false, true, false, true, false, true, true};
    for (int i = 0; i < 7; ++i) {
      const FormField want = second[i] ? mul(scale, lr[i].value) : lr[i].value;
      for (const auto& p : pts(3)) CHECK(max_abs(want.value(p) - prr[i].value.value(p)) < 1e-10);
    }
  }
}

TEST_CASE("vacuum constitutive relations") {
  const double Z0 = 2.3, c0 = 1.4;
  const MetricField g = random_metric(4, 61);
  const Observer o(orthogonal_splitting(g), g, c0);
  const MaxwellFieldSet f = random_maxwell(4, 71, &g, Z0);
  CHECK(f.H.meta().pd == dim::Charge);
  CHECK(hodge(g, f.F).meta().pd * dim::Z0.inv() == f.H.meta().pd);
  CHECK(dim::Mu0 / dim::Eps0 == dim::Z0.pow(2));
  const SplitEmFields sf = split_em(o.splitting(), f);
  const auto [d, h] = constitutive_regular(o, sf, Z0);
  CHECK(d.meta() == sf.d.meta());
  CHECK(h.meta() == sf.h.meta());
  const SplitEmFields pf = proxy_em(o, sf);
  const FormField eps0 = eps0_field(kP, Z0, c0), mu0 = mu0_field(kP, Z0, c0);
  const FormField mu0_inv = scalar_field(kP, [Z0, c0](const Coords&) { return Jet(c0 / Z0); }, dim::Mu0.inv());
  for (const auto& p : pts()) {
    CHECK(diff_at(d, sf.d, p) < 1e-10);
    CHECK(diff_at(h, sf.h, p) < 1e-10);
    const auto [dc, hc] = constitutive_components(o, sf, Z0, p);
    CHECK(max_abs(dc - sf.d.value(p)) < 1e-10);
    CHECK(max_abs(hc - sf.h.value(p)) < 1e-10);
    CHECK(diff_at(pf.d, mul(eps0, hodge(o.h(), pf.e)), p) < 1e-10);
    CHECK(diff_at(pf.h, mul(mu0_inv, hodge(o.h(), pf.b)), p) < 1e-10);
  }
  CHECK(mu0.meta().pd == dim::Mu0);
  // Euclidean static case
  const MetricField flat(kB, [c0](const Coords&) {
    Mat<Jet> m = Mat<Jet>::identity(4);
    for (int i = 1; i < 4; ++i) m(i, i) = Jet(-1.0);
    m(0, 0) = Jet(c0 * c0);
    return m;
  });
  const Observer of(SplittingStructure::natural(4), flat, c0);
  const MaxwellFieldSet ff = random_maxwell(4, 81, &flat, Z0);
  const SplitEmFields fp = proxy_em(of, split_em(of.splitting(), ff));
  for (const auto& p : pts(3)) {
    CHECK(diff_at(fp.d, mul(eps0, hodge(of.h(), fp.e)), p) < 1e-10);
    CHECK(diff_at(fp.h, mul(mu0_inv, hodge(of.h(), fp.b)), p) < 1e-10);
  }
  // nonregular splittings are refused
  const Observer bad(SplittingStructure::natural(4), g, c0);
  CHECK_THROWS_AS(constitutive_regular(bad, sf, Z0).first.value(pts(1)[0]), MetricError);
}

TEST_CASE("energy-momentum and four-force densities") {
  const SplittingStructure s(4, random_christoffel(4, 91, 0.2));
  const MaxwellFieldSet f = random_maxwell(4, 101);
  const SplitEmFields sf = split_em(s, f);
  const VecPair n{random_vec_field(kP, meta(3, 1), 111), random_vec_field(kP, meta(3, 0, {}, LieValue::alg()), 112)};
  const FormPair direct = split_energy_momentum_direct(s, f, n);
  const FormPair matrix = split_energy_momentum(sf, n);
  const EnergyMomentum t = energy_momentum(sf, n.first, n.second);
  CHECK(t.p->meta().pd == dim::A);
  CHECK(t.w->meta().lie.is_scalar());
  CHECK(t.m->meta().lie == LieValue::coalg());
  CHECK(t.s->meta().lie == LieValue::coalg());
  CHECK(t.p->meta().twist_x);
  // R_n split
  const VecField nv = s.unsplit_vector(n);
  const FormPair R = s.split_form(four_force(f, nv));
  const ForceDensity fd = force_density(sf, n.first, n.second);
  // R_n = dT_n + X_n
  const FormField dT = exterior_d(energy_momentum_4d(f, nv));
  const FormField X = body_force(f, nv);
  for (const auto& p : pts()) {
    CHECK(max_abs(direct.first.value(p) - matrix.first.value(p)) < 1e-10);
    CHECK(max_abs(direct.second->value(p) - matrix.second->value(p)) < 1e-10);
    CHECK(norm_at(R.first, p) == 0.0);
    CHECK(max_abs(R.second->value(p) - (*fd.f + *fd.r).value(p)) < 1e-10);
    CHECK(max_abs(four_force(f, nv).value(p) - (dT + X).value(p)) < 1e-9);
  }
  // F = 0
  const MaxwellFieldSet z{std::nullopt, zero_field<Kind::Form>(kB, f.F.meta()), zero_field<Kind::Form>(kB, f.H.meta()),
                          zero_field<Kind::Form>(kB, f.J.meta())};
  const EnergyMomentum tz = energy_momentum(split_em(s, z), n.first, n.second);
  for (const auto& p : pts(2)) {
    CHECK(norm_at(*tz.p, p) == 0.0);
    CHECK(norm_at(*tz.w, p) == 0.0);
    CHECK(norm_at(*tz.m, p) == 0.0);
    CHECK(norm_at(*tz.s, p) == 0.0);
  }
  // crossed static fields: ẽ = E dx, h̃ = H dy, ℓ̃ = 1 gives s̃ = E·H dx∧dy
  const double E = 1.7, H = -0.6;
  Form<double> e(meta(3, 1, dim::Faraday, LieValue::coalg())), h(meta(3, 1, dim::Charge, LieValue::coalg(), true));
  e.at_mask(1) = E;
  h.at_mask(2) = H;
  SplitEmFields c = sf;
  c.e = constant_field(kP, e);
  c.h = constant_field(kP, h);
  MultiVec<double> one(meta(3, 0, {}, LieValue::alg()));
  one.c[0] = 1.0;
  const auto sc = energy_momentum(c, std::nullopt, constant_field(kP, one)).s->value(pts(1)[0]);
  CHECK(sc.at_mask(0b011) == doctest::Approx(E * H));
  CHECK(sc.at_mask(0b101) == 0.0);
  CHECK(sc.at_mask(0b110) == 0.0);
  // Lagrangian splits as (0, l̃)
  const FormPair l = s.split_form(lagrangian(f));
  CHECK(lagrangian(f).meta().pd == dim::A);
  CHECK(norm_at(l.first, pts(1)[0]) == 0.0);
}

TEST_CASE("theta tensor, body force and the Hodge commutator") {
  const double Z0 = 1.9;
  const MetricField mink(kB, [](const Coords&) {
    Mat<Jet> m = Mat<Jet>::identity(4);
    for (int i = 1; i < 4; ++i) m(i, i) = Jet(-1.0);
    return m;
  });
  const MaxwellFieldSet f = random_maxwell(4, 121, &mink, Z0);
  const VecField dt = constant_field(kB, basis<double, Kind::Vec>(4, 1));
  const VecField xdx(kB, meta(4, 1), [](const Coords& x) {
    MultiVec<Jet> v(meta(4, 1));
    v.at_mask(0b0010) = x[1];
    return v;
  });
  CHECK(is_killing(mink, dt, pts()));
  CHECK_FALSE(is_killing(mink, xdx, pts()));
  const FormField X0 = body_force(f, dt);
  const FormField X1 = body_force(f, xdx);
  const FormField X1v = body_force_vacuum(mink, f.F, xdx, Z0);
  double x1 = 0;
  for (const auto& p : pts()) {
    CHECK(norm_at(X0, p) < 1e-10);
    x1 = std::max(x1, norm_at(X1, p));
    CHECK(diff_at(X1, X1v, p) < 1e-10);
    CHECK(norm_at(trautman_residual(mink, xdx, f.F), p) < 1e-9);
    CHECK(theta_trace(mink, xdx).value(p).c[0] == doctest::Approx(2.0));
  }
  CHECK(x1 > 1e-3);
  // general metric and vector field, all degrees
  const MetricField g = random_metric(4, 131, 0.08);
  const VecField n = random_vec_field(kB, meta(4, 1), 141);
  for (int k = 0; k <= 3; ++k) {
    const FormField a = random_form_field(kB, meta(4, k), 150 + k);
    for (const auto& p : pts(3)) CHECK(norm_at(trautman_residual(g, n, a), p) < 1e-9);
  }
  // Θ = (Θ̄_n κ)(k) for a unit volume form
  const FormField kap = volume_form(g);
  for (const auto& p : pts(3)) {
    const double tb = theta_bar(g, n, kap).value(p).c[0] / kap.value(p).c[0];
    CHECK(tb == doctest::Approx(theta_trace(g, n).value(p).c[0]).epsilon(1e-10));
  }
}

TEST_CASE("energy and momentum balance") {
  const double Z0 = 1.2, c0 = 1.5;
  const MetricField g = stationary_metric();
  const Observer o(orthogonal_splitting(g), g, c0);
  const MaxwellFieldSet f = random_maxwell(4, 161, &g, Z0);
  const SplitEmFields sf = split_em(o.splitting(), f);
  MultiVec<double> one(meta(3, 0, {}, LieValue::alg()));
  one.c[0] = 1.0;
  const VecField l = constant_field(kP, one);
  const VecField k = constant_field(kP, basis<double, Kind::Vec>(3, 0b100));  // ∂_z
  const auto ps = pts();
  const BalanceResiduals b = balance_residuals(o, sf, k, l, ps);
  REQUIRE(b.momentum);
  REQUIRE(b.energy);
  CHECK(b.momentum->homogeneous());
  CHECK(b.energy->homogeneous());
  // proxies
  const SplitEmFields pf = proxy_em(o, sf);
  const BalanceResiduals pb = proxy_balance_residuals(o, pf, k, ps);
  const ProxyEnergyMomentum pt = proxy_energy_momentum(pf, k);
  const FormField ninv = o.N_inv();
  const VecField nl = as_vec0(ninv);
  const EnergyMomentum t = energy_momentum(sf, k, nl);
  const ForceDensity fd = force_density(sf, k, nl);
  auto cN = [&](double pw, const FormField& a) {
    return mul(scalar_field(kP, [c0, pw](const Coords&) { return Jet(std::pow(c0, pw)); }, dim::Velocity.pow(int(pw))),
               mul(ninv, a));
  };
  for (const auto& p : ps) {
    CHECK(norm_at(b.momentum->value, p) < 1e-9);
    CHECK(norm_at(b.energy->value, p) < 1e-9);
    CHECK(norm_at(pb.momentum->value, p) < 1e-9);
    CHECK(norm_at(pb.energy->value, p) < 1e-9);
    // r = c₀²N⁻¹r̃(N⁻¹) = −e∧j and the other proxy definitions
    CHECK(diff_at(pt.r, cN(2, *fd.r), p) < 1e-10);
    CHECK(diff_at(pt.r, -wedge(pf.e, pf.j), p) < 1e-14);
    CHECK(diff_at(pt.w, 1.0 * mul(scalar_field(kP, [c0](const Coords&) { return Jet(c0); }, dim::Velocity), *t.w), p) <
          1e-10);
    CHECK(diff_at(pt.s, cN(2, *t.s), p) < 1e-10);
    CHECK(diff_at(*pt.m, cN(1, *t.m), p) < 1e-10);
    CHECK(diff_at(*pt.f, cN(1, *fd.f), p) < 1e-10);
    CHECK(diff_at(*pt.p, *t.p, p) < 1e-12);
  }
  // a non-Killing field is refused
  const VecField kx = constant_field(kP, basis<double, Kind::Vec>(3, 0b001));
  CHECK_THROWS_AS(balance_residuals(o, sf, kx, std::nullopt, ps), MetricError);
  // time-dependent metric: w is not a Killing field
  const MetricField gt = random_metric(4, 171);
  const Observer ot(orthogonal_splitting(gt), gt, c0);
  CHECK_THROWS_AS(balance_residuals(ot, split_em(ot.splitting(), random_maxwell(4, 3, &gt, Z0)), std::nullopt, l, ps),
                  MetricError);
}

TEST_CASE("Schiff charges and currents in a natural nonregular splitting") {
  const double Z0 = 1.1;
  const MetricField g = random_metric(4, 181);
  const Observer o(SplittingStructure::natural(4), g);
  const auto ps = pts();
  CHECK_FALSE(o.is_regular(ps));
  const MaxwellFieldSet f = random_maxwell(4, 191, &g, Z0);
  const SplitEmFields sf = split_em(o.splitting(), f);
  const SchiffStarFields st = schiff_star_fields(o, sf, Z0);
  CHECK(st.p_S.meta() == sf.d.meta());
  CHECK(st.m_S.meta() == sf.h.meta());
  const auto rs = schiff_residuals(o, sf, st);
  for (const auto& p : ps) {
    CHECK(diff_at(st.p_S, st.p_S_hodge, p) < 1e-10);
    CHECK(diff_at(st.m_S, st.m_S_hodge, p) < 1e-10);
    CHECK(diff_at(st.j_S, exterior_d(st.m_S) + group_derivative(st.p_S), p) < 1e-12);
  }
  CHECK(max_residual(rs, ps) < 1e-9);
  // no shift: no Schiff polarization or magnetization
  const MetricField gd(kB, [g](const Coords& x) {
    Mat<Jet> m = g(x);
    for (int i = 1; i < 4; ++i) m(0, i) = m(i, 0) = Jet(0.0);
    return m;
  });
  const Observer od(SplittingStructure::natural(4), gd);
  const SchiffStarFields s0 = schiff_star_fields(od, split_em(od.splitting(), random_maxwell(4, 7, &gd, Z0)), Z0);
  for (const auto& p : pts(3)) {
    CHECK(norm_at(s0.p_S, p) < 1e-12);
    CHECK(norm_at(s0.m_S, p) < 1e-12);
  }
}

TEST_CASE("dimension audit of the em equations") {
  const SplittingStructure s(4, random_christoffel(4, 2, 0.2));
  const SplitEmFields f = split_em(s, random_maxwell(4, 3));
  for (const auto& r : maxwell_residuals(s, f)) CHECK(r.homogeneous());
  for (const auto& r : maxwell_residuals_alt(s, f)) CHECK(r.homogeneous());
  // an injected summand with the wrong dimension is detected
  ResidualBuilder bad("injected");
  bad.add(s.D(f.b)).sub(retag(wedge(s.Omega(), f.e), LieValue{}, dim::Charge));
  CHECK_FALSE(bad.homogeneous());
  CHECK_THROWS_AS(bad.build(), DimensionError);
}
