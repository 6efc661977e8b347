#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsplit/metric.hpp"
#include "rsplit/random_fields.hpp"

using namespace rsplit;

namespace {

const Chart kB{4, false};
const Chart kP{4, true};

Meta meta(int n, int k, LieValue lie = {}) {
  Meta m;
  m.n = n;
  m.k = k;
  m.lie = lie;
  return m;
}

std::vector<Point> pts(int n = 8, std::uint64_t seed = 3) {
  return random_points({-0.7, -0.7, -0.7, -0.7}, {0.7, 0.7, 0.7, 0.7}, n, seed);
}

template <Kind K>
double diff_at(const Field<K>& a, const Field<K>& b, const Point& p) {
  return max_abs(a.value(p) - b.value(p));
}

template <class P>
double pair_diff(const P& a, const P& b, const Point& p) {
  double d = diff_at(a.first, b.first, p);
  REQUIRE(bool(a.second) == bool(b.second));
  if (a.second) d = std::max(d, diff_at(*a.second, *b.second, p));
  return d;
}

FormPair random_pair(int k, std::uint64_t seed, LieValue second_lie = LieValue::coalg()) {
  FormPair p{random_form_field(kP, meta(3, k), seed), std::nullopt};
  if (k >= 1) p.second = random_form_field(kP, meta(3, k - 1, second_lie), seed + 100);
  if (k == 4) p.first = zero_field<Kind::Form>(kP, meta(3, 4));
  return p;
}

VecPair random_vpair(int k, std::uint64_t seed, LieValue second_lie = LieValue::alg()) {
  VecPair p{random_vec_field(kP, meta(3, k), seed), std::nullopt};
  if (k >= 1) p.second = random_vec_field(kP, meta(3, k - 1, second_lie), seed + 100);
  if (k == 4) p.first = zero_field<Kind::Vec>(kP, meta(3, 4));
  return p;
}

// γ^*_{μ…} = (1/k!) γ^{ν…} √|g| ε_{ν…μ…} with explicit index loops.
Form<double> hodge_oracle(const Mat<double>& g, const Form<double>& f) {
  const int n = g.n, k = f.m.k;
  const Mat<double> gi = inverse(g);
  const double vol = std::sqrt(std::abs(det(g)));
  auto comp = [&](std::vector<int> idx) {
    // fully antisymmetric component γ_{idx}
    std::vector<int> s = idx;
    int sign = 1;
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = i + 1; j < s.size(); ++j) {
        if (s[i] == s[j]) return 0.0;
        if (s[i] > s[j]) sign = -sign;
      }
    int mask = 0;
    for (int x : s) mask |= 1 << x;
    return sign * f.at_mask(mask);
  };
  auto levi = [&](const std::vector<int>& idx) {
    int sign = 1;
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = i + 1; j < idx.size(); ++j) {
        if (idx[i] == idx[j]) return 0;
        if (idx[i] > idx[j]) sign = -sign;
      }
    return sign;
  };
  Meta m = f.m;
  m.k = n - k;
  Form<double> r(m);
  double kf = 1;
  for (int i = 2; i <= k; ++i) kf *= i;
  for (int q = 0; q < r.size(); ++q) {
    std::vector<int> mu;
    for (int a = 0; a < n; ++a)
      if (r.mask(q) & (1 << a)) mu.push_back(a);
    double acc = 0;
    std::vector<int> nu(k, 0);
    std::vector<int> rho(k, 0);
    const int total = int(std::pow(n, k));
    for (int a = 0; a < total; ++a) {
      int t = a;
      for (int i = 0; i < k; ++i) nu[i] = t % n, t /= n;
      std::vector<int> full = nu;
      full.insert(full.end(), mu.begin(), mu.end());
      const int e = levi(full);
      if (!e) continue;
      // γ^{ν…} = g^{νρ}… γ_{ρ…}
      double up = 0;
      for (int b = 0; b < total; ++b) {
        int s = b;
        double w = 1;
        for (int i = 0; i < k; ++i) {
          rho[i] = s % n, s /= n;
          w *= gi(nu[i], rho[i]);
        }
        if (w != 0) up += w * comp(rho);
      }
      acc += up * e;
    }
    r.c[q] = acc * vol / kf;
  }
  return r;
}

}  // namespace

TEST_CASE("riesz operator and hodge oracle") {
  const MetricField g = random_metric(4, 5);
  g.require_lorentzian(pts(20));
  for (int k = 0; k <= 4; ++k) {
    const auto v = random_vec_field(kB, meta(4, k), 30 + k);
    const auto back = riesz_inv(g, riesz(g, v));
    const auto f = random_form_field(kB, meta(4, k), 40 + k);
    const auto hh = hodge(g, hodge(g, f));
    const double sign = -((k * (4 - k)) % 2 ? -1.0 : 1.0);
    for (const auto& p : pts(4)) {
      CHECK(diff_at(v, back, p) < 1e-11);
      const auto o = hodge_oracle(g.value(p), f.value(p));
      double d = 0;
      for (int q = 0; q < o.size(); ++q) d = std::max(d, std::abs(hodge(g, f).value(p).c[q] - o.c[q]));
      CHECK(d < 1e-11);
      const auto a = hh.value(p), b = f.value(p);
      for (int q = 0; q < b.size(); ++q) CHECK(a.c[q] == doctest::Approx(sign * b.c[q]).epsilon(1e-10));
    }
    CHECK(riesz(g, v).meta().pd == dim::L.pow(2 * k));
    CHECK(hodge(g, f).meta().pd == dim::L.pow(4 - 2 * k));
    CHECK(hodge(g, f).meta().twist_x);
  }
  // Euclidean 3-D: *dx = dy∧dz, *∘* = +Id.
  const SymField e({4, true}, [](const Coords&) { return Mat<Jet>::identity(3); });
  const auto dx = constant_field(kP, basis<double, Kind::Form>(3, 1));
  const auto s = hodge(e, dx).value({0, 0, 0, 0});
  CHECK(s.at_mask(6) == doctest::Approx(1.0));
  CHECK(s.at_mask(3) == 0.0);
  CHECK(s.at_mask(5) == 0.0);
  const auto one = constant_field(kP, basis<double, Kind::Form>(3, 0));
  CHECK(hodge(e, hodge(e, one)).value({0, 0, 0, 0}).c[0] == doctest::Approx(1.0));
  // singular metric
  const MetricField z(kB, [](const Coords&) { return Mat<Jet>(4); });
  CHECK_THROWS_AS(hodge(z, random_form_field(kB, meta(4, 1), 1)).value({0, 0, 0, 0}), MetricError);
  CHECK_FALSE(nondegenerate_at(z, {0, 0, 0, 0}));
}

TEST_CASE("observer metric, lapse and shift") {
  const MetricField g = random_metric(4, 7);
  SUBCASE("regular") {
    const Observer o(orthogonal_splitting(g), g);
    CHECK(o.is_regular(pts()));
    const SymField hs = o.h_sigma(), hp = o.h_pi();
    hs.require_riemannian(pts());
    for (const auto& p : pts()) {
      CHECK(max_abs(values((hs - hp).jet_at(p))) < 1e-12);
      CHECK(o.xi().value(p).c[0] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(max_abs(o.shift().value(p)) < 1e-12);
      CHECK(diff_at(o.w_dag(), o.splitting().w(), p) < 1e-12);
      CHECK(diff_at(o.omega_dag(), o.splitting().omega(), p) < 1e-12);
    }
    CHECK(classify_metric(o, pts()).regular);
  }
  SUBCASE("nonregular") {
    const Observer o(SplittingStructure(4, random_christoffel(4, 12, 0.15)), g);
    const auto& s = o.splitting();
    CHECK_FALSE(o.is_regular(pts()));
    o.h_sigma().require_riemannian(pts());
    o.h_pi().require_riemannian(pts());
    const VecField wd = o.w_dag();
    const FormField od = o.omega_dag();
    const FormField nu = o.shift_form();
    const VecField Nv = o.shift();
    for (const auto& p : pts()) {
      // ω(w†) = ω†(w) = 1
      CHECK(contract(wd, s.omega()).value(p).c[0] == doctest::Approx(1.0));
      CHECK(contract(s.w(), od).value(p).c[0] == doctest::Approx(1.0));
      // w = ΣN⃗ + w†, ω = Π*ν + ω†
      CHECK(diff_at(s.w(), s.sigma_push(Nv) + wd, p) < 1e-12);
      CHECK(diff_at(s.omega(), s.pi_star(nu) + od, p) < 1e-12);
      // |w†| = N†, |ω†| = N⁻¹
      const auto G = g.value(p);
      const auto wv = wd.value(p);
      double ww = 0, oo = 0;
      const auto gi = inverse(G);
      const auto ov = od.value(p);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          ww += G(a, b) * wv.c[a] * wv.c[b];
          oo += gi(a, b) * ov.c[a] * ov.c[b];
        }
      CHECK(std::sqrt(ww) == doctest::Approx(o.N_dag().value(p).c[0]));
      CHECK(std::sqrt(oo) == doctest::Approx(o.N_inv().value(p).c[0]));
      // ν = (N⁻¹N⁻¹) h_Σ(N⃗) = (N⁻†N⁻†) h_Π(N⃗)
      const FormField via_s = mul(o.N_inv(), mul(o.N_inv(), riesz(o.h_sigma(), Nv)));
      const FormField via_p = mul(o.N_inv_dag(), mul(o.N_inv_dag(), riesz(o.h_pi(), Nv)));
      CHECK(max_abs(nu.value(p) - retag(via_s, nu.meta().lie, nu.meta().pd).value(p)) < 1e-12);
      CHECK(max_abs(nu.value(p) - retag(via_p, nu.meta().lie, nu.meta().pd).value(p)) < 1e-12);
      // N N⁻¹ = 1; ξ = N N⁻† stays within (0, 1)
      CHECK(o.N().value(p).c[0] * o.N_inv().value(p).c[0] == doctest::Approx(1.0));
      const double xi = o.xi().value(p).c[0];
      CHECK(xi > 0.0);
      CHECK(xi < 1.0);
      CHECK(xi == doctest::Approx(o.N().value(p).c[0] / o.N_dag().value(p).c[0]));
    }
    CHECK_FALSE(classify_metric(o, pts()).regular);
  }
  SUBCASE("space-like fundamental field") {
    const MetricField bad(kB, [](const Coords&) {
      Mat<Jet> m = Mat<Jet>::identity(4);
      m(0, 0) = Jet(-1.0);
      return m;
    });
    const Observer o(SplittingStructure::natural(4), bad);
    CHECK_THROWS_AS(o.N().value({0, 0, 0, 0}), MetricError);
    CHECK_THROWS_AS(bad.require_lorentzian(pts(1)), MetricError);
  }
}

TEST_CASE("regular splitting of Riesz and Hodge operators") {
  const MetricField g = random_metric(4, 9);
  const Observer o(orthogonal_splitting(g), g);
  for (int k = 0; k <= 4; ++k) {
    const VecPair v = random_vpair(k, 60 + k);
    const FormPair a = random_pair(k, 70 + k);
    const auto r1 = o.split_riesz_regular(v), r2 = o.riesz_direct(v);
    const auto i1 = o.split_riesz_inv_regular(a), i2 = o.riesz_inv_direct(a);
    const auto h1 = o.split_hodge_regular(a), h2 = o.hodge_direct(a);
    for (const auto& p : pts(4)) {
      CHECK(pair_diff(r1, r2, p) < 1e-10);
      CHECK(pair_diff(i1, i2, p) < 1e-10);
      CHECK(pair_diff(h1, h2, p) < 1e-10);
    }
  }
  // S⁻*κ₄ = (0, Nκ₃)
  const FormPair kv = o.splitting().split_form(o.kappa4());
  const FormField nk = mul(o.N(), o.kappa_sigma());
  for (const auto& p : pts(4)) {
    CHECK(max_abs(kv.first.value(p)) == 0.0);
    CHECK(diff_at(*kv.second, nk, p) < 1e-12);
  }
  // *₃ κ₃ = 1
  CHECK(hodge(o.h(), o.kappa_sigma()).value(pts(1)[0]).c[0] == doctest::Approx(1.0));
  // Nonregular input to the regular formulas.
  const Observer bad(SplittingStructure(4, random_christoffel(4, 3, 0.2)), g);
  CHECK_THROWS_AS(bad.split_hodge_regular(random_pair(2, 1)).first.value(pts(1)[0]), MetricError);
}

TEST_CASE("nonregular splitting of Riesz and Hodge operators") {
  const MetricField g = random_metric(4, 11);
  const Observer o(SplittingStructure(4, random_christoffel(4, 21, 0.15)), g);
  using B = Observer::Basis;
  for (int k = 0; k <= 4; ++k) {
    const VecPair v = random_vpair(k, 80 + k);
    const FormPair a = random_pair(k, 90 + k);
    const auto rd = o.riesz_direct(v);
    const auto id = o.riesz_inv_direct(a);
    const auto hd = o.hodge_direct(a);
    for (B b : {B::Sigma, B::Pi}) {
      const auto r = o.split_riesz_nonregular(v, b);
      const auto i = o.split_riesz_inv_nonregular(a, b);
      const auto h = o.split_hodge_nonregular(a, b);
      for (const auto& p : pts(4)) {
        CAPTURE(k);
        CAPTURE(int(b));
        CHECK(pair_diff(r, rd, p) < 1e-10);
        CHECK(pair_diff(i, id, p) < 1e-10);
        CHECK(pair_diff(h, hd, p) < 1e-10);
      }
    }
  }
  // S⁻*κ₄ = (0, N†κ_Σ) = (0, Nκ_Π)
  const FormPair kv = o.splitting().split_form(o.kappa4());
  for (const auto& p : pts(4)) {
    CHECK(diff_at(*kv.second, mul(o.N_dag(), o.kappa_sigma()), p) < 1e-12);
    CHECK(diff_at(*kv.second, mul(o.N(), o.kappa_pi()), p) < 1e-12);
  }
  // In the regular limit the nonregular formulas reduce to the regular ones.
  const Observer r(orthogonal_splitting(g), g);
  const FormPair a = random_pair(2, 5);
  for (const auto& p : pts(4)) {
    CHECK(pair_diff(r.split_hodge_nonregular(a, B::Sigma), r.split_hodge_regular(a), p) < 1e-12);
    CHECK(pair_diff(r.split_hodge_nonregular(a, B::Pi), r.split_hodge_regular(a), p) < 1e-12);
  }
}

TEST_CASE("four-velocity and proper-time derivative") {
  const MetricField g = random_metric(4, 13);
  const double c0 = 2.5;
  for (int regular = 0; regular < 2; ++regular) {
    const Observer o(regular ? orthogonal_splitting(g) : SplittingStructure(4, random_christoffel(4, 2, 0.15)), g, c0);
    const VecField u = o.u();
    const FormField mu = o.mu();
    CHECK(u.meta().pd == dim::T.inv());
    CHECK(mu.meta().pd == dim::L.pow(2) * dim::T.inv());
    CHECK(u.meta().lie.is_scalar());
    for (const auto& p : pts(5)) {
      CHECK(std::sqrt(pairing(mu.value(p), u.value(p))) == doctest::Approx(c0));
    }
    for (int k = 0; k <= 3; ++k) {
      const auto a = random_form_field(kP, meta(3, k), 140 + k);
      for (const auto& p : pts(4)) CHECK(diff_at(o.d_tau(a), o.d_tau_lie(a), p) < 1e-10);
    }
  }
}

TEST_CASE("kinematic parameters") {
  const double c0 = 1.7;
  SUBCASE("random regular, time-dependent") {
    const MetricField g = random_metric(4, 17, 0.08);
    const Observer o(orthogonal_splitting(g), g, c0);
    const Kinematics a = kinematics(o), b = kinematics_from_structure(o);
    CHECK(a.delta.meta() == b.delta.meta());
    CHECK(a.eta.meta() == b.eta.meta());
    CHECK(a.delta.meta().lie == LieValue::coalg());
    CHECK(a.delta.meta().pd == dim::L.pow(2) * dim::T.inv());
    CHECK(a.lambda.pd() == b.lambda.pd());
    const FormField k3 = o.kappa_sigma();
    for (const auto& p : pts(5)) {
      CHECK(diff_at(a.delta, b.delta, p) < 1e-10);
      CHECK(diff_at(a.eta, b.eta, p) < 1e-10);
      CHECK(max_abs(values((a.lambda - b.lambda).jet_at(p))) < 1e-10);
      CHECK(max_abs(values((a.sigma - b.sigma).jet_at(p))) < 1e-10);
      CHECK(trace(o.h(), a.sigma).value(p).c[0] == doctest::Approx(0.0).epsilon(1e-12));
      // ∂_τ κ₃ = λ κ₃
      CHECK(max_abs(o.d_tau(k3).value(p) - retag(mul(a.lambda_scalar, k3), o.d_tau(k3).meta().lie,
                                                  o.d_tau(k3).meta().pd).value(p)) < 1e-10);
      // (2η, δ̃) = S⁻* dμ
      const FormPair dm = o.splitting().split_form(exterior_d(o.mu()));
      CHECK(diff_at(2.0 * a.eta, dm.first, p) < 1e-10);
      CHECK(diff_at(a.delta, *dm.second, p) < 1e-10);
    }
  }
  SUBCASE("expanding metric h = exp(2at) δ") {
    const double A = 0.3, L = 1.4;
    const MetricField g(kB, [L, A](const Coords& x) {
      Mat<Jet> m(4);
      m(0, 0) = Jet(L * L);
      for (int i = 1; i < 4; ++i) m(i, i) = -exp(2.0 * A * x[0]);
      return m;
    });
    const Observer o(SplittingStructure::natural(4), g, c0);
    const Kinematics k = kinematics(o);
    for (const auto& p : pts(4)) {
      // λ = 3a · c₀/L since ∂_τ = c₀N⁻¹∂_t and N = L
      CHECK(k.lambda_scalar.value(p).c[0] == doctest::Approx(3 * A * c0 / L));
      CHECK(max_abs(values(k.sigma.jet_at(p))) < 1e-12);
      CHECK(max_abs(k.delta.value(p)) < 1e-12);
      CHECK(max_abs(k.eta.value(p)) < 1e-12);
    }
    const auto f = classify_metric(o, pts());
    CHECK(f.regular);
    CHECK(f.metric);
    CHECK(f.standard);
    CHECK_FALSE(f.stationary);
  }
}

TEST_CASE("stationarity equivalence for regular splittings") {
  // time-independent metric with nonzero g0i and x-dependent lapse
  const MetricField g(kB, [](const Coords& x) {
    Mat<Jet> m(4);
    m(0, 0) = 1.2 + 0.2 * sin(x[1]) + 0.1 * x[2] * x[2];
    m(0, 2) = m(2, 0) = 0.15 * x[1];
    m(0, 3) = m(3, 0) = 0.1 * cos(x[2]);
    for (int i = 1; i < 4; ++i) m(i, i) = Jet(-1.0) - 0.1 * x[i] * x[i];
    m(1, 2) = m(2, 1) = Jet(0.05) * x[3];
    return m;
  });
  const Observer o(orthogonal_splitting(g), g);
  auto conditions = [&](const Observer& ob) {
    bool principal = true, h_static = true, lapse_static = true, killing = true;
    const auto chi = ob.splitting().chi();
    const auto dh = group_derivative(ob.h());
    const auto dn = ob.splitting().dG(ob.N_inv());
    const auto lw = ob.lie_w_g();
    for (const auto& p : pts()) {
      principal = principal && max_abs(chi.value(p)) < 1e-12;
      h_static = h_static && max_abs(values(dh.jet_at(p))) < 1e-12;
      lapse_static = lapse_static && max_abs(dn.value(p)) < 1e-12;
      killing = killing && max_abs(values(lw.jet_at(p))) < 1e-12;
    }
    return std::pair{principal && h_static && lapse_static, killing};
  };
  auto [a, b] = conditions(o);
  CHECK(a);
  CHECK(b);
  // time-dependent regular case: both fail
  const MetricField gt(kB, [g](const Coords& x) {
    Mat<Jet> m = g(x);
    m(1, 1) = m(1, 1) * exp(0.2 * x[0]);
    m(0, 2) = m(2, 0) = m(0, 2) * (1.0 + 0.3 * x[0]);
    return m;
  });
  const Observer ot(orthogonal_splitting(gt), gt);
  auto [c, d] = conditions(ot);
  CHECK_FALSE(c);
  CHECK_FALSE(d);
  // δ̃ = −c₀DN when χ = 0
  const Kinematics k = kinematics(o);
  const FormField dn = -1.0 * o.splitting().D(o.N());
  for (const auto& p : pts(4)) CHECK(max_abs(k.delta.value(p) - retag(dn, k.delta.meta().lie, k.delta.meta().pd).value(p)) < 1e-10);
}

TEST_CASE("proxies") {
  const double c0 = 1.3;
  const MetricField g = random_metric(4, 23);
  const Observer o(orthogonal_splitting(g), g, c0);
  const Observer on(SplittingStructure(4, random_christoffel(4, 31, 0.15)), g, c0);
  using B = Observer::Basis;
  for (int k = 0; k <= 3; ++k) {
    const FormPair a = o.proxy_forms(random_pair(k, 200 + k));
    for (const auto& p : pts(3)) {
      CHECK(pair_diff(o.proxy_forms(o.unproxy_forms(a)), a, p) < 1e-12);
      CHECK(pair_diff(o.proxy_split_d(a), o.proxy_split_d_direct(a), p) < 1e-10);
      CHECK(pair_diff(on.proxy_split_d(a), on.proxy_split_d_direct(a), p) < 1e-10);
    }
    if (k >= 1) CHECK(a.second->meta().pd == dim::T.inv());
  }
  // (2η̄, δ̄) = (P S)⁻* dμ
  const FormPair dm = o.proxy_forms(o.splitting().split_form(exterior_d(o.mu())));
  for (const auto& p : pts(3)) {
    CHECK(diff_at(o.eta2_bar(), dm.first, p) < 1e-10);
    CHECK(diff_at(o.delta_bar(), *dm.second, p) < 1e-10);
  }
  // operator splittings
  for (const Observer* ob : {&o, &on}) {
    const auto& s = ob->splitting();
    const VecPair v = ob->proxy_vectors(random_vpair(1, 300));
    const VecField vv = s.unsplit_vector(ob->unproxy_vectors(v));
    for (int k = 0; k <= 3; ++k) {
      const FormPair a = ob->proxy_forms(random_pair(k, 310 + k));
      const FormField af = s.unsplit_form(ob->unproxy_forms(a));
      const FormPair gm = ob->proxy_forms(random_pair(1, 330));
      const FormField gf = s.unsplit_form(ob->unproxy_forms(gm));
      const FormPair lie_direct = ob->proxy_forms(s.split_form(lie_derivative(vv, af)));
      const FormPair wedge_direct = ob->proxy_forms(s.split_form(wedge(gf, af)));
      for (const auto& p : pts(3)) {
        CHECK(pair_diff(ob->proxy_lie(v, a), lie_direct, p) < 1e-9);
        CHECK(pair_diff(ob->proxy_wedge(gm, a), wedge_direct, p) < 1e-10);
        if (k >= 1) {
          const FormPair contract_direct = ob->proxy_forms(s.split_form(contract(vv, af)));
          CHECK(pair_diff(ob->proxy_contract(v, a), contract_direct, p) < 1e-10);
        }
      }
    }
  }
  // N constant, Γ = 0: proxy matrix [[d, 0], [∂_τ, −d]]
  const MetricField flat(kB, [](const Coords&) {
    Mat<Jet> m = Mat<Jet>::identity(4);
    m(0, 0) = Jet(4.0);
    for (int i = 1; i < 4; ++i) m(i, i) = Jet(-1.0);
    return m;
  });
  const Observer of(SplittingStructure::natural(4), flat, c0);
  for (const auto& p : pts(3)) {
    CHECK(max_abs(of.delta_bar().value(p)) == 0.0);
    CHECK(max_abs(of.eta2_bar().value(p)) == 0.0);
  }
  // metric operators on proxies
  auto direct_riesz = [](const Observer& ob, const VecPair& v) {
    return ob.proxy_forms(ob.riesz_direct(ob.unproxy_vectors(v)));
  };
  auto direct_riesz_inv = [](const Observer& ob, const FormPair& a) {
    return ob.proxy_vectors(ob.riesz_inv_direct(ob.unproxy_forms(a)));
  };
  auto direct_hodge = [](const Observer& ob, const FormPair& a) {
    return ob.proxy_forms(ob.hodge_direct(ob.unproxy_forms(a)));
  };
  for (int k = 0; k <= 4; ++k) {
    const VecPair v = o.proxy_vectors(random_vpair(k, 400 + k));
    const FormPair a = o.proxy_forms(random_pair(k, 410 + k));
    const VecPair vn = on.proxy_vectors(random_vpair(k, 400 + k));
    const FormPair an = on.proxy_forms(random_pair(k, 410 + k));
    for (const auto& p : pts(3)) {
      CAPTURE(k);
      CHECK(pair_diff(o.proxy_riesz_regular(v), direct_riesz(o, v), p) < 1e-10);
      CHECK(pair_diff(o.proxy_hodge_regular(a), direct_hodge(o, a), p) < 1e-10);
      for (B b : {B::Sigma, B::Pi}) {
        CAPTURE(int(b));
        CHECK(pair_diff(on.proxy_riesz_nonregular(vn, b), direct_riesz(on, vn), p) < 1e-10);
        CHECK(pair_diff(on.proxy_riesz_inv_nonregular(an, b), direct_riesz_inv(on, an), p) < 1e-10);
        CHECK(pair_diff(on.proxy_hodge_nonregular(an, b), direct_hodge(on, an), p) < 1e-10);
      }
    }
  }
}
