#include <doctest.h>

#include <cmath>

#include "rsplit/random_fields.hpp"
#include "rsplit/splitting.hpp"

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

std::vector<Point> pts(int n = 15, std::uint64_t seed = 1) {
  return random_points({-0.8, -0.8, -0.8, -0.8}, {0.8, 0.8, 0.8, 0.8}, n, seed);
}

template <Kind K>
double diff_at(const Field<K>& a, const Field<K>& b, const Point& p) {
  return max_abs(a.value(p) - b.value(p));
}

double pair_diff(const FormPair& a, const FormPair& b, const Point& p) {
  double d = diff_at(a.first, b.first, p);
  REQUIRE(bool(a.second) == bool(b.second));
  if (a.second) d = std::max(d, diff_at(*a.second, *b.second, p));
  return d;
}

FormPair random_pair(int k, std::uint64_t seed) {
  FormPair p{random_form_field(kP, meta(3, k), seed), std::nullopt};
  if (k >= 1) p.second = random_form_field(kP, meta(3, k - 1, LieValue::coalg()), seed + 1000);
  return p;
}

}  // namespace

TEST_CASE("parametric maps and splitting bijection") {
  SplittingStructure s(4, random_christoffel(4, 42));
  // Σ*(dx⁰) = −Γ
  auto dx0 = constant_field(kB, basis<double, Kind::Form>(4, 1));
  for (const auto& p : pts()) {
    auto v = s.sigma_star(dx0).value(p);
    auto g = s.gamma().value(p);
    for (int i = 0; i < 3; ++i) CHECK(v.c[i] == doctest::Approx(-g.c[i]).epsilon(1e-14));
    // ⟨ω, w⟩ = 1
    CHECK(contract(s.w(), s.omega()).value(p).c[0] == doctest::Approx(1.0));
    auto unit = *s.split_form(s.omega()).second;
    CHECK(unit.meta().lie.is_tensor());
    CHECK(unit.value(p).c[0] == doctest::Approx(1.0));
  }
  for (int k = 0; k <= 3; ++k) {
    auto a = random_form_field(kP, meta(3, k), 10 + k);
    auto v = random_vec_field(kP, meta(3, k), 20 + k);
    for (const auto& p : pts(5)) {
      CHECK(diff_at(s.sigma_star(s.pi_star(a)), a, p) < 1e-13);
      CHECK(diff_at(s.pi_push(s.sigma_push(v)), v, p) < 1e-13);
    }
  }
  for (int k = 0; k <= 4; ++k) {
    auto g = random_form_field(kB, meta(4, k), 30 + k);
    auto back = s.unsplit_form(s.split_form(g));
    auto pr = random_pair(k, 40 + k);
    auto v = random_vec_field(kB, meta(4, k), 50 + k);
    for (const auto& p : pts(5)) {
      CHECK(diff_at(back, g, p) < 1e-12);
      if (k <= 3) CHECK(pair_diff(s.split_form(s.unsplit_form(pr)), pr, p) < 1e-12);
      CHECK(diff_at(s.unsplit_vector(s.split_vector(v)), v, p) < 1e-12);
    }
  }
  // natural split of dx⁰ is (0, 1⊗ε)
  auto n = SplittingStructure::natural(4);
  auto sp = n.split_form(dx0);
  CHECK(max_abs(sp.first.value({})) == 0.0);
  CHECK(sp.second->value({}).c[0] == 1.0);
  CHECK(sp.second->meta().lie == LieValue::coalg());
}

TEST_CASE("horizontal and vertical maps") {
  SplittingStructure s(4, random_christoffel(4, 3));
  for (int k = 1; k <= 3; ++k) {
    auto v = random_vec_field(kB, meta(4, k), 70 + k);
    for (const auto& p : pts(5)) {
      CHECK(max_abs(s.hor(v).value(p) + s.ver(v).value(p) - v.value(p)) < 1e-13);
      CHECK(diff_at(s.hor(s.hor(v)), s.hor(v), p) < 1e-13);
      CHECK(diff_at(s.hor(v), s.sigma_push(s.pi_push(v)), p) < 1e-13);
    }
  }
  for (const auto& p : pts(3)) {
    CHECK(diff_at(s.ver(s.w()), s.w(), p) == 0.0);
    CHECK(max_abs(s.hor(s.w()).value(p)) == 0.0);
  }
}

TEST_CASE("split exterior derivative three routes") {
  std::vector<SplittingStructure> ss{SplittingStructure::natural(4), SplittingStructure(4, random_christoffel(4, 5)),
                                     SplittingStructure(4, random_christoffel(4, 6, 0.6))};
  for (const auto& s : ss)
    for (int k = 0; k <= 3; ++k) {
      auto pr = random_pair(k, 200 + k);
      auto m = s.split_d(pr), dct = s.split_d_direct(pr), f = s.split_d_factorized(pr);
      for (const auto& p : pts(6)) {
        CHECK(pair_diff(m, dct, p) < 1e-10);
        CHECK(pair_diff(m, f, p) < 1e-10);
      }
    }
  // Γ = 0 and β̃ = 0: (dα, ∂_G α)
  auto n = SplittingStructure::natural(4);
  auto a = random_form_field(kP, meta(3, 1), 9);
  auto r = n.split_d({a, random_form_field(kP, meta(3, 0, LieValue::coalg()), 0) - random_form_field(kP, meta(3, 0, LieValue::coalg()), 0)});
  for (const auto& p : pts(3)) {
    CHECK(diff_at(r.first, exterior_d(a), p) < 1e-13);
    CHECK(diff_at(*r.second, group_derivative(a), p) < 1e-13);
  }
}

TEST_CASE("operator identities") {
  SplittingStructure s(4, random_christoffel(4, 17, 0.5));
  auto chi = s.chi(), Om = s.Omega();
  auto [b1, b2] = s.bianchi_residuals();
  // Ω = dΓ − Γ∧χ and (Ω, χ) = S⁻* dω
  auto alt = exterior_d(s.gamma()) - wedge(s.gamma(), chi);
  auto sdw = s.split_form(exterior_d(s.omega()));
  for (int k = 0; k <= 2; ++k) {
    auto a = random_form_field(kP, meta(3, k), 300 + k);
    auto comm = s.D(s.dG(a)) - s.dG(s.D(a));
    auto rhs = wedge(chi, s.dG(a));
    auto d2 = s.D(s.D(a));
    auto rhs2 = -wedge(Om, s.dG(a));
    for (const auto& p : pts(6)) {
      CHECK(diff_at(comm, rhs, p) < 1e-10);
      CHECK(diff_at(d2, rhs2, p) < 1e-10);
    }
    // dual-valued forms: (D − ε_χ)² = −∂_G∘ε_Ω = 0 and [D, ε_Ω] = −ε_Ω∘ε_χ
    auto b = random_form_field(kP, meta(3, k, LieValue::coalg()), 400 + k);
    auto Dm = [&](const FormField& f) { return s.D(f) - wedge(chi, f); };
    auto lhs3 = s.D(wedge(Om, b)) - wedge(Om, s.D(b));
    auto rhs3 = -wedge(Om, wedge(chi, b));
    for (const auto& p : pts(4)) {
      if (k <= 1) CHECK(max_abs(Dm(Dm(b)).value(p) + s.dG(wedge(Om, b)).value(p)) < 1e-10);
      if (k == 0) CHECK(diff_at(lhs3, rhs3, p) < 1e-10);
    }
  }
  for (const auto& p : pts(10)) {
    CHECK(max_abs(b1.value(p)) < 1e-10);
    CHECK(max_abs(b2.value(p)) < 1e-10);
    CHECK(diff_at(alt, Om, p) < 1e-12);
    CHECK(diff_at(sdw.first, Om, p) < 1e-12);
    CHECK(diff_at(*sdw.second, chi, p) < 1e-12);
    auto C = s.anholonomity(p);
    auto cv = chi.value(p);
    auto ov = Om.value(p);
    for (int j = 1; j < 4; ++j) {
      CHECK(C[0][j] == doctest::Approx(cv.c[j - 1]).epsilon(1e-12));
      for (int i = 1; i < 4; ++i)
        if (i < j) CHECK(C[i][j] == doctest::Approx(ov.at_mask((1 << (i - 1)) | (1 << (j - 1)))).epsilon(1e-12));
    }
  }
  // Γ = t·x dx ⊗ e → χ = x dx
  Meta gm = meta(3, 1, LieValue::alg());
  SplittingStructure tx(4, FormField(kP, gm, [gm](const Coords& x) {
                          Form<Jet> f(gm);
                          f.c[0] = x[0] * x[1];
                          return f;
                        }));
  auto cv = tx.chi().value({0.7, 0.4, 0, 0});
  CHECK(cv.c[0] == doctest::Approx(0.4));
  CHECK(tx.chi().meta().lie.is_tensor());
}

TEST_CASE("operator splittings of contraction, exterior product and Lie derivative") {
  SplittingStructure s(4, random_christoffel(4, 23, 0.4));
  for (int kv = 1; kv <= 2; ++kv)
    for (int kg = kv; kg <= 3; ++kg) {
      auto v = random_vec_field(kB, meta(4, kv), 500 + kv);
      auto g = random_form_field(kB, meta(4, kg), 600 + kg);
      auto direct = s.split_form(contract(v, g));
      auto mat = s.split_contract(s.split_vector(v), s.split_form(g));
      for (const auto& p : pts(4)) CHECK(pair_diff(direct, mat, p) < 1e-10);
    }
  for (int ka = 0; ka <= 2; ++ka)
    for (int kg = 0; kg + ka <= 4; ++kg) {
      auto a = random_form_field(kB, meta(4, ka), 700 + ka);
      auto g = random_form_field(kB, meta(4, kg), 800 + kg);
      auto direct = s.split_form(wedge(a, g));
      auto mat = s.split_wedge(s.split_form(a), s.split_form(g));
      for (const auto& p : pts(4)) CHECK(pair_diff(direct, mat, p) < 1e-10);
    }
  auto v = random_vec_field(kB, meta(4, 1), 900);
  for (int kg = 0; kg <= 3; ++kg) {
    auto g = random_form_field(kB, meta(4, kg), 910 + kg);
    auto direct = s.split_form(lie_derivative(v, g));
    auto mat = s.split_lie(s.split_vector(v), s.split_form(g));
    for (const auto& p : pts(4)) CHECK(pair_diff(direct, mat, p) < 1e-10);
  }
}

TEST_CASE("change of connection") {
  SplittingStructure a(4, random_christoffel(4, 1)), b(4, random_christoffel(4, 2));
  auto pr = random_pair(2, 77);
  auto round = change_connection(b, a, change_connection(a, b, pr));
  auto same = change_connection(a, a, pr);
  auto direct = b.split_form(a.unsplit_form(pr));
  auto mat = change_connection(a, b, pr);
  for (const auto& p : pts(5)) {
    CHECK(pair_diff(round, pr, p) < 1e-13);
    CHECK(pair_diff(same, pr, p) < 1e-13);
    CHECK(pair_diff(direct, mat, p) < 1e-12);
  }
}
