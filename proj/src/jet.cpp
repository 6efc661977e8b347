#include "rsplit/jet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rsplit {

namespace {

struct Tables {
  std::array<Jet::Exponent, Jet::kSize> exps{};
  std::array<int, Jet::kSize> deg{};
  int lookup[5][5][5][5];
  struct Triple {
    std::uint8_t a, b, r;
  };
  std::vector<Triple> mul;              // sorted by degree of r
  std::array<int, Jet::kMaxOrder + 2> mul_end{};  // prefix sizes per result order
  std::array<int, Jet::kMaxOrder + 2> size_end{};
  // shift[i][idx]: index of exps[idx] + e_i, or -1
  std::array<std::array<int, Jet::kSize>, Jet::kVars> up{};

  Tables() {
    int n = 0;
    for (int d = 0; d <= Jet::kMaxOrder; ++d) {
      for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b)
          for (int c = d - a - b; c >= 0; --c) {
            int e = d - a - b - c;
            exps[n] = {std::uint8_t(a), std::uint8_t(b), std::uint8_t(c), std::uint8_t(e)};
            deg[n] = d;
            lookup[a][b][c][e] = n;
            ++n;
          }
      size_end[d] = n;
    }
    for (int r = 0; r < Jet::kSize; ++r)
      for (int a = 0; a < Jet::kSize; ++a) {
        Jet::Exponent b;
        bool ok = true;
        for (int k = 0; k < 4; ++k) {
          int v = int(exps[r][k]) - int(exps[a][k]);
          if (v < 0) { ok = false; break; }
          b[k] = std::uint8_t(v);
        }
        if (ok) mul.push_back({std::uint8_t(a), std::uint8_t(lookup[b[0]][b[1]][b[2]][b[3]]), std::uint8_t(r)});
      }
    for (int d = 0; d <= Jet::kMaxOrder; ++d)
      mul_end[d] = int(std::count_if(mul.begin(), mul.end(), [&](const Triple& t) { return deg[t.r] <= d; }));
    for (int i = 0; i < 4; ++i)
      for (int idx = 0; idx < Jet::kSize; ++idx) {
        auto e = exps[idx];
        e[i]++;
        int s = e[0] + e[1] + e[2] + e[3];
        up[i][idx] = s <= Jet::kMaxOrder ? lookup[e[0]][e[1]][e[2]][e[3]] : -1;
      }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

int Jet::index(const Exponent& e) { return tables().lookup[e[0]][e[1]][e[2]][e[3]]; }
const Jet::Exponent& Jet::exponent(int idx) { return tables().exps[idx]; }
int Jet::degree(int idx) { return tables().deg[idx]; }
int Jet::size_for_order(int order) { return tables().size_end[order]; }

Jet Jet::variable(int i, double at) {
  Jet j(at);
  Exponent e{0, 0, 0, 0};
  e[i] = 1;
  j.c_[index(e)] = 1.0;
  return j;
}

Jet Jet::d(int i) const {
  if (order_ == 0) throw std::logic_error("Jet::d: derivative of an order-0 jet");
  const auto& t = tables();
  Jet r;
  r.order_ = order_ - 1;
  const int n = size_for_order(r.order_);
  for (int idx = 0; idx < n; ++idx) r.c_[idx] = (t.exps[idx][i] + 1) * c_[t.up[i][idx]];
  return r;
}

double Jet::partial(int i) const {
  if (order_ < 1) throw std::logic_error("Jet::partial: order too low");
  Exponent e{0, 0, 0, 0};
  e[i] = 1;
  return c_[index(e)];
}

double Jet::partial2(int i, int j) const {
  if (order_ < 2) throw std::logic_error("Jet::partial2: order too low");
  Exponent e{0, 0, 0, 0};
  e[i]++;
  e[j]++;
  return c_[index(e)] * (i == j ? 2.0 : 1.0);
}

Jet Jet::truncated(int order) const {
  Jet r = *this;
  if (order < r.order_) {
    for (int idx = size_for_order(order); idx < kSize; ++idx) r.c_[idx] = 0;
    r.order_ = order;
  }
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  const int n = size_for_order(order_);
  for (int k = 0; k < n; ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  const int n = size_for_order(order_);
  for (int k = 0; k < n; ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  const int n = size_for_order(order_);
  for (int k = 0; k < n; ++k) c_[k] *= s;
  return *this;
}

Jet Jet::operator-() const {
  Jet r = *this;
  return r *= -1.0;
}

Jet operator*(const Jet& a, const Jet& b) {
  const auto& t = tables();
  Jet r;
  r.order_ = std::min(a.order_, b.order_);
  const int n = t.mul_end[r.order_];
  for (int k = 0; k < n; ++k) {
    const auto& tr = t.mul[k];
    r.c_[tr.r] += a.c_[tr.a] * b.c_[tr.b];
  }
  return r;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet Jet::apply(std::span<const double> f) const {
  // f(a + h) = sum_k f^(k)(a) h^k / k!
  Jet h = *this;
  h.c_[0] = 0;
  Jet r(f[0]);
  r.order_ = order_;
  Jet hp = h;
  double fact = 1.0;
  for (int k = 1; k <= order_ && k < int(f.size()); ++k) {
    fact *= k;
    Jet term = hp;
    term *= f[k] / fact;
    r += term;
    if (k < order_) hp = hp * h;
  }
  return r;
}

Jet operator/(double b, const Jet& a) {
  std::array<double, Jet::kMaxOrder + 1> f{};
  double x = a.value();
  if (x == 0.0) throw std::domain_error("Jet: division by zero");
  double p = 1.0 / x;
  double fac = 1.0;
  for (int k = 0; k <= Jet::kMaxOrder; ++k) {
    f[k] = b * fac * p;
    p /= x;
    fac *= -(k + 1);
  }
  return a.apply(f);
}

Jet& Jet::operator/=(const Jet& o) { return *this = *this * (1.0 / o); }

Jet Jet::compose(const std::array<Jet, kVars>& delta) const {
  // powers[i][p] = delta_i^p
  std::array<std::array<Jet, kMaxOrder + 1>, kVars> powers;
  int ord = order_;
  for (const auto& dl : delta) ord = std::min(ord, dl.order_);
  for (int i = 0; i < kVars; ++i) {
    powers[i][0] = Jet(1.0);
    for (int p = 1; p <= order_; ++p) powers[i][p] = powers[i][p - 1] * delta[i];
  }
  Jet r;
  r.order_ = ord;
  const int n = size_for_order(order_);
  for (int idx = 0; idx < n; ++idx) {
    if (c_[idx] == 0.0) continue;
    const auto& e = exponent(idx);
    Jet m(c_[idx]);
    for (int i = 0; i < kVars; ++i)
      if (e[i]) m = m * powers[i][e[i]];
    r += m;
  }
  return r.truncated(ord);
}

Jet sin(const Jet& x) {
  double s = std::sin(x.value()), c = std::cos(x.value());
  const double f[5] = {s, c, -s, -c, s};
  return x.apply(f);
}

Jet cos(const Jet& x) {
  double s = std::sin(x.value()), c = std::cos(x.value());
  const double f[5] = {c, -s, -c, s, c};
  return x.apply(f);
}

Jet exp(const Jet& x) {
  double e = std::exp(x.value());
  const double f[5] = {e, e, e, e, e};
  return x.apply(f);
}

Jet log(const Jet& x) {
  double v = x.value();
  if (v <= 0) throw std::domain_error("Jet log: nonpositive argument");
  const double f[5] = {std::log(v), 1 / v, -1 / (v * v), 2 / (v * v * v), -6 / (v * v * v * v)};
  return x.apply(f);
}

Jet pow(const Jet& x, double p) {
  double v = x.value();
  std::array<double, 5> f{};
  double coef = 1.0;
  for (int k = 0; k < 5; ++k) {
    f[k] = coef * std::pow(v, p - k);
    coef *= (p - k);
  }
  return x.apply(f);
}

Jet sqrt(const Jet& x) {
  if (x.value() <= 0) throw std::domain_error("Jet sqrt: nonpositive argument");
  return pow(x, 0.5);
}

Jet abs(const Jet& x) { return x.value() < 0 ? -x : x; }

}  // namespace rsplit
