#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace rsplit {

// Truncated multivariate Taylor polynomial in four variables.  Arithmetic on
// jets propagates all partial derivatives up to the stored order exactly;
// differentiation lowers the order by one.
class Jet {
 public:
  static constexpr int kVars = 4;
  static constexpr int kMaxOrder = 4;
  static constexpr int kSize = 70;  // C(kVars + kMaxOrder, kMaxOrder)

  using Exponent = std::array<std::uint8_t, kVars>;

  Jet() = default;
  Jet(double v) { c_[0] = v; }  // NOLINT: implicit promotion of constants

  static Jet variable(int i, double at);

  double value() const { return c_[0]; }
  int order() const { return order_; }
  double coef(int idx) const { return c_[idx]; }
  double& coef(int idx) { return c_[idx]; }

  // Partial derivative as a jet of one order lower.
  Jet d(int i) const;
  // Derivatives at the expansion point.
  double partial(int i) const;
  double partial2(int i, int j) const;

  Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator*=(double s);
  Jet operator-() const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b) { Jet r = a; return r /= b; }
  friend Jet operator+(Jet a, double b) { a.c_[0] += b; return a; }
  friend Jet operator+(double b, Jet a) { a.c_[0] += b; return a; }
  friend Jet operator-(Jet a, double b) { a.c_[0] -= b; return a; }
  friend Jet operator-(double b, const Jet& a) { return -a + b; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double b, Jet a) { return a *= b; }
  friend Jet operator/(Jet a, double b) { return a *= 1.0 / b; }
  friend Jet operator/(double b, const Jet& a);

  // Apply a scalar function given its derivatives f, f', ..., f^(order) at value().
  Jet apply(std::span<const double> derivs) const;

  // Substitute this polynomial's variables by value + delta[i], where the deltas
  // have zero constant term.
  Jet compose(const std::array<Jet, kVars>& delta) const;

  static int index(const Exponent& e);
  static const Exponent& exponent(int idx);
  static int degree(int idx);
  static int size_for_order(int order);

 private:
  std::array<double, kSize> c_{};
  int order_ = kMaxOrder;
};

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double p);
Jet abs(const Jet& x);

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace rsplit
