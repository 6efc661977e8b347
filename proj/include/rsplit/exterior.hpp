#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "rsplit/dims.hpp"
#include "rsplit/jet.hpp"

namespace rsplit {

constexpr int kMaxAxes = 4;

// ---- multi-index bookkeeping ------------------------------------------------
// Strictly increasing index tuples are stored as bitmasks; components are laid
// out in lexicographic order of the tuples.

constexpr int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace detail {
struct IndexTables {
  // masks[n][k][p], pos[n][mask]
  std::uint8_t masks[kMaxAxes + 1][kMaxAxes + 1][6]{};
  std::int8_t pos[kMaxAxes + 1][16]{};
  constexpr IndexTables() {
    for (int n = 0; n <= kMaxAxes; ++n) {
      for (int m = 0; m < 16; ++m) pos[n][m] = -1;
      for (int k = 0; k <= n; ++k) {
        int p = 0;
        // lexicographic enumeration of k-subsets of {0..n-1}
        int idx[kMaxAxes] = {};
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
          int mask = 0;
          for (int i = 0; i < k; ++i) mask |= 1 << idx[i];
          masks[n][k][p] = std::uint8_t(mask);
          pos[n][mask] = std::int8_t(p);
          ++p;
          int i = k - 1;
          while (i >= 0 && idx[i] == n - k + i) --i;
          if (i < 0) break;
          ++idx[i];
          for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
      }
    }
  }
};
inline constexpr IndexTables kIndex{};
}  // namespace detail

inline int mask_at(int n, int k, int p) { return detail::kIndex.masks[n][k][p]; }
inline int mask_pos(int n, int mask) { return detail::kIndex.pos[n][mask]; }
inline int mask_degree(int mask) { return std::popcount(unsigned(mask)); }

// Sign of the permutation that sorts the concatenation (I, J) of disjoint sets.
inline int merge_sign(int I, int J) {
  int inversions = 0;
  for (int j = 0; j < kMaxAxes; ++j)
    if (J & (1 << j)) inversions += std::popcount(unsigned(I) >> (j + 1));
  return (inversions & 1) ? -1 : 1;
}

// ---- Lie valuedness ----------------------------------------------------------
// Counts of Lie-algebra (up) and dual (down) factors for the time group G and,
// for the axial reduction, a second one-dimensional group U.

enum class Group { G = 0, U = 1 };

struct LieValue {
  std::array<std::int8_t, 2> up{0, 0};
  std::array<std::int8_t, 2> down{0, 0};

  static constexpr LieValue scalar() { return {}; }
  static constexpr LieValue alg(Group g = Group::G) { LieValue v; v.up[int(g)] = 1; return v; }
  static constexpr LieValue coalg(Group g = Group::G) { LieValue v; v.down[int(g)] = 1; return v; }
  static constexpr LieValue tensor(Group g = Group::G) { LieValue v; v.up[int(g)] = 1; v.down[int(g)] = 1; return v; }

  // Weight in {-1, 0, +1} for the time group plus the tensor flag, as exposed
  // to callers.
  int weight(Group g = Group::G) const { return up[int(g)] - down[int(g)]; }
  bool is_tensor(Group g = Group::G) const { return up[int(g)] == 1 && down[int(g)] == 1; }
  bool is_scalar() const { return *this == LieValue{}; }

  constexpr bool operator==(const LieValue&) const = default;

  // Product rule: at most one duality pairing per group.
  static LieValue combine(const LieValue& a, const LieValue& b) {
    LieValue r;
    for (int g = 0; g < 2; ++g) {
      int c = std::min(1, std::min(a.up[g], b.down[g]) + std::min(a.down[g], b.up[g]));
      r.up[g] = std::int8_t(a.up[g] + b.up[g] - c);
      r.down[g] = std::int8_t(a.down[g] + b.down[g] - c);
    }
    return r;
  }
  bool exceeds_exterior() const {
    for (int g = 0; g < 2; ++g)
      if (up[g] > 1 || down[g] > 1) return true;
    return false;
  }
  LieValue with_up(Group g) const {
    LieValue r = *this;
    r.up[int(g)]++;
    return r;
  }
  LieValue with_down(Group g) const {
    LieValue r = *this;
    r.down[int(g)]++;
    return r;
  }
  std::string str() const;
};

// ---- containers --------------------------------------------------------------

enum class Kind { Form, Vec };

struct Meta {
  int n = 0;  // number of axes
  int k = 0;  // degree
  LieValue lie{};
  bool twist_x = false;
  bool twist_g = false;
  Dimension pd{};

  bool operator==(const Meta&) const = default;
  std::string str() const;
};

class MetaError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

void require_compatible(const Meta& a, const Meta& b, const char* what);

template <class S, Kind K>
struct Alt {
  Meta m;
  std::array<S, 6> c{};

  Alt() = default;
  explicit Alt(const Meta& meta) : m(meta) {
    // Degrees above n are allowed and denote the (zero-dimensional) zero space.
    if (meta.n < 0 || meta.n > kMaxAxes || meta.k < 0) throw MetaError("Alt: invalid degree/axes");
    for (auto& x : c) x = S(0.0);
  }

  int size() const { return binom(m.n, m.k); }
  int mask(int p) const { return mask_at(m.n, m.k, p); }
  S& at_mask(int mask) { return c[mask_pos(m.n, mask)]; }
  const S& at_mask(int mask) const { return c[mask_pos(m.n, mask)]; }

  Alt& operator+=(const Alt& o) {
    require_compatible(m, o.m, "add");
    for (int p = 0; p < size(); ++p) c[p] += o.c[p];
    return *this;
  }
  Alt& operator-=(const Alt& o) {
    require_compatible(m, o.m, "sub");
    for (int p = 0; p < size(); ++p) c[p] -= o.c[p];
    return *this;
  }
  Alt& operator*=(const S& s) {
    for (int p = 0; p < size(); ++p) c[p] *= s;
    return *this;
  }
  friend Alt operator+(Alt a, const Alt& b) { return a += b; }
  friend Alt operator-(Alt a, const Alt& b) { return a -= b; }
  friend Alt operator*(Alt a, const S& s) { return a *= s; }
  friend Alt operator*(const S& s, Alt a) { return a *= s; }
  Alt operator-() const {
    Alt r = *this;
    for (int p = 0; p < size(); ++p) r.c[p] = -r.c[p];
    return r;
  }
};

template <class S>
using Form = Alt<S, Kind::Form>;
template <class S>
using MultiVec = Alt<S, Kind::Vec>;

template <class S, Kind K>
Alt<S, K> make_zero(const Meta& m) {
  return Alt<S, K>(m);
}

// Basis element dx^I (or ∂_I) with unit coefficient.
template <class S, Kind K>
Alt<S, K> basis(int n, int mask, LieValue lie = {}, Dimension pd = {}) {
  Meta m;
  m.n = n;
  m.k = mask_degree(mask);
  m.lie = lie;
  m.pd = pd;
  Alt<S, K> a(m);
  a.at_mask(mask) = S(1.0);
  return a;
}

template <class S, Kind K>
double max_abs(const Alt<S, K>& a) {
  double r = 0;
  for (int p = 0; p < a.size(); ++p) r = std::max(r, std::abs(value_of(a.c[p])));
  return r;
}

// Change of metadata on an existing set of components.
template <class S, Kind K>
Alt<S, K> retag(Alt<S, K> a, LieValue lie, Dimension pd) {
  a.m.lie = lie;
  a.m.pd = pd;
  return a;
}

template <class S, Kind K>
Alt<S, K> with_dim(Alt<S, K> a, Dimension pd) {
  a.m.pd = pd;
  return a;
}

// Scalar multiplication by a quantity carrying dimension and Lie value.
template <class S, Kind K>
Alt<S, K> scale(Alt<S, K> a, const S& s, Dimension pd = {}, LieValue lie = {}) {
  a *= s;
  a.m.pd = a.m.pd * pd;
  a.m.lie = LieValue::combine(a.m.lie, lie);
  return a;
}

// ---- products -----------------------------------------------------------------

template <class S, Kind K>
Alt<S, K> wedge(const Alt<S, K>& a, const Alt<S, K>& b) {
  if (a.m.n != b.m.n) throw MetaError("wedge: axis count mismatch");
  Meta m;
  m.n = a.m.n;
  m.k = a.m.k + b.m.k;
  m.lie = LieValue::combine(a.m.lie, b.m.lie);
  m.twist_x = a.m.twist_x != b.m.twist_x;
  m.twist_g = a.m.twist_g != b.m.twist_g;
  m.pd = a.m.pd * b.m.pd;
  Alt<S, K> r(m);
  // Λ²𝔤 = 0: two positive-degree factors of like Lie type annihilate.
  if (a.m.k > 0 && b.m.k > 0 && m.lie.exceeds_exterior()) return r;
  for (int p = 0; p < a.size(); ++p) {
    const int I = a.mask(p);
    for (int q = 0; q < b.size(); ++q) {
      const int J = b.mask(q);
      if (I & J) continue;
      const S t = a.c[p] * b.c[q];
      if (merge_sign(I, J) > 0)
        r.at_mask(I | J) += t;
      else
        r.at_mask(I | J) -= t;
    }
  }
  return r;
}

// Contraction of the first slots: (ι_v γ)_J = Σ_I v^I γ_{I∪J} sgn(I,J).
// Works for a k-vector into a form and for a k-form into a multivector.
template <class S, Kind A, Kind B>
Alt<S, B> contract(const Alt<S, A>& v, const Alt<S, B>& g) {
  static_assert(A != B, "contract pairs forms with multivectors");
  if (v.m.n != g.m.n) throw MetaError("contract: axis count mismatch");
  if (v.m.k > g.m.k) throw MetaError("contract: degree of contractor exceeds target");
  Meta m;
  m.n = g.m.n;
  m.k = g.m.k - v.m.k;
  m.lie = LieValue::combine(v.m.lie, g.m.lie);
  m.twist_x = v.m.twist_x != g.m.twist_x;
  m.twist_g = v.m.twist_g != g.m.twist_g;
  m.pd = v.m.pd * g.m.pd;
  Alt<S, B> r(m);
  if (g.size() == 0) return r;
  for (int p = 0; p < v.size(); ++p) {
    const int I = v.mask(p);
    for (int q = 0; q < r.size(); ++q) {
      const int J = r.mask(q);
      if (I & J) continue;
      const S t = v.c[p] * g.at_mask(I | J);
      if (merge_sign(I, J) > 0)
        r.c[q] += t;
      else
        r.c[q] -= t;
    }
  }
  return r;
}

// Full pairing of a k-form with a k-vector.
template <class S>
S pairing(const Form<S>& g, const MultiVec<S>& v) {
  if (g.m.k != v.m.k || g.m.n != v.m.n) throw MetaError("pairing: degree mismatch");
  S r(0.0);
  for (int p = 0; p < g.size(); ++p) r += g.c[p] * v.c[p];
  return r;
}

template <class S, Kind K>
Alt<S, K> sign_n(Alt<S, K> a) {
  if (a.m.k % 2) a = -a;
  return a;
}

// Change of Lie basis e -> λ e: the abstract value is preserved.
template <class S, Kind K>
Alt<S, K> rebase_lie(Alt<S, K> a, double lambda, Group g = Group::G) {
  if (lambda == 0.0) throw std::invalid_argument("rebase_lie: zero scale");
  const int gi = int(g);
  const double f = std::pow(lambda, a.m.lie.down[gi] - a.m.lie.up[gi]);
  a *= S(f);
  if (lambda < 0 && (a.m.lie.up[gi] + a.m.lie.down[gi]) % 2 == 1) a.m.twist_g = !a.m.twist_g;
  return a;
}

// Move components from n axes to m axes using an axis map (old axis -> new axis),
// including the sign of the induced permutation.
template <class S, Kind K>
Alt<S, K> remap_axes(const Alt<S, K>& a, int new_n, std::span<const int> axis_map) {
  Meta m = a.m;
  m.n = new_n;
  Alt<S, K> r(m);
  for (int p = 0; p < a.size(); ++p) {
    const int I = a.mask(p);
    int tuple[kMaxAxes];
    int k = 0;
    for (int i = 0; i < a.m.n; ++i)
      if (I & (1 << i)) tuple[k++] = axis_map[i];
    int mask = 0;
    int inv = 0;
    for (int x = 0; x < k; ++x) {
      mask |= 1 << tuple[x];
      for (int y = x + 1; y < k; ++y) inv += tuple[x] > tuple[y];
    }
    if (inv & 1)
      r.at_mask(mask) -= a.c[p];
    else
      r.at_mask(mask) += a.c[p];
  }
  return r;
}

// Components of a on axes 1..n-1 for those multi-indices not containing axis 0.
template <class S, Kind K>
Alt<S, K> drop_axis0(const Alt<S, K>& a) {
  Meta m = a.m;
  m.n = a.m.n - 1;
  Alt<S, K> r(m);
  for (int q = 0; q < r.size(); ++q) r.c[q] = a.at_mask(r.mask(q) << 1);
  return r;
}

// Embed a form on axes 1..n-1 into n axes.
template <class S, Kind K>
Alt<S, K> lift_axis0(const Alt<S, K>& a) {
  Meta m = a.m;
  m.n = a.m.n + 1;
  Alt<S, K> r(m);
  for (int p = 0; p < a.size(); ++p) r.at_mask(a.mask(p) << 1) = a.c[p];
  return r;
}

template <class S, Kind K>
Alt<double, K> values(const Alt<S, K>& a) {
  Alt<double, K> r(a.m);
  for (int p = 0; p < a.size(); ++p) r.c[p] = value_of(a.c[p]);
  return r;
}

template <class S, Kind K>
Alt<Jet, K> to_jet(const Alt<S, K>& a) {
  Alt<Jet, K> r(a.m);
  for (int p = 0; p < a.size(); ++p) r.c[p] = Jet(value_of(a.c[p]));
  return r;
}

}  // namespace rsplit
