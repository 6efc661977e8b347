#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "rsplit/exterior.hpp"

namespace rsplit {

// Small dense square matrix (n ≤ 4) over a scalar type.
template <class S>
struct Mat {
  int n = 0;
  std::array<std::array<S, kMaxAxes>, kMaxAxes> a{};

  Mat() = default;
  explicit Mat(int dim) : n(dim) {
    for (auto& r : a)
      for (auto& x : r) x = S(0.0);
  }
  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m.a[i][i] = S(1.0);
    return m;
  }
  S& operator()(int i, int j) { return a[i][j]; }
  const S& operator()(int i, int j) const { return a[i][j]; }
};

template <class S>
Mat<S> operator*(const Mat<S>& x, const Mat<S>& y) {
  Mat<S> r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j)
      for (int k = 0; k < x.n; ++k) r(i, j) += x(i, k) * y(k, j);
  return r;
}

template <class S>
Mat<S> operator*(const S& s, Mat<S> m) {
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) m(i, j) *= s;
  return m;
}

// Determinant of the submatrix with row set I and column set J (bitmasks of
// equal popcount), by Laplace expansion along the first row.
template <class S>
S minor_det(const Mat<S>& m, int I, int J) {
  const int k = mask_degree(I);
  if (k == 0) return S(1.0);
  int r0 = std::countr_zero(unsigned(I));
  int rest = I & ~(1 << r0);
  S acc(0.0);
  int sgn = 1;
  for (int c = 0; c < m.n; ++c) {
    if (!(J & (1 << c))) continue;
    S t = m(r0, c) * minor_det(m, rest, J & ~(1 << c));
    if (sgn > 0)
      acc += t;
    else
      acc -= t;
    sgn = -sgn;
  }
  return acc;
}

template <class S>
S det(const Mat<S>& m) {
  const int all = (1 << m.n) - 1;
  return minor_det(m, all, all);
}

template <class S>
Mat<S> inverse(const Mat<S>& m) {
  S d = det(m);
  if (std::abs(value_of(d)) < 1e-300) throw std::domain_error("inverse: singular matrix");
  const int all = (1 << m.n) - 1;
  Mat<S> r(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) {
      S c = minor_det(m, all & ~(1 << j), all & ~(1 << i));
      if ((i + j) % 2) c = -c;
      r(i, j) = c / d;
    }
  return r;
}

template <class S>
S trace(const Mat<S>& m) {
  S t(0.0);
  for (int i = 0; i < m.n; ++i) t += m(i, i);
  return t;
}

// Exterior compound of a bilinear form acting on k-vectors: (g v)_I = Σ_J det(g_IJ) v^J.
template <class S>
Form<S> lower(const Mat<S>& g, const MultiVec<S>& v, Dimension gdim) {
  Meta m = v.m;
  m.pd = v.m.pd * gdim.pow(v.m.k);
  Form<S> r(m);
  for (int p = 0; p < r.size(); ++p)
    for (int q = 0; q < v.size(); ++q) r.c[p] += minor_det(g, r.mask(p), v.mask(q)) * v.c[q];
  return r;
}

template <class S>
MultiVec<S> raise(const Mat<S>& ginv, const Form<S>& f, Dimension gdim) {
  Meta m = f.m;
  m.pd = f.m.pd / gdim.pow(f.m.k);
  MultiVec<S> r(m);
  for (int p = 0; p < r.size(); ++p)
    for (int q = 0; q < f.size(); ++q) r.c[p] += minor_det(ginv, r.mask(p), f.mask(q)) * f.c[q];
  return r;
}

// Twisted unit volume form √|det g| dx^0∧…∧dx^{n-1}; pd L^n.
template <class S>
Form<S> volume_form(const Mat<S>& g) {
  S d = det(g);
  S a = value_of(d) < 0 ? -d : d;
  Meta m;
  m.n = g.n;
  m.k = g.n;
  m.twist_x = true;
  m.pd = dim::L.pow(g.n);
  Form<S> r(m);
  using std::sqrt;
  r.c[0] = sqrt(a);
  return r;
}

// Hodge operator *γ = ι_{g⁻¹γ} κ (contraction into the first slots).
template <class S>
Form<S> hodge(const Mat<S>& g, const Mat<S>& ginv, const Form<S>& f) {
  MultiVec<S> up = raise(ginv, f, dim::L.pow(2));
  Form<S> r = contract(up, volume_form(g));
  r.m.twist_x = !f.m.twist_x;
  r.m.lie = f.m.lie;
  return r;
}

template <class S>
Form<S> hodge(const Mat<S>& g, const Form<S>& f) {
  return hodge(g, inverse(g), f);
}

}  // namespace rsplit
