#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>

#include "rsplit/splitting.hpp"

namespace rsplit {

class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <class S>
Mat<S> transpose(const Mat<S>& m) {
  Mat<S> r(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r(i, j) = m(j, i);
  return r;
}

inline Mat<double> values(const Mat<Jet>& m) {
  Mat<double> r(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r(i, j) = m(i, j).value();
  return r;
}

// Symmetric (0,2)-tensor field given by its components over the chart axes.
// Used for the space-time metric (bundle chart), the observer metrics
// (parametric chart) and tensors such as L_u g or the expansion tensor.
class SymField {
 public:
  using Fn = std::function<Mat<Jet>(const Coords&)>;

  SymField() = default;
  SymField(Chart chart, Fn fn, Dimension pd = dim::L.pow(2), LieValue lie = {})
      : chart_(chart), pd_(pd), lie_(lie), fn_(std::make_shared<const Fn>(std::move(fn))) {}

  const Chart& chart() const { return chart_; }
  int n() const { return chart_.axes(); }
  Dimension pd() const { return pd_; }
  LieValue lie() const { return lie_; }

  Mat<Jet> operator()(const Coords& x) const { return (*fn_)(x); }
  Mat<Jet> jet_at(const Point& p) const { return (*this)(seed(p)); }
  Mat<double> value(const Point& p) const { return values((*this)(constant_coords(p))); }

  // Signature (+,−,…,−) check; throws MetricError.
  void require_lorentzian(std::span<const Point> pts) const;
  // Positive definiteness check; throws MetricError.
  void require_riemannian(std::span<const Point> pts) const;

 private:
  Chart chart_{};
  Dimension pd_{};
  LieValue lie_{};
  std::shared_ptr<const Fn> fn_;
};

using MetricField = SymField;

// |det g| relative to the scale of the entries below this is singular.
inline constexpr double kDegenerateTol = 1e-12;
bool nondegenerate_at(const SymField& g, const Point& p);

SymField operator+(const SymField& a, const SymField& b);
SymField operator-(const SymField& a, const SymField& b);
SymField operator*(double s, const SymField& a);
SymField mul(const FormField& f, const SymField& a);
SymField inverse(const SymField& g);
double max_abs(const Mat<double>& m);

// Riesz operator and its inverse, extended to multivectors by exterior compound.
FormField riesz(const SymField& g, const VecField& v);
VecField riesz_inv(const SymField& g, const FormField& f);
// Twisted unit volume form and Hodge operator ι_{g⁻¹γ} κ.
FormField volume_form(const SymField& g);
FormField hodge(const SymField& g, const FormField& f);

// Lie derivative of a symmetric tensor along a 1-vector field (same chart).
SymField lie_derivative(const VecField& v, const SymField& T);
// Derivative of every component with respect to the fiber coordinate.
SymField group_derivative(const SymField& T, Group g = Group::G);
// Tr(h⁻¹ λ) as a 0-form.
FormField trace(const SymField& h, const SymField& lam);

// Combined relativistic splitting structure: splitting plus space-time metric
// on the same adapted chart.  c0 is the vacuum speed of light in the units of
// the chart.
class Observer {
 public:
  enum class Basis { Sigma, Pi };

  Observer(SplittingStructure s, MetricField g, double c0 = 1.0);

  const SplittingStructure& splitting() const { return s_; }
  const MetricField& metric() const { return g_; }
  double c0() const { return c0_; }
  int ncoords() const { return s_.ncoords(); }

  // g(e_μ, e_ν) in the frame e₀ = ∂ₜ, eᵢ = ∂ᵢ − Γᵢ∂ₜ.
  Mat<Jet> frame_metric(const Coords& x) const;

  SymField h_sigma() const;  // −Σ*g
  SymField h_pi() const;     // (−Π g⁻¹)⁻¹
  SymField h() const { return h_sigma(); }
  SymField sigma_star(const SymField& T) const;

  FormField N() const;          // |w|
  FormField N_inv() const;      // N⁻¹
  FormField N_dag() const;      // (N⁻†)⁻¹
  FormField N_inv_dag() const;  // |ω|
  FormField xi() const;         // N N⁻†

  VecField w_dag() const;      // (N†N†)⊗ g⁻¹ω
  FormField omega_dag() const;  // (N⁻¹N⁻¹)⊗ g w
  VecField shift() const;       // N⃗ = −Π w†
  FormField shift_form() const;  // ν = −Σ* ω†

  // Twisted unit spatial volume forms of h_Σ and h_Π; κ₃ = κ_Σ.
  FormField kappa_sigma() const { return volume_form(h_sigma()); }
  FormField kappa_pi() const { return volume_form(h_pi()); }
  FormField kappa4() const { return volume_form(g_); }

  bool is_regular(std::span<const Point> pts, double tol = 1e-9) const;
  // Throws MetricError when ĝ_{0i} ≠ 0 at the point of x.
  void require_regular_at(const Coords& x) const;

  // Direct routes S⁻*∘g∘S⁻¹, S∘g⁻¹∘S*, S⁻*∘*₄∘S*.
  FormPair riesz_direct(const VecPair& v) const;
  VecPair riesz_inv_direct(const FormPair& a) const;
  FormPair hodge_direct(const FormPair& a) const;

  // Matrix routes.  The regular ones throw MetricError at nonregular points.
  FormPair split_riesz_regular(const VecPair& v) const;
  VecPair split_riesz_inv_regular(const FormPair& a) const;
  FormPair split_hodge_regular(const FormPair& a) const;
  FormPair split_riesz_nonregular(const VecPair& v, Basis b) const;
  VecPair split_riesz_inv_nonregular(const FormPair& a, Basis b) const;
  FormPair split_hodge_nonregular(const FormPair& a, Basis b) const;

  // Four-velocity c₀(Π*N⁻¹)w and μ = g u.
  VecField u() const;
  FormField mu() const;
  // ∂_τ = c₀N⁻¹∂_G, and the same through Σ*∘L_u∘Π*.
  FormField d_tau(const FormField& a) const;
  FormField d_tau_lie(const FormField& a) const;
  SymField d_tau(const SymField& T) const;

  // Principal, time-independent h and N⁻¹ (regular splittings) vs L_w g = 0.
  SymField lie_w_g() const;

  // ---- proxies ----
  FormPair proxy_forms(const FormPair& a) const;    // P⁻*: (α, β̃) ↦ (α, c₀N⁻¹β̃)
  FormPair unproxy_forms(const FormPair& a) const;  // P*
  VecPair proxy_vectors(const VecPair& v) const;    // P: (k, ℓ̃) ↦ (k, c₀⁻¹Nℓ̃)
  VecPair unproxy_vectors(const VecPair& v) const;  // P⁻¹

  FormField delta_bar() const;  // c₀²N⁻¹(χ − D)N
  FormField eta2_bar() const;   // c₀NΩ
  // [[D, c₀⁻²ε_{2η̄}], [∂_τ, c₀⁻²ε_δ̄ − D]] on proxies, and the conjugated direct route.
  FormPair proxy_split_d(const FormPair& a) const;
  FormPair proxy_split_d_direct(const FormPair& a) const;
  FormPair proxy_contract(const VecPair& v, const FormPair& a) const;
  FormPair proxy_wedge(const FormPair& g, const FormPair& a) const;
  FormPair proxy_lie(const VecPair& v, const FormPair& a) const;

  FormPair proxy_riesz_regular(const VecPair& v) const;
  FormPair proxy_hodge_regular(const FormPair& a) const;
  FormPair proxy_riesz_nonregular(const VecPair& v, Basis b) const;
  VecPair proxy_riesz_inv_nonregular(const FormPair& a, Basis b) const;
  FormPair proxy_hodge_nonregular(const FormPair& a, Basis b) const;

 private:
  FormField lapse_field(int which) const;
  FormPair regular_only(FormPair p) const;
  VecPair regular_only(VecPair p) const;

  SplittingStructure s_;
  MetricField g_;
  double c0_;
};

struct Kinematics {
  FormField delta;  // acceleration form, Lie-coalgebra valued
  FormField eta;    // vorticity 2-form
  SymField lambda;  // expansion tensor
  SymField sigma;   // shear
  FormField lambda_scalar;
};

// From the definitions c₀⁻¹NΣ*L_uμ, ½Σ*dμ, −½Σ*L_u g.
Kinematics kinematics(const Observer& o);
// From the structure: c₀(Nχ − DN), ½c₀NΩ, ½∂_τh.
Kinematics kinematics_from_structure(const Observer& o);

// Connection whose horizontal spaces are g-orthogonal to ∂ₜ: Γᵢ = g₀ᵢ/g₀₀.
SplittingStructure orthogonal_splitting(const MetricField& g, Group group = Group::G);

// diag(1.3, −1, …, −1) plus a smooth symmetric perturbation of size ~amp.
MetricField random_metric(int ncoords, std::uint64_t seed, double amp = 0.05);

struct MetricFlags {
  bool regular = false, metric = false, standard = false, stationary = false;
};
MetricFlags classify_metric(const Observer& o, std::span<const Point> pts, double tol = 1e-9);

}  // namespace rsplit
