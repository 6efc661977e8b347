#pragma once

#include <array>
#include <functional>
#include <optional>

#include "rsplit/fields.hpp"

namespace rsplit {

// Image of the splitting map: (α, β̃) for forms, (k, ℓ̃) for multivectors.  The
// second entry is absent for degree 0.
template <class F>
struct SplitPair {
  F first;
  std::optional<F> second;
};

using FormPair = SplitPair<FormField>;
using VecPair = SplitPair<VecField>;

// Pointwise counterparts.
template <class S>
struct FormPairAt {
  Form<S> first;
  std::optional<Form<S>> second;
};

// Splitting structure on a chart whose coordinate 0 parametrizes the fiber:
// Christoffel form Γ (parametric 1-form, valued in the group's Lie algebra).
class SplittingStructure {
 public:
  SplittingStructure(int ncoords, FormField christoffel, Group group = Group::G);

  // Γ = 0 on a chart of the given size.
  static SplittingStructure natural(int ncoords, Group group = Group::G);

  int ncoords() const { return ncoords_; }
  Group group() const { return group_; }
  Chart bundle() const { return {ncoords_, false}; }
  Chart base() const { return {ncoords_, true}; }
  int base_dim() const { return ncoords_ - 1; }

  const FormField& gamma() const { return gamma_; }

  // w = ∂₀ ⊗ dt and ω = (dx⁰ + Γᵢdxⁱ) ⊗ ∂_t.
  VecField w() const;
  FormField omega() const;

  FormField sigma_star(const FormField& g) const;
  FormField pi_star(const FormField& a) const;
  VecField sigma_push(const VecField& k) const;
  VecField pi_push(const VecField& v) const;

  FormPair split_form(const FormField& g) const;
  FormField unsplit_form(const FormPair& p) const;
  VecPair split_vector(const VecField& v) const;
  VecField unsplit_vector(const VecPair& p) const;

  VecField hor(const VecField& v) const;
  VecField ver(const VecField& v) const;

  FormField chi() const;    // ∂_G Γ
  FormField Omega() const;  // D Γ

  // Exterior covariant derivative dxⁱ ∧ (∂ᵢ − Γᵢ ∂ₜ).
  FormField D(const FormField& a) const;
  FormField dG(const FormField& a) const { return group_derivative(a, group_); }

  // [[D, ε_Ω], [∂_G, ε_χ − D]] applied to a pair.
  FormPair split_d(const FormPair& p) const;
  // S⁻* ∘ d ∘ S*.
  FormPair split_d_direct(const FormPair& p) const;
  // Triple product [[Id, −ε_Γ],[0, Id]]·[[d, 0],[∂_G, −d]]·[[Id, ε_Γ],[0, Id]].
  FormPair split_d_factorized(const FormPair& p) const;

  // Components C_{μν}^0 of the object of anholonomity at a point, from dε⁰
  // expanded in the anholonomic frame.
  std::array<std::array<double, 4>, 4> anholonomity(const Point& p) const;

  // (∂_GΩ − Dχ, DΩ + Ω∧χ)
  std::pair<FormField, FormField> bianchi_residuals() const;

  // Operator splittings (matrix routes) for a parametric vector pair (k, ℓ̃).
  FormPair split_contract(const VecPair& v, const FormPair& g) const;
  FormPair split_wedge(const FormPair& a, const FormPair& g) const;
  FormPair split_lie(const VecPair& v, const FormPair& g) const;
  // D∘ι_k + ι_k∘D
  FormField L_k(const VecField& k, const FormField& a) const;

 private:
  int ncoords_;
  FormField gamma_;
  Group group_;
};

// 0-vectors and 0-forms carry the same single component.
FormField as_form0(const VecField& l);
VecField as_vec0(const FormField& f);

// [[Id, ε_{Γα−Γβ}],[0, Id]]
FormPair change_connection(const SplittingStructure& from, const SplittingStructure& to, const FormPair& p);

// Pair arithmetic.
FormPair operator+(const FormPair& a, const FormPair& b);
FormPair operator-(const FormPair& a, const FormPair& b);

// ---- transitions between fiber charts -----------------------------------------
// t_i = φ(x, t_j); fields given in chart i are pulled back to chart j.

class Transition {
 public:
  Transition(int ncoords, ScalarFn phi, Group group = Group::G);

  FormField pull(const FormField& a) const;   // Φ*
  FormPair pull(const FormPair& p) const;
  FormField affine_form() const;              // τ_j = −(∂ₖφ / ∂ₜφ) dxᵏ ⊗ e
  FormField dphi_dt() const;

  // Γ_j = Φ*Γ_i − τ_j
  SplittingStructure transform(const SplittingStructure& s) const;
  // Γ_j read off from the pulled-back four-dimensional connection form.
  SplittingStructure transform_via_bundle(const SplittingStructure& s) const;

  // φ(x, t) at a point.
  double map_time(const Point& xj) const;
  // Minimum of ∂ₜφ over sample points; negative or zero means not a diffeomorphism.
  void require_monotone(std::span<const Point> pts) const;

 private:
  int ncoords_;
  ScalarFn phi_;
  Group group_;
};

// ---- classification -----------------------------------------------------------

struct ClassFlags {
  bool flat = false, principal = false, holonomic = false, natural = false;
  std::optional<bool> regular, metric, standard, stationary;
};

ClassFlags classify_connection(const SplittingStructure& s, std::span<const Point> pts, double tol = 1e-9);

}  // namespace rsplit
