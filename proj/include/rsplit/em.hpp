#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsplit/metric.hpp"

namespace rsplit {

namespace dim {
inline constexpr Dimension Faraday = U * T;   // A, F and their splits
inline constexpr Dimension Charge = I * T;    // H, J and their splits
inline constexpr Dimension Eps0 = I * T / (U * L);
inline constexpr Dimension Mu0 = U * T / (I * L);
}  // namespace dim

// Space-time fields on the bundle chart.  A is optional; H and J are twisted.
struct MaxwellFieldSet {
  std::optional<FormField> A;
  FormField F, H, J;
};

// F = dA and J = dH.
MaxwellFieldSet maxwell_from_potentials(const FormField& A, const FormField& H);
// Random potentials of the right type and dimension; H = Z₀⁻¹*₄F when g is given.
MaxwellFieldSet random_maxwell(int ncoords, std::uint64_t seed, const MetricField* g = nullptr, double Z0 = 1.0);

// Parametric fields (a, φ̃), (b, ẽ), (d, h̃), (ρ, ȷ̃), or their proxies (φ, e, h, j).
struct SplitEmFields {
  std::optional<FormField> a, phi;
  FormField b, e, d, h, rho, j;
};

// S⁻*A = (a, −φ̃), S⁻*F = (b, −ẽ), S⁻*H = (d, h̃), S⁻*J = (ρ, −ȷ̃)
SplitEmFields split_em(const SplittingStructure& s, const MaxwellFieldSet& f);
MaxwellFieldSet unsplit_em(const SplittingStructure& s, const SplitEmFields& f);
// (P S)⁻* of the same pairs
SplitEmFields proxy_em(const Observer& o, const SplitEmFields& f);

// A residual field with the physical dimension of each summand.
struct Residual {
  std::string id;
  FormField value;
  std::vector<Dimension> terms;
  bool homogeneous() const { return pd_check(terms); }
};

// Adds summands while recording their dimensions.  build() throws DimensionError
// when the summands are not homogeneous.
class ResidualBuilder {
 public:
  explicit ResidualBuilder(std::string id) : id_(std::move(id)) {}
  ResidualBuilder& add(const FormField& t);
  ResidualBuilder& sub(const FormField& t);
  bool homogeneous() const { return pd_check(dims_); }
  Residual build() const;

 private:
  std::string id_;
  std::vector<FormField> parts_;
  std::vector<Dimension> dims_;
};

// Seven (five without potentials) equations in terms of D, ∂_G, χ and Ω.
std::vector<Residual> maxwell_residuals(const SplittingStructure& s, const SplitEmFields& f);
// The four equations with plain d on the shifted combinations b − Γ∧ẽ, d + Γ∧h̃, ρ − Γ∧ȷ̃.
std::vector<Residual> maxwell_residuals_alt(const SplittingStructure& s, const SplitEmFields& f);
// Proxy equations with D, ∂_τ, δ̄ and 2η̄.
std::vector<Residual> maxwell_residuals_proxy(const Observer& o, const SplitEmFields& proxies);

// Vacuum relation d = Z₀⁻¹N⁻¹*₃ẽ, h̃ = Z₀⁻¹N*₃b (regular splittings only).
std::pair<FormField, FormField> constitutive_regular(const Observer& o, const SplitEmFields& f, double Z0);
// d_{ij} = Z₀⁻¹ g₀₀^{-1/2} √|h| ε̂_{ij}^k ẽ_k and h̃_i = ½ Z₀⁻¹ √g₀₀ √|h| ε̂_i^{kl} b_{kl} at a point.
std::pair<Form<double>, Form<double>> constitutive_components(const Observer& o, const SplitEmFields& f, double Z0,
                                                               const Point& p);
// 4-D vacuum relation H = Z₀⁻¹*₄F.
FormField vacuum_excitation(const MetricField& g, const FormField& F, double Z0);
// Proxy constants ε₀ = 1/(Z₀c₀), μ₀ = Z₀/c₀ as 0-forms.
FormField eps0_field(Chart c, double Z0, double c0);
FormField mu0_field(Chart c, double Z0, double c0);

// L = −½F∧H; it splits as (0, l̃).
FormField lagrangian(const MaxwellFieldSet& f);

// p(k), w̃(ℓ̃), m̃(k), s̃(ℓ̃).  Either argument may be absent.
struct EnergyMomentum {
  std::optional<FormField> p, w, m, s;
};
EnergyMomentum energy_momentum(const SplitEmFields& f, const std::optional<VecField>& k,
                               const std::optional<VecField>& l);
// T_n = ½(ι_nH∧F − ι_nF∧H)
FormField energy_momentum_4d(const MaxwellFieldSet& f, const VecField& n);
// S⁻*T_n for n = S⁻¹(k, ℓ̃), and the same from the matrix [[−p, w̃], [−m̃, −s̃]].
FormPair split_energy_momentum_direct(const SplittingStructure& s, const MaxwellFieldSet& f, const VecPair& n);
FormPair split_energy_momentum(const SplitEmFields& f, const VecPair& n);

// R_n = ι_nF∧J and its split (0, f̃(k) + r̃(ℓ̃)).
FormField four_force(const MaxwellFieldSet& f, const VecField& n);
struct ForceDensity {
  std::optional<FormField> f, r;
};
ForceDensity force_density(const SplitEmFields& f, const std::optional<VecField>& k, const std::optional<VecField>& l);

// Θ_n = g⁻¹L_n g, its trace, and the derivation Θ̄_n on forms.
SymField theta(const MetricField& g, const VecField& n);  // stored as L_n g; Θ = g⁻¹ times this
FormField theta_trace(const MetricField& g, const VecField& n);
FormField theta_bar(const MetricField& g, const VecField& n, const FormField& a);
// X_n = −½(F∧L_nH − H∧L_nF)
FormField body_force(const MaxwellFieldSet& f, const VecField& n);
// −(2Z₀)⁻¹ F∧[L_n, *₄]F
FormField body_force_vacuum(const MetricField& g, const FormField& F, const VecField& n, double Z0);
// [L_n, *₄]a − (Θ̄_n − ½Θ_n)*₄a
FormField trautman_residual(const MetricField& g, const VecField& n, const FormField& a);

// Killing test of n on sample points.
bool is_killing(const MetricField& g, const VecField& n, std::span<const Point> pts, double tol = 1e-9);

// f̃(k) + ∂_G p(k) + (ε_χ − D)m̃(k) and r̃(ℓ̃) − ∂_G w̃(ℓ̃) + (ε_χ − D)s̃(ℓ̃).  The
// corresponding space-time vectors S⁻¹(k, 0) and S⁻¹(0, ℓ̃) must be Killing at pts.
struct BalanceResiduals {
  std::optional<Residual> momentum, energy;
};
BalanceResiduals balance_residuals(const Observer& o, const SplitEmFields& f, const std::optional<VecField>& k,
                                   const std::optional<VecField>& l, std::span<const Point> pts);

// Proxy densities from proxy fields: p(k), w, m(k), s, f(k), r.
struct ProxyEnergyMomentum {
  std::optional<FormField> p, m, f;
  FormField w, s, r;
};
ProxyEnergyMomentum proxy_energy_momentum(const SplitEmFields& proxies, const std::optional<VecField>& k);
// Poynting's theorem r − ∂_τw + (c₀⁻²ε_δ̄ − D)s and the momentum counterpart.
// Requires S⁻¹(k, 0) and S⁻¹(0, N⁻¹) to be Killing at pts.
BalanceResiduals proxy_balance_residuals(const Observer& o, const SplitEmFields& proxies,
                                         const std::optional<VecField>& k, std::span<const Point> pts);

// Nonregular natural splitting: d* = Z₀⁻¹N⁻†*_Σẽ, h* = Z₀⁻¹N†*_Σb,
// p_S = d − d*, m̃_S = h* − h̃, ρ_S = −Dp_S, ȷ̃_S = Dm̃_S + ∂_Gp_S.
struct SchiffStarFields {
  FormField d_star, h_star, p_S, m_S, rho_S, j_S;
  // p_S = Z₀⁻¹N⁻†*_Σ ι_N⃗ b and m̃_S = −ι_N⃗ d from the nonregular Hodge splitting
  FormField p_S_hodge, m_S_hodge;
};
SchiffStarFields schiff_star_fields(const Observer& o, const SplitEmFields& f, double Z0);
// dh* − ȷ̃ − ȷ̃_S − ∂_G d* and dd* − ρ − ρ_S
std::vector<Residual> schiff_residuals(const Observer& o, const SplitEmFields& f, const SchiffStarFields& st);

}  // namespace rsplit
