#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsplit/em.hpp"

namespace rsplit {

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Program units; L fixes the scale of coordinate time (L = c₀ is the Born chart).
struct ScenarioParams {
  double omega = 0.3, L = 1.0, c0 = 1.0, Z0 = 1.0;
  double Q = 1.0, R1 = 0.2, R2 = 0.4, R = 0.8;
};

struct Scenario {
  std::string name;
  std::string coordinates;
  std::string singular_set;
  ScenarioParams params;
  Observer observer;
  std::optional<MaxwellFieldSet> fields;
  // Closed forms on the scenario chart, keyed by quantity name.
  std::map<std::string, FormField> oracle;
  std::map<std::string, SymField> oracle_tensors;
  std::map<std::string, VecField> oracle_vectors;
  // Sampling box and admissibility (off the singular set, β < 1).
  Point lo, hi;
  std::function<bool(const Point&)> admissible;

  const SplittingStructure& splitting() const { return observer.splitting(); }
  const MetricField& metric() const { return observer.metric(); }
  // Sobol points in the box that pass admissible().
  std::vector<Point> sample(int n, std::uint64_t skip = 0) const;
};

enum class Coordinates { Cartesian, Cylindrical };

// g = diag(L², −1, −1, −1) with Γ = 0, in (t, x, y, z) or (t, r, φ, z).
Scenario scenario_minkowski_rest(double L, Coordinates c = Coordinates::Cartesian);
// Regular stationary splitting on helical world-lines in (t, r, φ, z).
Scenario scenario_rotating(const ScenarioParams& p);
Scenario scenario_rotating(double omega, double L, double c0);
// Natural nonregular splitting of the rotating observer in (t, x, y, z).
Scenario scenario_schiff_natural(const ScenarioParams& p);
Scenario scenario_schiff_natural(double omega, double L);

// Lorentz factor γ and β = ωr/c₀ as 0-forms on a chart whose radius is
// coordinate 1 (cylindrical) or √(x₁² + x₂²) (Cartesian).
FormField beta_field(Chart c, const ScenarioParams& p, Coordinates coords = Coordinates::Cylindrical);
FormField gamma_field(Chart c, const ScenarioParams& p, Coordinates coords = Coordinates::Cylindrical);

// J = ρ_{rφz} dr∧(dφ + ωL/c₀ dt)∧dz of a charge distribution at rest in the
// nonrotating frame, on the rotating bundle chart.
FormField rest_frame_current(const Scenario& rotating, ScalarFn rho_rphiz);
// (γ²ρ₀, −βΛ⁻¹ι_ẘρ₀) with ρ₀ = ρ_{rφz} dr∧dφ∧dz; returned as (ρ, ȷ̃).
std::pair<FormField, FormField> rest_frame_current_split_oracle(const Scenario& rotating, ScalarFn rho_rphiz);

// ---- axial splitting ------------------------------------------------------------
// U(1) fibers are the circles around the axis; the reduced chart is (φ, r, z)
// with φ the fiber parameter, so meridian-plane fields live on Chart{3, true}
// with axes (r, z).

struct AxialReduction {
  ScenarioParams params;
  double t0 = 0.0;
  SymField h_axial;          // h on the (φ, r, z) bundle chart
  SplittingStructure axial;  // h-orthogonal, group U
  SymField h_bar;            // Σ̊*h
  FormField N_ring;          // |ẘ|, u*-valued
  FormField N_bar;           // first entry of the split of N
  FormField Lambda;          // γ⁻²(N̊N̄⁻¹)
  FormField Gamma_bar;       // second entry of the split of Γ
  FormField Omega_bar;       // second entry of the split of Ω
  FormField beta, gamma;
  std::map<std::string, FormField> oracle;
};

Point to_axial(const Point& p4);
Point from_axial(const Point& py, double t0);

// Reduction of the rotating scenario at coordinate time t0.
AxialReduction axial_reduce(const Scenario& rotating, double t0 = 0.0);
// Parametric field on (t; r, φ, z) → pair on the meridian plane, and back.
FormPair axial_split(const AxialReduction& ax, const FormField& a);
FormField axial_unsplit(const AxialReduction& ax, const FormPair& p);

// Meridian-plane fields ē, b̄, h̄, d̄, ȷ̄, ρ̄.
struct ReducedEm {
  FormField e, b, h, d, j, rho;
};
struct AxialEmSplit {
  ReducedEm reduced;
  // Entries of the decoupled second system; zero for azimuthal currents.
  std::vector<std::pair<std::string, FormField>> trivial;
};
// Throws ScenarioError when a field depends on φ at one of pts.
AxialEmSplit reduce_em(const AxialReduction& ax, const SplitEmFields& f, std::span<const Point> axial_pts,
                       double tol = 1e-9);
// Inverse of reduce_em for fields of the nontrivial system.
SplitEmFields lift_em(const AxialReduction& ax, const ReducedEm& r);
// −db̄ − Ω̄∧ē, −dd̄ − ρ̄ + Ω̄∧h̄, dē, dh̄ − ȷ̄
std::vector<Residual> reduced_maxwell_residuals(const AxialReduction& ax, const ReducedEm& r);
// (Z₀⁻¹γ²Λ*₂ē, Z₀γ²Λ*₂h̄), to be compared with (d̄, b̄).
std::pair<FormField, FormField> reduced_constitutive(const AxialReduction& ax, const ReducedEm& r, double Z0);

// ---- Schiff's rotating spheres -------------------------------------------------

struct SchiffSolution {
  ScenarioParams params;
  AxialReduction axial;
  ReducedEm zeroth, first, exact;
  FormField Omega_bar_1;  // d(βΛ)
  // Admissible meridian-plane point: inside the domain, off the axis and off
  // tubes of radius 0.02·R₁ around both spheres.
  bool smooth_at(const Point& y) const;
  std::vector<Point> sample(int n, std::uint64_t skip = 0) const;
};

// Surface charges are not represented: ρ̄ and ȷ̄ vanish at smooth points.
SchiffSolution scenario_schiff_solution(const ScenarioParams& p);

}  // namespace rsplit
