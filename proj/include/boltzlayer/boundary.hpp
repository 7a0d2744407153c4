#pragma once

#include <memory>
#include <optional>

#include "boltzlayer/field_ops.hpp"
#include "boltzlayer/spatial.hpp"

namespace bbl {

/// Parameters of the boundary-datum family used by the experiments: the 1D
/// inflow datum a0 and the perturbation datum f_b (time-periodic when period
/// is positive, time-independent otherwise), localized in x' by a Gaussian
/// profile truncated at radius R. In slab symmetry the x' profile collapses to
/// the zero mode and phi_R is identically one.
struct BoundarySpec {
  double beta = 4.0;
  double delta_tilde = 1e-3;  // amplitude of a0
  double eps = 1e-3;          // amplitude of the perturbation datum
  double period = 0.0;        // T* > 0 for time-periodic data
  double time_mod = 0.5;      // modulation depth of the sin(2 pi t / T*) factor
  double gauss_width = 2.0;
  double R = 4.0;
};

struct BoundaryData {
  BoundarySpec spec;
  EquilibriumState state;
  Vector a0;                            // inflow datum on the velocity grid
  std::vector<ComplexVector> fb_shape;  // perturbation datum per mode (no time factor)
  TangentialMultiplier phi_r;
  TangentialMultiplier phi_r_sqrt;
  TangentialMultiplier dphi_r_d2;
  TangentialMultiplier dphi_r_d3;

  double time_factor(double t) const;
  double time_factor_dt(double t) const;
  bool periodic() const { return spec.period > 0.0; }
};

/// Precomputes datum vectors and phi_R multipliers; verifies the stated datum
/// bounds (|a0| <= delta <xi>^-beta, exact periodicity of the time factor).
BoundaryData build_boundary_data(const BoundarySpec& spec, const EquilibriumState& state,
                                 const SpatialGrid& sg, const VelocityGrid& vg);

/// Characteristic extension of the stationary perturbation datum:
/// F_b(x, xi) = chi(xi_1) f_b^s(x' - x_1 xi'/xi_1, xi); per tangential mode
/// this is the exact phase factor exp(-i x_1 (kappa . xi') / xi_1).
DistributionField extend_boundary_fb(const BoundaryData& data, const SpatialGrid& sg,
                                     const VelocityGrid& vg);

/// U^s = phi(x_1) F_b. Vanishes identically for x_1 > 2.
DistributionField build_lift_stationary(const DistributionField& fb, const SpatialGrid& sg);

/// U*(t) = phi(x_1) f_b^*(t, x', xi) (no characteristic tilt, no chi factor).
DistributionField build_lift_periodic(const BoundaryData& data, const SpatialGrid& sg,
                                      const VelocityGrid& vg, double t);

enum class LiftKind { Stationary, Periodic };
DistributionField build_lift(const BoundaryData& data, const SpatialGrid& sg,
                             const VelocityGrid& vg, LiftKind kind, double t = 0.0);

/// The inhomogeneous forcing of the damped-weighted perturbation equation,
/// evaluated lazily per time sample (values are cached; for time-independent
/// data there is a single slice).
class InhomogeneousTerm {
 public:
  InhomogeneousTerm() = default;
  bool periodic() const;
  double period() const;
  /// H (plain representation) at time t.
  const DistributionField& at(double t) const;

  struct Impl;
  std::shared_ptr<Impl> impl;
};

/// Builds H from the slab profile tilde_f (n_x x n_v, the 1D stationary
/// solution), the boundary data, and the assembled operator. The two branches
/// differ in how the lift's transport term enters: the stationary branch uses
/// the characteristic-extension identity xi . grad U^s = F_b xi_1 phi'(x_1),
/// the periodic branch uses -dU/dt - xi . grad U evaluated analytically.
/// Throws when tilde_f is absent (run the slab solve first).
InhomogeneousTerm assemble_h(const BoundaryData& data,
                             const std::optional<Matrix>& tilde_f,
                             const LinearizedOperator& op, const CollisionQuadrature& quad,
                             const SpatialGrid& sg, const VelocityGrid& vg,
                             LiftKind branch);

}  // namespace bbl
