#pragma once

#include "boltzlayer/collision.hpp"
#include "boltzlayer/spatial.hpp"

namespace bbl {

/// Exact damped-transport semigroup S0(t): characteristic shift with linear
/// interpolation in x1, exact integrating factor exp(-(nu - sigma xi_1) t),
/// and the exact tangential phase exp(-i (kappa . xi') t) per mode. chi-gated
/// at the wall (chi(0) = 0); zero beyond the far-field truncation.
DistributionField apply_s0(const DistributionField& h0, double t, double sigma,
                           const Vector& nu, const SpatialGrid& sg, const VelocityGrid& vg);

/// Largest sigma with nu - sigma xi_1 > 0 on the grid would be min(nu/xi_1);
/// the default keeps a wide margin: 0.1 min(nu) / max(1, cutoff).
double default_sigma(const Vector& nu, const VelocityGrid& vg);
void require_damped_symbol_positive(double sigma, const Vector& nu, const VelocityGrid& vg);

struct ResidualNorms {
  double l2 = 0.0;
  double linf_beta = 0.0;
};

/// Discrete residual of the damped-weighted equation
///   dg/dt + xi . grad g - sigma xi_1 g - L g = rhs
/// with first-order upwind differences in x1 (inflow rows at the wall and
/// outflow rows at the truncation are excluded). Pass dgdt = nullptr for the
/// steady residual.
ResidualNorms transport_residual(const DistributionField& g, const DistributionField* dgdt,
                                 const DistributionField& rhs, const LinearizedOperator& op,
                                 double sigma, double beta, const SpatialGrid& sg,
                                 const VelocityGrid& vg);

}  // namespace bbl
