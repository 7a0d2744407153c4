#pragma once

#include <functional>

#include "boltzlayer/collision.hpp"
#include "boltzlayer/spatial.hpp"

namespace bbl {

/// Coupling matrix of a tangential multiplier function m(x'): mode k of the
/// product picks up sum_k' coeff(kappa_k - kappa_k') u_k', with coefficients
/// computed on the periodic box. Identity in slab symmetry.
struct TangentialMultiplier {
  ComplexMatrix coupling;  // n_modes x n_modes
};

TangentialMultiplier tangential_multiplier(const SpatialGrid& sg,
                                           const std::function<double(const Vector2&)>& f,
                                           int quad_points = 128);

DistributionField apply_multiplier(const TangentialMultiplier& m, const DistributionField& f);

/// Gamma(a, b) applied at every spatial node, with tangential modes combined
/// by the (truncated) convolution over the grid's mode set.
DistributionField gamma_field(const DistributionField& a, const DistributionField& b,
                              const Vector& w0, const SpatialGrid& sg,
                              const VelocityGrid& vg, const CollisionQuadrature& quad);

/// L applied at every (x, mode) slice.
DistributionField apply_l_field(const LinearizedOperator& op, const DistributionField& f);

/// P-projection applied at every (x, mode) slice.
DistributionField project_p_field(const NullSpaceBasis& basis, const VelocityGrid& vg,
                                  const DistributionField& f);

/// Pointwise multiply every mode by exp(s * x1).
DistributionField scale_exp_x(const DistributionField& f, double s, const SpatialGrid& sg);

}  // namespace bbl
