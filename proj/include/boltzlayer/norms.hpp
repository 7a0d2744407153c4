#pragma once

#include <vector>

#include "boltzlayer/spatial.hpp"
#include "boltzlayer/types.hpp"
#include "boltzlayer/velocity_grid.hpp"

namespace bbl {

/// Discrete norms of the paper's function spaces. The tangential directions
/// form a periodic unit cell: the L2 norm sums |mode|^2 (Parseval per unit
/// area), the weighted sup norm bounds the tangential sup by the l1 sum over
/// modes (exact in slab symmetry).
struct NormReport {
  double l2 = 0.0;
  double linf_beta = 0.0;
  double bracket = 0.0;  // [[.]] = l2 + linf_beta
  double beta = 0.0;
};

double field_l2(const DistributionField& f, const SpatialGrid& sg, const VelocityGrid& vg);
double field_linf_beta(const DistributionField& f, double beta, const SpatialGrid& sg,
                       const VelocityGrid& vg);

/// Throws for beta <= 3/2 (the embedding L^inf_beta into L^inf_x L^2_xi needs
/// beta > 3/2).
NormReport norms(const DistributionField& f, double beta, const SpatialGrid& sg,
                 const VelocityGrid& vg);

double bracket_norm(const DistributionField& f, double beta, const SpatialGrid& sg,
                    const VelocityGrid& vg);

/// sup over t of e^{kappa t} [[f(t)]]_beta for a trajectory sampled in time.
double sup_time_norm(const std::vector<DistributionField>& traj, const std::vector<double>& t,
                     double beta, double kappa, const SpatialGrid& sg,
                     const VelocityGrid& vg);

/// sup_x ||f(x,.)||_{L^2_xi}
double linf_x_l2_xi(const DistributionField& f, const SpatialGrid& sg,
                    const VelocityGrid& vg);

/// Discrete embedding constant: ||f||_{L^inf_x L^2_xi} <= C(beta) ||f||_beta,
/// C(beta)^2 = sum_v w_v <xi>^{-2 beta}.
double embedding_constant(double beta, const VelocityGrid& vg);

}  // namespace bbl
