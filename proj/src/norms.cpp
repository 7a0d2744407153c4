#include "boltzlayer/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace bbl {

double field_l2(const DistributionField& f, const SpatialGrid& sg, const VelocityGrid& vg) {
  double acc = 0.0;
  for (const auto& mode : f.modes) {
    for (int ix = 0; ix < sg.n_x(); ++ix) {
      double row = 0.0;
      for (int v = 0; v < vg.size(); ++v) row += vg.weights[v] * std::norm(mode(ix, v));
      acc += sg.wx[ix] * row;
    }
  }
  return std::sqrt(acc);
}

double field_linf_beta(const DistributionField& f, double beta, const SpatialGrid& sg,
                       const VelocityGrid& vg) {
  const Vector br = vg.brackets();
  double sup = 0.0;
  for (int ix = 0; ix < sg.n_x(); ++ix)
    for (int v = 0; v < vg.size(); ++v) {
      double amp = 0.0;
      for (const auto& mode : f.modes) amp += std::abs(mode(ix, v));
      sup = std::max(sup, std::pow(br[v], beta) * amp);
    }
  return sup;
}

NormReport norms(const DistributionField& f, double beta, const SpatialGrid& sg,
                 const VelocityGrid& vg) {
  if (!(beta > 1.5))
    throw std::invalid_argument(
        "weighted norms need beta > 3/2 (embedding into L^inf_x L^2_xi)");
  NormReport r;
  r.beta = beta;
  r.l2 = field_l2(f, sg, vg);
  r.linf_beta = field_linf_beta(f, beta, sg, vg);
  r.bracket = r.l2 + r.linf_beta;
  return r;
}

double bracket_norm(const DistributionField& f, double beta, const SpatialGrid& sg,
                    const VelocityGrid& vg) {
  return field_l2(f, sg, vg) + field_linf_beta(f, beta, sg, vg);
}

double sup_time_norm(const std::vector<DistributionField>& traj, const std::vector<double>& t,
                     double beta, double kappa, const SpatialGrid& sg,
                     const VelocityGrid& vg) {
  double sup = 0.0;
  for (std::size_t n = 0; n < traj.size(); ++n)
    sup = std::max(sup, std::exp(kappa * t[n]) * bracket_norm(traj[n], beta, sg, vg));
  return sup;
}

double linf_x_l2_xi(const DistributionField& f, const SpatialGrid& sg,
                    const VelocityGrid& vg) {
  double sup = 0.0;
  for (int ix = 0; ix < sg.n_x(); ++ix) {
    double acc = 0.0;
    for (int v = 0; v < vg.size(); ++v) {
      double amp = 0.0;
      for (const auto& mode : f.modes) amp += std::abs(mode(ix, v));
      acc += vg.weights[v] * amp * amp;
    }
    sup = std::max(sup, std::sqrt(acc));
  }
  return sup;
}

double embedding_constant(double beta, const VelocityGrid& vg) {
  const Vector br = vg.brackets();
  double acc = 0.0;
  for (int v = 0; v < vg.size(); ++v) acc += vg.weights[v] * std::pow(br[v], -2.0 * beta);
  return std::sqrt(acc);
}

}  // namespace bbl
