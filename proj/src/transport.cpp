#include "boltzlayer/transport.hpp"

#include <cmath>
#include <stdexcept>

#include "boltzlayer/field_ops.hpp"
#include "boltzlayer/util.hpp"

namespace bbl {

DistributionField apply_s0(const DistributionField& h0, double t, double sigma,
                           const Vector& nu, const SpatialGrid& sg, const VelocityGrid& vg) {
  require_damped_symbol_positive(sigma, nu, vg);
  if (t < 0.0) throw std::invalid_argument("apply_s0 needs t >= 0");
  DistributionField out = zero_field(sg, vg, h0.rep);
  out.time = h0.time + t;
  const int nx = sg.n_x();
  for (int v = 0; v < vg.size(); ++v) {
    const Vector3 xi = vg.node(v);
    const double decay = std::exp(-(nu[v] - sigma * xi[0]) * t);
    for (int k = 0; k < sg.n_modes(); ++k) {
      const Vector2& kap = sg.modes[k];
      const Complex phase =
          std::exp(Complex(0.0, -(kap[0] * xi[1] + kap[1] * xi[2]) * t));
      const Complex factor = decay * phase;
      for (int ix = 0; ix < nx; ++ix) {
        const double src = sg.x[ix] - xi[0] * t;
        if (!(src > 0.0)) continue;  // chi: zero on {s <= 0}
        const auto it = sg.interp(src);
        if (it.i0 < 0) continue;  // beyond the far-field truncation
        Complex val = it.w0 * h0.modes[k](it.i0, v);
        if (it.w1 != 0.0) val += it.w1 * h0.modes[k](it.i0 + 1, v);
        out.modes[k](ix, v) = factor * val;
      }
    }
  }
  return out;
}

double default_sigma(const Vector& nu, const VelocityGrid& vg) {
  return 0.1 * nu.minCoeff() / std::max(1.0, vg.cutoff);
}

void require_damped_symbol_positive(double sigma, const Vector& nu, const VelocityGrid& vg) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
  for (int v = 0; v < vg.size(); ++v)
    if (!(nu[v] - sigma * vg.nodes(v, 0) > 0.0))
      throw NumericalError("damped symbol nu - sigma xi_1 is not positive on the grid; "
                           "reduce sigma");
}

ResidualNorms transport_residual(const DistributionField& g, const DistributionField* dgdt,
                                 const DistributionField& rhs, const LinearizedOperator& op,
                                 double sigma, double beta, const SpatialGrid& sg,
                                 const VelocityGrid& vg) {
  const int nx = sg.n_x();
  const DistributionField lg = apply_l_field(op, g);
  DistributionField res = zero_field(sg, vg, g.rep);

  for (int k = 0; k < sg.n_modes(); ++k) {
    const Vector2& kap = sg.modes[k];
    for (int v = 0; v < vg.size(); ++v) {
      const Vector3 xi = vg.node(v);
      const Complex tangential(0.0, kap[0] * xi[1] + kap[1] * xi[2]);
      const bool inflow = xi[0] > 0.0;
      const int lo = inflow ? 1 : 0;
      const int hi = inflow ? nx : nx - 1;
      for (int ix = lo; ix < hi; ++ix) {
        Complex ddx;
        if (inflow)
          ddx = (g.modes[k](ix, v) - g.modes[k](ix - 1, v)) / (sg.x[ix] - sg.x[ix - 1]);
        else
          ddx = (g.modes[k](ix + 1, v) - g.modes[k](ix, v)) / (sg.x[ix + 1] - sg.x[ix]);
        Complex r = xi[0] * ddx + tangential * g.modes[k](ix, v) -
                    sigma * xi[0] * g.modes[k](ix, v) - lg.modes[k](ix, v) -
                    rhs.modes[k](ix, v);
        if (dgdt) r += dgdt->modes[k](ix, v);
        res.modes[k](ix, v) = r;
      }
    }
  }

  ResidualNorms out;
  out.l2 = field_l2(res, sg, vg);
  out.linf_beta = field_linf_beta(res, beta, sg, vg);
  return out;
}

}  // namespace bbl
