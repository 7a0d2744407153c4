#include "boltzlayer/field_ops.hpp"

#include <cmath>

#include "boltzlayer/util.hpp"

namespace bbl {

TangentialMultiplier tangential_multiplier(const SpatialGrid& sg,
                                           const std::function<double(const Vector2&)>& f,
                                           int quad_points) {
  const int nm = sg.n_modes();
  TangentialMultiplier m;
  m.coupling = ComplexMatrix::Zero(nm, nm);
  const double L = sg.box_length;
  const double h = L / quad_points;
  for (int k = 0; k < nm; ++k)
    for (int kp = 0; kp < nm; ++kp) {
      const Vector2 dk = sg.modes[k] - sg.modes[kp];
      Complex acc = 0.0;
      for (int a = 0; a < quad_points; ++a)
        for (int b = 0; b < quad_points; ++b) {
          const Vector2 xp(-0.5 * L + h * (a + 0.5), -0.5 * L + h * (b + 0.5));
          acc += f(xp) * std::exp(Complex(0.0, -dk.dot(xp)));
        }
      m.coupling(k, kp) = acc * (h * h / (L * L));
    }
  return m;
}

DistributionField apply_multiplier(const TangentialMultiplier& m, const DistributionField& f) {
  DistributionField out = f;
  const int nm = f.n_modes();
  for (int k = 0; k < nm; ++k) {
    out.modes[k].setZero();
    for (int kp = 0; kp < nm; ++kp) {
      const Complex c = m.coupling(k, kp);
      if (c != 0.0) out.modes[k] += c * f.modes[kp];
    }
  }
  return out;
}

DistributionField gamma_field(const DistributionField& a, const DistributionField& b,
                              const Vector& w0, const SpatialGrid& sg,
                              const VelocityGrid& vg, const CollisionQuadrature& quad) {
  DistributionField out = zero_field(sg, vg, a.rep);
  out.time = a.time;
  const int nx = sg.n_x();

  if (sg.slab()) {
    // zero-mode fields of real data stay real; use the real kernel then
    const bool real_path =
        a.modes[0].imag().cwiseAbs().maxCoeff() == 0.0 &&
        b.modes[0].imag().cwiseAbs().maxCoeff() == 0.0;
    if (real_path) {
      parallel_for(nx, [&](std::int64_t ix) {
        const Vector fa = a.modes[0].row(ix).real().transpose();
        const Vector fb = b.modes[0].row(ix).real().transpose();
        out.modes[0].row(ix) =
            gamma_bilinear(fa, fb, w0, vg, quad).transpose().cast<Complex>();
      });
      return out;
    }
  }

  parallel_for(nx, [&](std::int64_t ix) {
    for (int k = 0; k < sg.n_modes(); ++k) {
      ComplexVector acc = ComplexVector::Zero(vg.size());
      for (const auto& [p, q] : sg.conv_pairs[k]) {
        const ComplexVector fa = a.modes[p].row(ix).transpose();
        const ComplexVector fb = b.modes[q].row(ix).transpose();
        acc += gamma_bilinear(fa, fb, w0, vg, quad);
      }
      out.modes[k].row(ix) = acc.transpose();
    }
  });
  return out;
}

DistributionField apply_l_field(const LinearizedOperator& op, const DistributionField& f) {
  DistributionField out = f;
  for (int k = 0; k < f.n_modes(); ++k) {
    // (K f - nu f) row-wise: modes are (n_x x n_v)
    out.modes[k] = f.modes[k] * op.K.transpose();
    out.modes[k] -= f.modes[k] * op.nu.asDiagonal();
  }
  return out;
}

DistributionField project_p_field(const NullSpaceBasis& basis, const VelocityGrid& vg,
                                  const DistributionField& f) {
  DistributionField out = f;
  const double w = vg.cell * vg.cell * vg.cell;
  const Matrix& Phi = basis.vectors;
  for (int k = 0; k < f.n_modes(); ++k)
    out.modes[k] = (f.modes[k] * (w * Phi)) * Phi.transpose();
  return out;
}

DistributionField scale_exp_x(const DistributionField& f, double s, const SpatialGrid& sg) {
  DistributionField out = f;
  for (auto& mode : out.modes)
    for (int ix = 0; ix < sg.n_x(); ++ix) mode.row(ix) *= std::exp(s * sg.x[ix]);
  return out;
}

}  // namespace bbl
