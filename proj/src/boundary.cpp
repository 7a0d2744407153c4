#include "boltzlayer/boundary.hpp"

#include <cmath>
#include <stdexcept>

#include "boltzlayer/util.hpp"

namespace bbl {

double BoundaryData::time_factor(double t) const {
  if (!periodic()) return 1.0;
  const double phase = std::fmod(t, spec.period) / spec.period;
  return 1.0 + spec.time_mod * std::sin(2.0 * M_PI * phase);
}

double BoundaryData::time_factor_dt(double t) const {
  if (!periodic()) return 0.0;
  const double phase = std::fmod(t, spec.period) / spec.period;
  return spec.time_mod * 2.0 * M_PI / spec.period * std::cos(2.0 * M_PI * phase);
}

BoundaryData build_boundary_data(const BoundarySpec& spec, const EquilibriumState& state,
                                 const SpatialGrid& sg, const VelocityGrid& vg) {
  BoundaryData d;
  d.spec = spec;
  d.state = state;

  const Vector br = vg.brackets();
  d.a0 = Vector::Zero(vg.size());
  Vector shape(vg.size());
  for (int v = 0; v < vg.size(); ++v) {
    const Vector3 xi = vg.node(v);
    const double gauss =
        std::exp(-(xi - state.u_inf).squaredNorm() / (4.0 * state.T_inf));
    shape[v] = std::pow(br[v], -spec.beta) * gauss;
    if (xi[0] > 0.0) d.a0[v] = spec.delta_tilde * shape[v];
  }
  // stated datum bound |a0| <= delta_tilde <xi>^-beta
  for (int v = 0; v < vg.size(); ++v)
    if (std::abs(d.a0[v]) > spec.delta_tilde * std::pow(br[v], -spec.beta) * (1 + 1e-12))
      throw NumericalError("boundary datum violates its stated envelope");

  // perturbation datum: eps * shape * (x' profile projected on the mode set)
  d.fb_shape.assign(sg.n_modes(), ComplexVector::Zero(vg.size()));
  if (sg.slab()) {
    d.fb_shape[0] = (spec.eps * shape).cast<Complex>();
  } else {
    const double L = sg.box_length;
    const int nq = 128;
    const double h = L / nq;
    for (int k = 0; k < sg.n_modes(); ++k) {
      Complex ck = 0.0;
      for (int a = 0; a < nq; ++a)
        for (int b = 0; b < nq; ++b) {
          const Vector2 xp(-0.5 * L + h * (a + 0.5), -0.5 * L + h * (b + 0.5));
          const double prof = std::exp(-xp.squaredNorm() / (2.0 * spec.gauss_width *
                                                            spec.gauss_width)) *
                              mollifier(xp.norm() / spec.R);
          ck += prof * std::exp(Complex(0.0, -sg.modes[k].dot(xp)));
        }
      ck *= h * h / (L * L);
      d.fb_shape[k] = ck * spec.eps * shape.cast<Complex>();
    }
  }

  // exact periodicity of the time factor
  if (d.periodic()) {
    for (double t : {0.0, 0.37 * spec.period, 0.81 * spec.period})
      if (std::abs(d.time_factor(t) - d.time_factor(t + spec.period)) > 1e-9)
        throw NumericalError("time factor is not exactly periodic");
  }

  if (sg.slab()) {
    d.phi_r.coupling = ComplexMatrix::Ones(1, 1);  // R = infinity in slab symmetry
    d.phi_r_sqrt.coupling = ComplexMatrix::Ones(1, 1);
    d.dphi_r_d2.coupling = ComplexMatrix::Zero(1, 1);
    d.dphi_r_d3.coupling = ComplexMatrix::Zero(1, 1);
  } else {
    const double R = spec.R;
    d.phi_r = tangential_multiplier(
        sg, [R](const Vector2& xp) { return mollifier(xp.norm() / R); });
    d.phi_r_sqrt = tangential_multiplier(
        sg, [R](const Vector2& xp) { return std::sqrt(mollifier(xp.norm() / R)); });
    for (int axis = 0; axis < 2; ++axis) {
      auto& target = axis == 0 ? d.dphi_r_d2 : d.dphi_r_d3;
      target = tangential_multiplier(sg, [R, axis](const Vector2& xp) {
        const double r = xp.norm();
        if (r == 0.0) return 0.0;
        return mollifier_deriv(r / R) * xp[axis] / (R * r);
      });
    }
  }
  return d;
}

DistributionField extend_boundary_fb(const BoundaryData& data, const SpatialGrid& sg,
                                     const VelocityGrid& vg) {
  DistributionField fb = zero_field(sg, vg, Representation::Plain);
  for (int k = 0; k < sg.n_modes(); ++k) {
    const Vector2& kap = sg.modes[k];
    for (int v = 0; v < vg.size(); ++v) {
      const Vector3 xi = vg.node(v);
      if (!(xi[0] > 0.0)) continue;  // chi(xi_1): zero for xi_1 <= 0
      const double rate = (kap[0] * xi[1] + kap[1] * xi[2]) / xi[0];
      for (int ix = 0; ix < sg.n_x(); ++ix)
        fb.modes[k](ix, v) =
            data.fb_shape[k][v] * std::exp(Complex(0.0, -sg.x[ix] * rate));
    }
  }
  return fb;
}

DistributionField build_lift_stationary(const DistributionField& fb, const SpatialGrid& sg) {
  DistributionField u = fb;
  for (auto& mode : u.modes)
    for (int ix = 0; ix < sg.n_x(); ++ix) mode.row(ix) *= mollifier(sg.x[ix]);
  return u;
}

DistributionField build_lift_periodic(const BoundaryData& data, const SpatialGrid& sg,
                                      const VelocityGrid& vg, double t) {
  DistributionField u = zero_field(sg, vg, Representation::Plain);
  u.time = t;
  const double tf = data.time_factor(t);
  for (int k = 0; k < sg.n_modes(); ++k)
    for (int ix = 0; ix < sg.n_x(); ++ix)
      u.modes[k].row(ix) = (tf * mollifier(sg.x[ix])) * data.fb_shape[k].transpose();
  return u;
}

DistributionField build_lift(const BoundaryData& data, const SpatialGrid& sg,
                             const VelocityGrid& vg, LiftKind kind, double t) {
  if (kind == LiftKind::Stationary)
    return build_lift_stationary(extend_boundary_fb(data, sg, vg), sg);
  return build_lift_periodic(data, sg, vg, t);
}

struct InhomogeneousTerm::Impl {
  bool is_periodic = false;
  double period = 0.0;
  // H(t) = h0 + tf(t) h1 + tf(t)^2 h2 + tf'(t) h3
  DistributionField h0, h1, h2, h3;
  BoundaryData data;
  mutable DistributionField cache;
  mutable double cache_t = std::numeric_limits<double>::quiet_NaN();
};

bool InhomogeneousTerm::periodic() const { return impl && impl->is_periodic; }
double InhomogeneousTerm::period() const { return impl ? impl->period : 0.0; }

const DistributionField& InhomogeneousTerm::at(double t) const {
  auto& im = *impl;
  if (!im.is_periodic) t = 0.0;
  if (im.cache_t == t && !im.cache.empty()) return im.cache;
  im.cache = im.h0;
  const double tf = im.data.time_factor(t);
  const double tfd = im.data.time_factor_dt(t);
  add_scaled(im.cache, tf, im.h1);
  add_scaled(im.cache, tf * tf, im.h2);
  if (tfd != 0.0) add_scaled(im.cache, tfd, im.h3);
  im.cache.time = t;
  im.cache_t = t;
  return im.cache;
}

InhomogeneousTerm assemble_h(const BoundaryData& data,
                             const std::optional<Matrix>& tilde_f,
                             const LinearizedOperator& op, const CollisionQuadrature& quad,
                             const SpatialGrid& sg, const VelocityGrid& vg,
                             LiftKind branch) {
  if (!tilde_f.has_value())
    throw std::invalid_argument(
        "assemble_h needs the 1D slab profile; run the slab solve first");
  if (tilde_f->rows() != sg.n_x() || tilde_f->cols() != vg.size())
    throw std::invalid_argument("slab profile shape does not match the grids");

  const Vector w0 = weight_w0(data.state, vg);

  // slab profile as a zero-mode field
  DistributionField ft = zero_field(sg, vg, Representation::Plain);
  ft.modes[0] = tilde_f->cast<Complex>();

  // lift shape and its transport field xi . grad U (analytic)
  DistributionField u_shape, u_transport;
  if (branch == LiftKind::Stationary) {
    const DistributionField fb = extend_boundary_fb(data, sg, vg);
    u_shape = build_lift_stationary(fb, sg);
    // xi . grad (phi F_b) = xi_1 phi'(x_1) F_b, since xi . grad F_b = 0
    u_transport = fb;
    for (int k = 0; k < sg.n_modes(); ++k)
      for (int ix = 0; ix < sg.n_x(); ++ix)
        u_transport.modes[k].row(ix) =
            (mollifier_deriv(sg.x[ix]) * fb.modes[k].row(ix).array() *
             vg.nodes.col(0).transpose().array().cast<Complex>())
                .matrix();
  } else {
    u_shape = build_lift_periodic(data, sg, vg, 0.0);
    if (data.periodic()) {
      // strip the t=0 time factor; the shape carries no time dependence
      const double tf0 = data.time_factor(0.0);
      for (auto& m : u_shape.modes) m /= tf0;
    }
    u_transport = zero_field(sg, vg, Representation::Plain);
    for (int k = 0; k < sg.n_modes(); ++k) {
      const Vector2& kap = sg.modes[k];
      for (int ix = 0; ix < sg.n_x(); ++ix)
        for (int v = 0; v < vg.size(); ++v) {
          const Vector3 xi = vg.node(v);
          const Complex trans =
              xi[0] * mollifier_deriv(sg.x[ix]) +
              Complex(0.0, kap[0] * xi[1] + kap[1] * xi[2]) * mollifier(sg.x[ix]);
          u_transport.modes[k](ix, v) = trans * data.fb_shape[k][v];
        }
    }
  }

  const DistributionField psi0 = apply_multiplier(data.phi_r, ft);        // phi_R f~
  const DistributionField sqrt_ft = apply_multiplier(data.phi_r_sqrt, ft);

  InhomogeneousTerm term;
  term.impl = std::make_shared<InhomogeneousTerm::Impl>();
  auto& im = *term.impl;
  im.is_periodic = branch == LiftKind::Periodic && data.periodic();
  im.period = data.spec.period;
  im.data = data;

  // h0: terms involving only the slab profile
  im.h0 = gamma_field(psi0, psi0, w0, sg, vg, quad);
  {
    DistributionField g_sqrt = gamma_field(sqrt_ft, sqrt_ft, w0, sg, vg, quad);
    add_scaled(im.h0, -1.0, g_sqrt);
  }
  {
    // - sum_i xi_i (d_i phi_R) f~
    const DistributionField d2 = apply_multiplier(data.dphi_r_d2, ft);
    const DistributionField d3 = apply_multiplier(data.dphi_r_d3, ft);
    for (int k = 0; k < sg.n_modes(); ++k) {
      im.h0.modes[k] -= d2.modes[k] * vg.nodes.col(1).asDiagonal();
      im.h0.modes[k] -= d3.modes[k] * vg.nodes.col(2).asDiagonal();
    }
  }

  // h1: linear-in-U terms: L U - xi.grad U + 2 Gamma(phi_R f~, U)
  im.h1 = apply_l_field(op, u_shape);
  add_scaled(im.h1, -1.0, u_transport);
  {
    DistributionField cross = gamma_field(psi0, u_shape, w0, sg, vg, quad);
    add_scaled(im.h1, 2.0, cross);
  }

  // h2: Gamma(U, U); h3: -U (time-derivative slot)
  im.h2 = gamma_field(u_shape, u_shape, w0, sg, vg, quad);
  im.h3 = u_shape;
  for (auto& m : im.h3.modes) m = -m;
  if (!im.is_periodic) im.h3 = zero_field(sg, vg, Representation::Plain);

  return term;
}

}  // namespace bbl
