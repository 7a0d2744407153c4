// Independent reference implementations used only by tests. These deliberately
// avoid the library's optimized code paths: plain nested loops, own
// interpolation, own conservation solve.
#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "boltzlayer/collision.hpp"
#include "boltzlayer/velocity_grid.hpp"

namespace bbl::test {

inline bool oracle_trilinear(const VelocityGrid& g, const Vector3& p, int idx[8],
                             double wt[8]) {
  double fr[3];
  int b[3];
  for (int a = 0; a < 3; ++a) {
    const double u = (p[a] + g.cutoff) / g.cell - 0.5;
    b[a] = static_cast<int>(std::floor(u));
    fr[a] = u - std::floor(u);
    if (b[a] < 0 || b[a] + 1 >= g.per_axis) return false;
  }
  int t = 0;
  for (int dx = 0; dx < 2; ++dx)
    for (int dy = 0; dy < 2; ++dy)
      for (int dz = 0; dz < 2; ++dz, ++t) {
        idx[t] = g.index_of(b[0] + dx, b[1] + dy, b[2] + dz);
        wt[t] = (dx ? fr[0] : 1 - fr[0]) * (dy ? fr[1] : 1 - fr[1]) *
                (dz ? fr[2] : 1 - fr[2]);
      }
  return true;
}

/// Frame with third axis along g, pivoting on the smallest |g| component.
inline void oracle_frame(const Vector3& g, Vector3& e1, Vector3& e2, Vector3& e3) {
  e3 = g.normalized();
  Vector3 pivot = Vector3::Zero();
  int a = 0;
  if (std::abs(e3[1]) < std::abs(e3[a])) a = 1;
  if (std::abs(e3[2]) < std::abs(e3[a])) a = 2;
  pivot[a] = 1.0;
  e1 = pivot.cross(e3).normalized();
  e2 = e3.cross(e1);
}

/// Brute-force gather-form Q: full ordered loops over (output, partner, omega),
/// no pair symmetry reduction, conservation enforced through an explicit 5x5
/// Gram solve on the raw moments.
inline Vector oracle_collision_q(const Vector& F, const Vector& G,
                                 const VelocityGrid& grid, const CollisionQuadrature& quad) {
  const int N = grid.size();
  const int M = quad.sphere.size();
  const double w = grid.cell * grid.cell * grid.cell;
  Vector out = Vector::Zero(N);
  for (int m = 0; m < N; ++m) {
    const Vector3 xm = grid.node(m);
    double acc = 0.0;
    for (int j = 0; j < N; ++j) {
      if (j == m) continue;
      const Vector3 xj = grid.node(j);
      const Vector3 g = xm - xj;
      acc -= 2.0 * M_PI * g.norm() * (F[m] * G[j] + F[j] * G[m]);
      Vector3 e1, e2, e3;
      oracle_frame(g, e1, e2, e3);
      for (int k = 0; k < M; ++k) {
        const Vector3 cano = quad.sphere.nodes.row(k).transpose();
        const Vector3 om = cano[0] * e1 + cano[1] * e2 + cano[2] * e3;
        const double d = g.norm() * cano[2];
        int ia[8], ib[8];
        double wa[8], wb[8];
        if (!oracle_trilinear(grid, Vector3(xm - d * om), ia, wa)) continue;
        if (!oracle_trilinear(grid, Vector3(xj + d * om), ib, wb)) continue;
        double fa = 0, fb = 0, ga = 0, gb = 0, ma = 0, mb = 0;
        for (int t = 0; t < 8; ++t) {
          fa += wa[t] * F[ia[t]];
          fb += wb[t] * F[ib[t]];
          ga += wa[t] * G[ia[t]];
          gb += wb[t] * G[ib[t]];
          ma += wa[t] * quad.m_hat[ia[t]];
          mb += wb[t] * quad.m_hat[ib[t]];
        }
        const double gain =
            quad.m_hat[m] * quad.m_hat[j] / (ma * mb) * (fa * gb + fb * ga);
        acc += quad.sphere.weights[k] * std::abs(d) * gain;
      }
    }
    out[m] = 0.5 * w * quad.sigma0 * acc;
  }

  // Conservation correction: subtract a Maxwellian-weighted combination of the
  // invariants so that all five plain moments vanish. Columns are normalized
  // in the Mhat-weighted product to keep the Gram solve well conditioned.
  Eigen::Matrix<double, Eigen::Dynamic, 5> psi(N, 5);
  psi.col(0).setOnes();
  for (int a = 0; a < 3; ++a) psi.col(1 + a) = grid.nodes.col(a);
  psi.col(4) = grid.nodes.rowwise().squaredNorm();
  for (int a = 0; a < 5; ++a)
    psi.col(a) /= std::sqrt(w * psi.col(a).dot(quad.m_hat.cwiseProduct(psi.col(a))));
  const Matrix chi = quad.m_hat.asDiagonal() * psi;  // correction directions
  Eigen::Matrix<double, 5, 5> gram = w * (psi.transpose() * chi);
  Eigen::Matrix<double, 5, 1> mom = w * (psi.transpose() * out);
  out -= chi * gram.fullPivLu().solve(mom);
  return out;
}

/// High-resolution radial reference for the collision frequency
/// nu(xi) = 2 pi sigma0 \int |xi - xi*| M_inf(xi*) d xi*, reduced to a 1D
/// integral over s = |xi* - u| with the exact spherical average of |xi - xi*|.
inline double oracle_nu_radial(const EquilibriumState& state, const Vector3& xi,
                               int panels = 40000) {
  const double T = state.T_inf;
  const double v = (xi - state.u_inf).norm();
  const double smax = 14.0 * std::sqrt(T) + 1.0;
  const double h = smax / panels;
  auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double avg = v > 1e-12
                           ? (std::pow(v + s, 3) - std::pow(std::abs(v - s), 3)) / (6.0 * v * s)
                           : s + v * v / (3.0 * s);
    return std::exp(-s * s / (2.0 * T)) * 4.0 * M_PI * s * s * avg;
  };
  // Simpson rule.
  double acc = integrand(0.0) + integrand(smax);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
  const double integral = acc * h / 3.0;
  const double pref = state.rho_inf / std::pow(2.0 * M_PI * T, 1.5);
  return 2.0 * M_PI * state.sigma0 * pref * integral;
}

/// Independent fine tensor-midpoint quadrature of Maxwellian moments.
struct RefMoments {
  double mass;
  Vector3 momentum;
  double energy;
};

inline RefMoments oracle_maxwellian_moments(const EquilibriumState& state, double radius,
                                            int n) {
  RefMoments r{0.0, Vector3::Zero(), 0.0};
  const double h = 2.0 * radius / n;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        Vector3 xi(-radius + h * (ix + 0.5), -radius + h * (iy + 0.5),
                   -radius + h * (iz + 0.5));
        const double m = maxwellian_at(state, xi) * h * h * h;
        r.mass += m;
        r.momentum += m * xi;
        r.energy += m * xi.squaredNorm();
      }
  return r;
}

/// Linearization of the corrected collision_q around M_inf by central
/// differences, exact for the bilinear discrete Q. Returns the matrix of
/// f -> W0^{-1} d/de Q(M + e W0 f, M + e W0 f)|_{e=0}.
inline Matrix oracle_linearized_fd(const EquilibriumState& state, const VelocityGrid& grid,
                                   const CollisionQuadrature& quad) {
  const int N = grid.size();
  const Vector m_inf = maxwellian(state, grid);
  const Vector w0 = weight_w0(state, grid);
  const double eps = 1e-3;
  Matrix L(N, N);
  for (int n = 0; n < N; ++n) {
    Vector dir = Vector::Zero(N);
    dir[n] = w0[n];
    const Vector qp = collision_q(Vector(m_inf + eps * dir), Vector(m_inf + eps * dir),
                                  grid, quad);
    const Vector qm = collision_q(Vector(m_inf - eps * dir), Vector(m_inf - eps * dir),
                                  grid, quad);
    L.col(n) = (qp - qm).cwiseQuotient(w0) / (2.0 * eps);
  }
  return L;
}

}  // namespace bbl::test
