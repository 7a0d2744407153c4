#include "boltzlayer/velocity_grid.hpp"

#include <cmath>
#include <stdexcept>

#include "boltzlayer/util.hpp"

namespace bbl {

VelocityGrid build_grid(int per_axis, double cutoff) {
  if (per_axis < 4)
    throw std::invalid_argument(
        "velocity grid needs per_axis >= 4 to resolve the five collision invariants");
  if (cutoff <= 0.0) throw std::invalid_argument("velocity cutoff must be positive");

  VelocityGrid g;
  g.per_axis = per_axis;
  g.cutoff = cutoff;
  g.cell = 2.0 * cutoff / per_axis;
  const int n = per_axis;
  g.nodes.resize(n * n * n, 3);
  g.weights = Vector::Constant(n * n * n, g.cell * g.cell * g.cell);
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const int m = g.index_of(ix, iy, iz);
        g.nodes(m, 0) = -cutoff + g.cell * (ix + 0.5);
        g.nodes(m, 1) = -cutoff + g.cell * (iy + 0.5);
        g.nodes(m, 2) = -cutoff + g.cell * (iz + 0.5);
      }
  return g;
}

double default_cutoff(double T_inf, const Vector3& u_inf) {
  return 6.0 * std::sqrt(T_inf) + u_inf.norm();
}

Vector VelocityGrid::brackets() const {
  Vector b(size());
  for (int i = 0; i < size(); ++i) b[i] = 1.0 + nodes.row(i).norm();
  return b;
}

bool VelocityGrid::stencil(const Vector3& xi, std::array<int, 8>& idx,
                           std::array<double, 8>& w) const {
  int base[3];
  double frac[3];
  for (int a = 0; a < 3; ++a) {
    const double u = (xi[a] + cutoff) / cell - 0.5;
    const double fl = std::floor(u);
    base[a] = static_cast<int>(fl);
    frac[a] = u - fl;
    if (base[a] < 0 || base[a] + 1 >= per_axis) return false;
  }
  int k = 0;
  for (int dx = 0; dx < 2; ++dx)
    for (int dy = 0; dy < 2; ++dy)
      for (int dz = 0; dz < 2; ++dz, ++k) {
        idx[k] = index_of(base[0] + dx, base[1] + dy, base[2] + dz);
        w[k] = (dx ? frac[0] : 1.0 - frac[0]) * (dy ? frac[1] : 1.0 - frac[1]) *
               (dz ? frac[2] : 1.0 - frac[2]);
      }
  return true;
}

double mach_number(const EquilibriumState& state) {
  if (state.T_inf <= 0.0) throw std::invalid_argument("T_inf must be positive");
  return state.u_inf[0] / std::sqrt(5.0 * state.T_inf / 3.0);
}

void require_supersonic_inflow(const EquilibriumState& state) {
  if (state.rho_inf <= 0.0) throw std::invalid_argument("rho_inf must be positive");
  if (state.sigma0 <= 0.0) throw std::invalid_argument("sigma0 must be positive");
  if (state.u_inf[1] != 0.0 || state.u_inf[2] != 0.0)
    throw std::invalid_argument("supersonic inflow requires u_2 = u_3 = 0");
  if (!(mach_number(state) < -1.0))
    throw std::invalid_argument("supersonic inflow requires Mach number < -1 (strict)");
}

double maxwellian_at(const EquilibriumState& state, const Vector3& xi) {
  const double pref = state.rho_inf / std::pow(2.0 * M_PI * state.T_inf, 1.5);
  return pref * std::exp(-(xi - state.u_inf).squaredNorm() / (2.0 * state.T_inf));
}

Vector maxwellian(const EquilibriumState& state, const VelocityGrid& grid) {
  Vector m(grid.size());
  for (int i = 0; i < grid.size(); ++i) m[i] = maxwellian_at(state, grid.node(i));
  return m;
}

Vector weight_w0(const EquilibriumState& state, const VelocityGrid& grid) {
  EquilibriumState unit = state;
  unit.rho_inf = 1.0;
  return maxwellian(unit, grid).cwiseSqrt();
}

MomentVector moments(const Vector& f, const VelocityGrid& grid) {
  MomentVector m;
  for (int i = 0; i < grid.size(); ++i) {
    const double wf = grid.weights[i] * f[i];
    m.mass += wf;
    m.momentum += wf * grid.node(i);
    m.energy += wf * grid.nodes.row(i).squaredNorm();
  }
  return m;
}

NullSpaceBasis build_null_basis(const EquilibriumState& state, const VelocityGrid& grid) {
  const int n = grid.size();
  const Vector w0 = weight_w0(state, grid);
  Matrix gen(n, 5);
  gen.col(0) = w0;
  for (int a = 0; a < 3; ++a) gen.col(1 + a) = w0.cwiseProduct(grid.nodes.col(a));
  gen.col(4) = w0.cwiseProduct(grid.nodes.rowwise().squaredNorm());

  // Gram condition of the raw generators, as a coarseness guard.
  Matrix gram(5, 5);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) gram(a, b) = grid.dot(gen.col(a), gen.col(b));
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (lmin <= 0.0 || lmax / lmin > 1e8)
    throw NumericalError("null-space generators are degenerate: grid too coarse");

  NullSpaceBasis basis;
  basis.gram_condition = lmax / lmin;
  basis.vectors = gen;
  // Modified Gram-Schmidt in the discrete inner product, two passes.
  for (int pass = 0; pass < 2; ++pass)
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < a; ++b)
        basis.vectors.col(a) -=
            grid.dot(basis.vectors.col(b), basis.vectors.col(a)) * basis.vectors.col(b);
      basis.vectors.col(a) /=
          std::sqrt(grid.dot(basis.vectors.col(a), basis.vectors.col(a)));
    }
  return basis;
}

Vector project_p(const Vector& f, const NullSpaceBasis& basis, const VelocityGrid& grid) {
  const double w = grid.cell * grid.cell * grid.cell;
  return basis.vectors * (w * (basis.vectors.transpose() * f));
}

ComplexVector project_p(const ComplexVector& f, const NullSpaceBasis& basis,
                        const VelocityGrid& grid) {
  const double w = grid.cell * grid.cell * grid.cell;
  return basis.vectors * (w * (basis.vectors.transpose() * f)).eval();
}

Matrix projector_matrix(const NullSpaceBasis& basis, const VelocityGrid& grid) {
  const double w = grid.cell * grid.cell * grid.cell;
  return basis.vectors * (w * basis.vectors.transpose());
}

}  // namespace bbl
