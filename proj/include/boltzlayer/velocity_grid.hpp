#pragma once

#include <array>

#include "boltzlayer/types.hpp"

namespace bbl {

/// Uniform Cartesian velocity grid on [-cutoff, cutoff]^3 with midpoint
/// quadrature weights. Node (ix,iy,iz) sits at -cutoff + cell*(i+1/2), so the
/// grid never contains xi_1 = 0 for even per-axis counts.
struct VelocityGrid {
  Eigen::Matrix<double, Eigen::Dynamic, 3> nodes;  // N x 3
  Vector weights;                                  // N, all equal to cell^3
  double cutoff = 0.0;
  int per_axis = 0;
  double cell = 0.0;

  int size() const { return static_cast<int>(nodes.rows()); }
  Vector3 node(int i) const { return nodes.row(i).transpose(); }
  int index_of(int ix, int iy, int iz) const {
    return (ix * per_axis + iy) * per_axis + iz;
  }

  /// ⟨ξ⟩ per node.
  Vector brackets() const;

  /// Trilinear interpolation stencil for an off-grid point. Returns false when
  /// the full 8-node stencil does not fit inside the grid.
  bool stencil(const Vector3& xi, std::array<int, 8>& idx,
               std::array<double, 8>& w) const;

  /// Discrete inner product (f,g) = sum_i w_i f_i g_i.
  double dot(const Vector& f, const Vector& g) const {
    return cell * cell * cell * f.dot(g);
  }
};

VelocityGrid build_grid(int per_axis, double cutoff);

/// Default cutoff covering the thermal core: 6*sqrt(T) + |u|.
double default_cutoff(double T_inf, const Vector3& u_inf);

struct EquilibriumState {
  double rho_inf = 1.0;
  Vector3 u_inf = Vector3::Zero();
  double T_inf = 1.0;
  double sigma0 = 1.0;
};

/// u_1 / sqrt(5 T / 3). Does not depend on rho_inf.
double mach_number(const EquilibriumState& state);

/// Throws unless u_2 = u_3 = 0 and the Mach number is strictly below -1.
void require_supersonic_inflow(const EquilibriumState& state);

/// Pointwise rho/(2 pi T)^{3/2} exp(-|xi-u|^2 / 2T) on the grid.
Vector maxwellian(const EquilibriumState& state, const VelocityGrid& grid);
double maxwellian_at(const EquilibriumState& state, const Vector3& xi);

/// W_0 = (M[1, u, T])^{1/2}.
Vector weight_w0(const EquilibriumState& state, const VelocityGrid& grid);

struct MomentVector {
  double mass = 0.0;
  Vector3 momentum = Vector3::Zero();
  double energy = 0.0;
};

/// Discrete integrals of f * {1, xi, |xi|^2}.
MomentVector moments(const Vector& f, const VelocityGrid& grid);

/// Orthonormal basis (in the discrete L^2_xi inner product) of
/// span{W0, W0 xi_1, W0 xi_2, W0 xi_3, W0 |xi|^2}.
struct NullSpaceBasis {
  Matrix vectors;  // N x 5, columns orthonormal: vectors^T diag(w) vectors = I
  double gram_condition = 0.0;
};

NullSpaceBasis build_null_basis(const EquilibriumState& state, const VelocityGrid& grid);

/// P f, the orthogonal projection onto the null space.
Vector project_p(const Vector& f, const NullSpaceBasis& basis, const VelocityGrid& grid);
ComplexVector project_p(const ComplexVector& f, const NullSpaceBasis& basis,
                        const VelocityGrid& grid);

/// Dense matrix of P (N x N). Intended for spectral checks on small grids.
Matrix projector_matrix(const NullSpaceBasis& basis, const VelocityGrid& grid);

}  // namespace bbl
