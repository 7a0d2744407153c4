#pragma once

#include <optional>

#include "boltzlayer/types.hpp"
#include "boltzlayer/velocity_grid.hpp"

namespace bbl {

/// Quadrature on S^2: product of Gauss-Legendre in cos(theta) and a uniform
/// azimuthal rule, exact for spherical polynomials up to the given degree.
/// Weights sum to 4*pi.
struct SphereRule {
  Eigen::Matrix<double, Eigen::Dynamic, 3> nodes;  // M x 3 unit vectors
  Vector weights;                                  // M
  int order = 0;
  int size() const { return static_cast<int>(nodes.rows()); }
};

SphereRule sphere_rule(int order);

/// Precomputed data for the discrete collision integral: the sphere rule, the
/// unit-density Maxwellian used to factorize the gain term, and the
/// conservation corrector. The corrector removes the Maxwellian-weighted span
/// {Mhat, Mhat xi, Mhat |xi|^2}: poly_basis holds polynomials orthonormal in
/// the Mhat-weighted inner product, weighted_basis = Mhat .* poly_basis, so
/// q -= weighted_basis (w poly_basis^T q) zeroes all five moments exactly
/// while the correction itself decays like the equilibrium.
struct CollisionQuadrature {
  SphereRule sphere;
  Vector m_hat;          // M[1, u_inf, T_inf] on the grid (= W0^2)
  Matrix poly_basis;     // N x 5
  Matrix weighted_basis; // N x 5
  double sigma0 = 1.0;
};

CollisionQuadrature build_collision_quadrature(const EquilibriumState& state,
                                               const VelocityGrid& grid, int sphere_order);

/// Removes the discrete mass/momentum/energy content of q in place.
void apply_conservation_corrector(const CollisionQuadrature& quad,
                                  const VelocityGrid& grid, Vector& q);
void apply_conservation_corrector(const CollisionQuadrature& quad,
                                  const VelocityGrid& grid, ComplexVector& q);

/// Discrete hard-sphere Q(F,G) in Maxwellian-factorized gather form: the gain
/// integrand F(xi')G(xi*') is reconstructed as
///   Mhat(xi)Mhat(xi*) * [interp(F)/interp(Mhat)](xi') * [interp(G)/interp(Mhat)](xi*')
/// using the exact two-point identity Mhat(xi')Mhat(xi*') = Mhat(xi)Mhat(xi*).
/// Terms whose post-collision stencils leave the grid are dropped; the
/// conservation corrector is applied last. Exactly symmetric in (F,G),
/// bilinear, and annihilates (c Mhat, Mhat) term by term.
Vector collision_q(const Vector& F, const Vector& G, const VelocityGrid& grid,
                   const CollisionQuadrature& quad);
ComplexVector collision_q(const ComplexVector& F, const ComplexVector& G,
                          const VelocityGrid& grid, const CollisionQuadrature& quad);

/// Gamma(f,g) = W0^{-1} Q(W0 f, W0 g).
Vector gamma_bilinear(const Vector& f, const Vector& g, const Vector& w0,
                      const VelocityGrid& grid, const CollisionQuadrature& quad);
ComplexVector gamma_bilinear(const ComplexVector& f, const ComplexVector& g,
                             const Vector& w0, const VelocityGrid& grid,
                             const CollisionQuadrature& quad);

/// Dense matrix of h -> Q(A,h) + Q(h,A), assembled in one sweep over all
/// (pair, sphere-node) triples. No conservation correction applied.
Matrix q_linearization_matrix(const Vector& A, const VelocityGrid& grid,
                              const CollisionQuadrature& quad);

/// Dense matrix of h -> Gamma(psi, h) for fixed psi (corrector included).
Matrix gamma_matrix(const Vector& psi, const Vector& w0, const VelocityGrid& grid,
                    const CollisionQuadrature& quad);

/// Collision frequency nu(xi) = sigma0 int |(xi-xi*).omega| M_inf(xi*) domega dxi*,
/// with the omega integral done exactly (it equals 2 pi |xi-xi*|).
Vector nu_collision_frequency(const EquilibriumState& state, const VelocityGrid& grid);

/// L = -nu + K, discretely symmetric, annihilating the null basis exactly.
struct LinearizedOperator {
  Vector nu;
  Matrix K;  // K = L + diag(nu)
  NullSpaceBasis basis;

  // assembly diagnostics
  double asymmetry_defect = 0.0;   // ||L_raw - L_raw^T||_F / ||L_raw||_F
  double null_defect = 0.0;        // max_a || L_sym phi_a || before null projection
  double max_eigenvalue = 0.0;     // top eigenvalue of the final L
  double spectral_gap = 0.0;       // |6th smallest magnitude eigenvalue|
  std::optional<Matrix> L_raw;     // kept when requested, for oracle tests

  int size() const { return static_cast<int>(nu.size()); }
  Matrix l_matrix() const {
    Matrix L = K;
    L.diagonal() -= nu;
    return L;
  }
  Vector apply_l(const Vector& f) const { return K * f - nu.cwiseProduct(f); }
  ComplexVector apply_l(const ComplexVector& f) const {
    return K * f - nu.cwiseProduct(f);
  }
};

struct AssemblyOptions {
  bool keep_raw = false;
  /// Assembly aborts if the final L has an eigenvalue above this (relative to
  /// the spectral scale max(nu)).
  double positive_eig_rel_tol = 1e-8;
};

LinearizedOperator assemble_linearized(const EquilibriumState& state,
                                       const VelocityGrid& grid,
                                       const CollisionQuadrature& quad,
                                       const AssemblyOptions& opts = {});

/// A = P xi_1 P compressed onto the five-dimensional null basis.
struct AMatrixResult {
  Eigen::Matrix<double, 5, 5> matrix;
  Eigen::Matrix<double, 5, 1> eigenvalues;  // sorted ascending
};
AMatrixResult a_matrix(const NullSpaceBasis& basis, const VelocityGrid& grid);

/// Operator norm of f -> P(xi_1 f) on the discrete L^2_xi, by power iteration.
double p_xi1_bound(const NullSpaceBasis& basis, const VelocityGrid& grid,
                   int iterations = 200);

/// Fit of |K(xi,xi')| <= k0 (r + 1/r) exp(-k1 r), r = |xi - xi'|, over the
/// off-diagonal kernel values K_mn / w_n.
struct KernelBoundReport {
  double k0 = 0.0;
  double k1 = 0.0;
  std::int64_t entries = 0;
  std::int64_t violations = 0;
  double violation_fraction = 0.0;
};
KernelBoundReport kernel_bound_check(const LinearizedOperator& op, const VelocityGrid& grid);

/// Binned averages of |K_mn / w_n| against r = |xi_m - xi_n|.
struct KernelProfile {
  Vector r_center;
  Vector mean_abs;
};
KernelProfile binned_kernel_profile(const LinearizedOperator& op, const VelocityGrid& grid,
                                    int bins);

}  // namespace bbl
