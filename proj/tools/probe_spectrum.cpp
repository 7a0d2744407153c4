// Scratch diagnostic: spectrum of the assembled L at several resolutions.
#include <cstdio>
#include <cstdlib>

#include "boltzlayer/collision.hpp"
#include "boltzlayer/velocity_grid.hpp"

using namespace bbl;

int main(int argc, char** argv) {
  EquilibriumState s;
  s.rho_inf = 1.0;
  s.u_inf = Vector3(-2.0, 0.0, 0.0);
  s.T_inf = 0.6;
  s.sigma0 = 0.3;
  const int n = argc > 1 ? std::atoi(argv[1]) : 6;
  const int order = argc > 2 ? std::atoi(argv[2]) : 15;
  const double rv = argc > 3 ? std::atof(argv[3]) : default_cutoff(s.T_inf, s.u_inf);

  const VelocityGrid g = build_grid(n, rv);
  const CollisionQuadrature quad = build_collision_quadrature(s, g, order);
  AssemblyOptions opts;
  opts.positive_eig_rel_tol = 1e300;
  const LinearizedOperator op = assemble_linearized(s, g, quad, opts);

  std::printf("n=%d order=%d rv=%.3f N=%d\n", n, order, rv, g.size());
  std::printf("nu in [%.4f, %.4f]\n", op.nu.minCoeff(), op.nu.maxCoeff());
  std::printf("asymmetry=%.3e null_defect=%.3e\n", op.asymmetry_defect, op.null_defect);
  std::printf("max_eig=%.6e rel=%.3e gap=%.6e\n", op.max_eigenvalue,
              op.max_eigenvalue / op.nu.maxCoeff(), op.spectral_gap);

  Eigen::SelfAdjointEigenSolver<Matrix> es(op.l_matrix(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  std::printf("top eigenvalues: ");
  for (int i = ev.size() - 8; i < ev.size(); ++i) std::printf("%.3e ", ev[i]);
  std::printf("\nbottom: %.3e\n", ev[0]);
  int positive = 0, nearzero = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] > 1e-10 * op.nu.maxCoeff()) ++positive;
    if (std::abs(ev[i]) < 1e-8) ++nearzero;
  }
  std::printf("eigenvalues above 1e-10*maxnu: %d ; |ev|<1e-8: %d\n", positive, nearzero);

  // sorted magnitudes around the expected 5-dim kernel
  Vector mags = ev.cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size());
  std::printf("smallest |ev|: ");
  for (int i = 0; i < 12 && i < mags.size(); ++i) std::printf("%.2e ", mags[i]);
  std::printf("\n");

  // rows of L that are (near) zero: orphaned nodes
  const Matrix L = op.l_matrix();
  int orphan = 0;
  double minrow = 1e300;
  for (int i = 0; i < L.rows(); ++i) {
    const double rn = L.row(i).norm();
    minrow = std::min(minrow, rn);
    if (rn < 1e-10) ++orphan;
  }
  std::printf("zero rows (orphans): %d, min row norm %.3e\n", orphan, minrow);
  return 0;
}
