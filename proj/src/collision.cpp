#include "boltzlayer/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "boltzlayer/util.hpp"

namespace bbl {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

inline bool trilinear(double px, double py, double pz, double cutoff, double inv_cell,
                      int n, int* idx, double* wt) {
  const double ux = (px + cutoff) * inv_cell - 0.5;
  const double uy = (py + cutoff) * inv_cell - 0.5;
  const double uz = (pz + cutoff) * inv_cell - 0.5;
  const double fx = std::floor(ux), fy = std::floor(uy), fz = std::floor(uz);
  const int bx = static_cast<int>(fx), by = static_cast<int>(fy), bz = static_cast<int>(fz);
  if (bx < 0 || by < 0 || bz < 0 || bx + 1 >= n || by + 1 >= n || bz + 1 >= n) return false;
  const double tx = ux - fx, ty = uy - fy, tz = uz - fz;
  const double sx = 1.0 - tx, sy = 1.0 - ty, sz = 1.0 - tz;
  const int base = (bx * n + by) * n + bz;
  idx[0] = base;
  idx[1] = base + 1;
  idx[2] = base + n;
  idx[3] = base + n + 1;
  idx[4] = base + n * n;
  idx[5] = base + n * n + 1;
  idx[6] = base + n * n + n;
  idx[7] = base + n * n + n + 1;
  wt[0] = sx * sy * sz;
  wt[1] = sx * sy * tz;
  wt[2] = sx * ty * sz;
  wt[3] = sx * ty * tz;
  wt[4] = tx * sy * sz;
  wt[5] = tx * sy * tz;
  wt[6] = tx * ty * sz;
  wt[7] = tx * ty * tz;
  return true;
}

// Orthonormal frame with third axis along g; deterministic for any input.
inline void pair_frame(double gx, double gy, double gz, double gnorm, double e1[3],
                       double e2[3], double e3[3]) {
  e3[0] = gx / gnorm;
  e3[1] = gy / gnorm;
  e3[2] = gz / gnorm;
  // pivot on the smallest component of e3
  const double ax = std::abs(e3[0]), ay = std::abs(e3[1]), az = std::abs(e3[2]);
  double px = 0, py = 0, pz = 0;
  if (ax <= ay && ax <= az)
    px = 1;
  else if (ay <= az)
    py = 1;
  else
    pz = 1;
  // e1 = normalize(p x e3)
  e1[0] = py * e3[2] - pz * e3[1];
  e1[1] = pz * e3[0] - px * e3[2];
  e1[2] = px * e3[1] - py * e3[0];
  const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  e1[0] /= n1;
  e1[1] /= n1;
  e1[2] /= n1;
  e2[0] = e3[1] * e1[2] - e3[2] * e1[1];
  e2[1] = e3[2] * e1[0] - e3[0] * e1[2];
  e2[2] = e3[0] * e1[1] - e3[1] * e1[0];
}

// First pair (i,j) of the flattened upper-triangular position p, pairs ordered
// (0,1),(0,2),...,(0,N-1),(1,2),...
inline void decode_pair(std::int64_t p, int n, int& i, int& j) {
  std::int64_t acc = 0;
  int ii = 0;
  while (acc + (n - 1 - ii) <= p) {
    acc += n - 1 - ii;
    ++ii;
  }
  i = ii;
  j = static_cast<int>(ii + 1 + (p - acc));
}

struct GridView {
  const double* nx;
  const double* ny;
  const double* nz;
  double cutoff, inv_cell, cell_vol;
  int n, size;
  explicit GridView(const VelocityGrid& g)
      : nx(g.nodes.col(0).data()),
        ny(g.nodes.col(1).data()),
        nz(g.nodes.col(2).data()),
        cutoff(g.cutoff),
        inv_cell(1.0 / g.cell),
        cell_vol(g.cell * g.cell * g.cell),
        n(g.per_axis),
        size(g.size()) {}
};

template <typename Sc>
inline Sc gather8(const Sc* v, const int* idx, const double* wt) {
  Sc s = wt[0] * v[idx[0]];
  for (int t = 1; t < 8; ++t) s += wt[t] * v[idx[t]];
  return s;
}

// Discrete hard-sphere Q in Maxwellian-factorized gather form. The gain term
// uses the exact identity Mhat(xi') Mhat(xi*') = Mhat(xi) Mhat(xi*); values at
// the post-collision points are reconstructed as ratios of interpolations,
// interp(F)/interp(Mhat), so Q(c Mhat, Mhat) vanishes term by term while all
// couplings stay bounded (no division by corner-node Maxwellians). A
// (pair, omega) term is dropped entirely when either post-collision stencil
// leaves the grid.
template <typename Sc>
void q_apply_raw(const Eigen::Matrix<Sc, Eigen::Dynamic, 1>& F,
                 const Eigen::Matrix<Sc, Eigen::Dynamic, 1>& G, const VelocityGrid& grid,
                 const CollisionQuadrature& quad,
                 Eigen::Matrix<Sc, Eigen::Dynamic, 1>& out) {
  using Vec = Eigen::Matrix<Sc, Eigen::Dynamic, 1>;
  const GridView gv(grid);
  const int N = gv.size;
  const int M = quad.sphere.size();
  std::vector<double> ox(M), oy(M), oz(M), sw(M);
  for (int k = 0; k < M; ++k) {
    ox[k] = quad.sphere.nodes(k, 0);
    oy[k] = quad.sphere.nodes(k, 1);
    oz[k] = quad.sphere.nodes(k, 2);
    sw[k] = quad.sphere.weights[k];
  }
  const Sc* pF = F.data();
  const Sc* pG = G.data();
  const double* mh = quad.m_hat.data();
  const double pref = 0.5 * gv.cell_vol * quad.sigma0;
  const std::int64_t pairs = static_cast<std::int64_t>(N) * (N - 1) / 2;

  const int nc = chunk_count(pairs);
  std::vector<Vec> acc(std::max(nc, 1), Vec::Zero(N));

  parallel_chunks(pairs, [&](int c, std::int64_t pb, std::int64_t pe) {
    auto& a = acc[c];
    int i, j;
    decode_pair(pb, N, i, j);
    for (std::int64_t p = pb; p < pe; ++p) {
      const double gx = gv.nx[i] - gv.nx[j];
      const double gy = gv.ny[i] - gv.ny[j];
      const double gz = gv.nz[i] - gv.nz[j];
      const double gnorm = std::sqrt(gx * gx + gy * gy + gz * gz);
      const double mm = mh[i] * mh[j];
      const Sc loss = F[i] * G[j] + F[j] * G[i];
      double e1[3], e2[3], e3[3];
      pair_frame(gx, gy, gz, gnorm, e1, e2, e3);
      int ia[8], ib[8];
      double wa[8], wb[8];
      Sc gain_sum = Sc(0);
      // loss with the omega integral done exactly: int |zeta.omega| domega = 2 pi |zeta|,
      // kept also for collisions whose gain leaves the grid
      const double loss_w = 2.0 * M_PI * gnorm;
      for (int k = 0; k < M; ++k) {
        // rule rotated so its polar axis is along g; then g.omega = |g| mu_k
        const double wx = ox[k] * e1[0] + oy[k] * e2[0] + oz[k] * e3[0];
        const double wy = ox[k] * e1[1] + oy[k] * e2[1] + oz[k] * e3[1];
        const double wz = ox[k] * e1[2] + oy[k] * e2[2] + oz[k] * e3[2];
        const double d = gnorm * oz[k];
        const double sd = std::abs(d) * sw[k];
        const double px = gv.nx[i] - d * wx;
        const double py = gv.ny[i] - d * wy;
        const double pz = gv.nz[i] - d * wz;
        if (!trilinear(px, py, pz, gv.cutoff, gv.inv_cell, gv.n, ia, wa)) continue;
        const double qx = gv.nx[j] + d * wx;
        const double qy = gv.ny[j] + d * wy;
        const double qz = gv.nz[j] + d * wz;
        if (!trilinear(qx, qy, qz, gv.cutoff, gv.inv_cell, gv.n, ib, wb)) continue;
        const double scale = mm / (gather8(mh, ia, wa) * gather8(mh, ib, wb));
        const Sc fa = gather8(pF, ia, wa), fb = gather8(pF, ib, wb);
        const Sc ga = gather8(pG, ia, wa), gb = gather8(pG, ib, wb);
        gain_sum += (sd * scale) * (fa * gb + fb * ga);
      }
      const Sc v = pref * (gain_sum - loss_w * loss);
      a[i] += v;
      a[j] += v;
      if (++j >= N) {
        ++i;
        j = i + 1;
      }
    }
  });

  out = Vec::Zero(N);
  for (int c = 0; c < nc; ++c) out += acc[c];
}

// Conservation correction and weight conjugation of a raw linearized-Q matrix:
// returns D_{1/W0} (I - Psi w Psi^T) Ltilde D_{W0}.
Matrix corrected_weighted(Matrix Ltilde, const Vector& w0, const VelocityGrid& grid,
                          const CollisionQuadrature& quad) {
  const double w = grid.cell * grid.cell * grid.cell;
  const Matrix S = w * (quad.poly_basis.transpose() * Ltilde);
  Ltilde.noalias() -= quad.weighted_basis * S;
  return w0.cwiseInverse().asDiagonal() * Ltilde * w0.asDiagonal();
}

}  // namespace

SphereRule sphere_rule(int order) {
  if (order < 1) throw std::invalid_argument("sphere rule order must be >= 1");
  // Mirrored half-interval Gauss-Legendre in mu = cos(theta) and a uniform
  // azimuthal rule. Splitting at mu = 0 makes the rule exact for |mu| times
  // polynomials, so sum_k s_k |zeta . omega_k| = 2 pi |zeta| exactly once the
  // polar axis is aligned with zeta.
  const int n_half = (order + 2) / 2;
  const int n_az = order + 1;
  std::vector<double> x, w;
  gauss_legendre(n_half, x, w);

  SphereRule rule;
  rule.order = order;
  rule.nodes.resize(2 * n_half * n_az, 3);
  rule.weights.resize(2 * n_half * n_az);
  int m = 0;
  for (int half = 0; half < 2; ++half)
    for (int a = 0; a < n_half; ++a) {
      const double mu = (half ? -1.0 : 1.0) * 0.5 * (x[a] + 1.0);  // in (0,1)
      const double wmu = 0.5 * w[a];
      const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      for (int b = 0; b < n_az; ++b, ++m) {
        const double phi = 2.0 * M_PI * (b + 0.5) / n_az;
        rule.nodes(m, 0) = s * std::cos(phi);
        rule.nodes(m, 1) = s * std::sin(phi);
        rule.nodes(m, 2) = mu;
        rule.weights[m] = wmu * 2.0 * M_PI / n_az;
      }
    }
  return rule;
}

CollisionQuadrature build_collision_quadrature(const EquilibriumState& state,
                                               const VelocityGrid& grid, int sphere_order) {
  CollisionQuadrature quad;
  quad.sphere = sphere_rule(sphere_order);
  quad.sigma0 = state.sigma0;

  EquilibriumState unit = state;
  unit.rho_inf = 1.0;
  quad.m_hat = maxwellian(unit, grid);

  const int N = grid.size();
  Matrix gen(N, 5);
  gen.col(0).setOnes();
  for (int a = 0; a < 3; ++a) gen.col(1 + a) = grid.nodes.col(a);
  gen.col(4) = grid.nodes.rowwise().squaredNorm();
  // Gram-Schmidt in the Mhat-weighted inner product.
  auto mdot = [&](const Vector& a, const Vector& b) {
    return grid.dot(a, quad.m_hat.cwiseProduct(b));
  };
  for (int pass = 0; pass < 2; ++pass)
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < a; ++b)
        gen.col(a) -= mdot(gen.col(b), gen.col(a)) * gen.col(b);
      gen.col(a) /= std::sqrt(mdot(gen.col(a), gen.col(a)));
    }
  quad.poly_basis = gen;
  quad.weighted_basis = quad.m_hat.asDiagonal() * gen;
  return quad;
}

void apply_conservation_corrector(const CollisionQuadrature& quad, const VelocityGrid& grid,
                                  Vector& q) {
  const double w = grid.cell * grid.cell * grid.cell;
  q -= quad.weighted_basis * (w * (quad.poly_basis.transpose() * q)).eval();
}

void apply_conservation_corrector(const CollisionQuadrature& quad, const VelocityGrid& grid,
                                  ComplexVector& q) {
  const double w = grid.cell * grid.cell * grid.cell;
  q -= quad.weighted_basis * (w * (quad.poly_basis.transpose() * q)).eval();
}

Vector collision_q(const Vector& F, const Vector& G, const VelocityGrid& grid,
                   const CollisionQuadrature& quad) {
  Vector out;
  q_apply_raw<double>(F, G, grid, quad, out);
  apply_conservation_corrector(quad, grid, out);
  return out;
}

ComplexVector collision_q(const ComplexVector& F, const ComplexVector& G,
                          const VelocityGrid& grid, const CollisionQuadrature& quad) {
  ComplexVector out;
  q_apply_raw<Complex>(F, G, grid, quad, out);
  apply_conservation_corrector(quad, grid, out);
  return out;
}

Vector gamma_bilinear(const Vector& f, const Vector& g, const Vector& w0,
                      const VelocityGrid& grid, const CollisionQuadrature& quad) {
  const Vector q = collision_q(Vector(w0.cwiseProduct(f)), Vector(w0.cwiseProduct(g)),
                               grid, quad);
  return q.cwiseQuotient(w0);
}

ComplexVector gamma_bilinear(const ComplexVector& f, const ComplexVector& g,
                             const Vector& w0, const VelocityGrid& grid,
                             const CollisionQuadrature& quad) {
  const ComplexVector wf = w0.cast<Complex>().cwiseProduct(f);
  const ComplexVector wg = w0.cast<Complex>().cwiseProduct(g);
  const ComplexVector q = collision_q(wf, wg, grid, quad);
  return q.cwiseQuotient(w0.cast<Complex>());
}

Matrix q_linearization_matrix(const Vector& A, const VelocityGrid& grid,
                              const CollisionQuadrature& quad) {
  const GridView gv(grid);
  const int N = gv.size;
  const int M = quad.sphere.size();
  std::vector<double> ox(M), oy(M), oz(M), sw(M);
  for (int k = 0; k < M; ++k) {
    ox[k] = quad.sphere.nodes(k, 0);
    oy[k] = quad.sphere.nodes(k, 1);
    oz[k] = quad.sphere.nodes(k, 2);
    sw[k] = quad.sphere.weights[k];
  }
  const double* pA = A.data();
  const double* mh = quad.m_hat.data();
  const double pref = gv.cell_vol * quad.sigma0;
  const std::int64_t pairs = static_cast<std::int64_t>(N) * (N - 1) / 2;
  const int nc = chunk_count(pairs);
  std::vector<Matrix> acc(std::max(nc, 1));

  // Accumulates rows of the linearization into columns of LT.
  parallel_chunks(pairs, [&](int c, std::int64_t pb, std::int64_t pe) {
    Matrix& LT = acc[c];
    LT = Matrix::Zero(N, N);
    int i, j;
    decode_pair(pb, N, i, j);
    for (std::int64_t p = pb; p < pe; ++p) {
      const double gx = gv.nx[i] - gv.nx[j];
      const double gy = gv.ny[i] - gv.ny[j];
      const double gz = gv.nz[i] - gv.nz[j];
      const double gnorm = std::sqrt(gx * gx + gy * gy + gz * gz);
      const double mm = mh[i] * mh[j];
      double* rowi = LT.col(i).data();
      double* rowj = LT.col(j).data();
      double e1[3], e2[3], e3[3];
      pair_frame(gx, gy, gz, gnorm, e1, e2, e3);
      int ia[8], ib[8];
      double wa[8], wb[8];
      const double loss_w = 2.0 * M_PI * gnorm;
      for (int k = 0; k < M; ++k) {
        const double wx = ox[k] * e1[0] + oy[k] * e2[0] + oz[k] * e3[0];
        const double wy = ox[k] * e1[1] + oy[k] * e2[1] + oz[k] * e3[1];
        const double wz = ox[k] * e1[2] + oy[k] * e2[2] + oz[k] * e3[2];
        const double d = gnorm * oz[k];
        const double sd = std::abs(d) * sw[k];
        const double px = gv.nx[i] - d * wx;
        const double py = gv.ny[i] - d * wy;
        const double pz = gv.nz[i] - d * wz;
        if (!trilinear(px, py, pz, gv.cutoff, gv.inv_cell, gv.n, ia, wa)) continue;
        const double qx = gv.nx[j] + d * wx;
        const double qy = gv.ny[j] + d * wy;
        const double qz = gv.nz[j] + d * wz;
        if (!trilinear(qx, qy, qz, gv.cutoff, gv.inv_cell, gv.n, ib, wb)) continue;
        const double c0 = pref * sd;
        const double scale = mm / (gather8(mh, ia, wa) * gather8(mh, ib, wb));
        const double At_a = gather8(pA, ia, wa);
        const double At_b = gather8(pA, ib, wb);
        // gain: coefficient of h at stencil(xi*') is scale*interp(A)(xi'), and
        // at stencil(xi') is scale*interp(A)(xi*').
        const double cb = c0 * scale * At_a;
        const double ca = c0 * scale * At_b;
        for (int t = 0; t < 8; ++t) {
          rowi[ib[t]] += wb[t] * cb;
          rowj[ib[t]] += wb[t] * cb;
          rowi[ia[t]] += wa[t] * ca;
          rowj[ia[t]] += wa[t] * ca;
        }
      }
      const double lj = pref * loss_w * A[i];
      const double li = pref * loss_w * A[j];
      rowi[j] -= lj;
      rowj[j] -= lj;
      rowi[i] -= li;
      rowj[i] -= li;
      if (++j >= N) {
        ++i;
        j = i + 1;
      }
    }
  });

  Matrix L = Matrix::Zero(N, N);
  for (int c = 0; c < nc; ++c) L += acc[c].transpose();
  return L;
}

Matrix gamma_matrix(const Vector& psi, const Vector& w0, const VelocityGrid& grid,
                    const CollisionQuadrature& quad) {
  // Gamma(psi, h) = (1/2) W0^{-1} [Q(W0 psi, W0 h) + Q(W0 h, W0 psi)]
  Matrix L = q_linearization_matrix(Vector(w0.cwiseProduct(psi)), grid, quad);
  return 0.5 * corrected_weighted(std::move(L), w0, grid, quad);
}

Vector nu_collision_frequency(const EquilibriumState& state, const VelocityGrid& grid) {
  const int N = grid.size();
  const Vector m_inf = maxwellian(state, grid);
  const double pref = 2.0 * M_PI * state.sigma0 * grid.cell * grid.cell * grid.cell;
  Vector nu(N);
  parallel_for(N, [&](std::int64_t i) {
    double s = 0.0;
    const Vector3 xi = grid.node(static_cast<int>(i));
    for (int j = 0; j < N; ++j) s += m_inf[j] * (xi - grid.node(j)).norm();
    nu[static_cast<int>(i)] = pref * s;
  });
  return nu;
}

LinearizedOperator assemble_linearized(const EquilibriumState& state,
                                       const VelocityGrid& grid,
                                       const CollisionQuadrature& quad,
                                       const AssemblyOptions& opts) {
  require_supersonic_inflow(state);
  const int N = grid.size();
  const Vector m_inf = maxwellian(state, grid);
  const Vector w0 = weight_w0(state, grid);

  Matrix L0 = corrected_weighted(q_linearization_matrix(m_inf, grid, quad), w0, grid, quad);

  LinearizedOperator op;
  op.basis = build_null_basis(state, grid);
  op.nu = nu_collision_frequency(state, grid);
  if (opts.keep_raw) op.L_raw = L0;

  const double l_norm = L0.norm();
  op.asymmetry_defect = (L0 - L0.transpose()).norm() / l_norm;
  Matrix Ls = 0.5 * (L0 + L0.transpose());
  L0.resize(0, 0);

  for (int a = 0; a < 5; ++a) {
    const Vector r = Ls * op.basis.vectors.col(a);
    op.null_defect = std::max(op.null_defect, std::sqrt(grid.dot(r, r)));
  }

  // Enforce the null space exactly: L <- (I-P) Ls (I-P), low-rank update.
  const double w = grid.cell * grid.cell * grid.cell;
  const Matrix& Phi = op.basis.vectors;     // N x 5
  const Matrix A = (w * Phi.transpose()) * Ls;  // 5 x N
  const Matrix B = A * Phi;                 // 5 x 5
  Ls.noalias() -= Phi * A;
  Ls.noalias() -= A.transpose() * Phi.transpose();
  Ls.noalias() += Phi * (B * Phi.transpose());
  Ls = 0.5 * (Ls + Ls.transpose()).eval();

  const double scale = op.nu.maxCoeff();
  if (N <= 1024) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Ls, Eigen::EigenvaluesOnly);
    op.max_eigenvalue = es.eigenvalues().maxCoeff();
    Vector mags = es.eigenvalues().cwiseAbs();
    std::sort(mags.data(), mags.data() + mags.size());
    op.spectral_gap = mags[5];
  } else {
    const double s = scale;
    Vector v = Vector::Ones(N).normalized();
    double lam = 0.0;
    for (int it = 0; it < 300; ++it) {
      const Vector u = Ls * v + s * v;
      lam = u.norm();
      v = u / lam;
    }
    op.max_eigenvalue = lam - s;
    op.spectral_gap = std::numeric_limits<double>::quiet_NaN();
  }
  if (op.max_eigenvalue > opts.positive_eig_rel_tol * scale)
    throw NumericalError(
        "linearized operator has a positive eigenvalue: discretization inconsistent "
        "(refine the velocity grid or the sphere rule)");

  op.K = std::move(Ls);
  op.K.diagonal() += op.nu;
  return op;
}

AMatrixResult a_matrix(const NullSpaceBasis& basis, const VelocityGrid& grid) {
  const double w = grid.cell * grid.cell * grid.cell;
  AMatrixResult res;
  const Matrix xi1phi = grid.nodes.col(0).asDiagonal() * basis.vectors;
  res.matrix = (w * (basis.vectors.transpose() * xi1phi)).eval();
  res.matrix = 0.5 * (res.matrix + res.matrix.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> es(res.matrix);
  res.eigenvalues = es.eigenvalues();
  return res;
}

double p_xi1_bound(const NullSpaceBasis& basis, const VelocityGrid& grid, int iterations) {
  const int N = static_cast<int>(basis.vectors.rows());
  const double w = grid.cell * grid.cell * grid.cell;
  const auto& Phi = basis.vectors;
  const auto xi1 = grid.nodes.col(0);
  // B = D_xi1 P D_xi1 with P = Phi (w Phi^T); power iteration for lambda_max(B).
  Vector v = Vector::LinSpaced(N, 1.0, 2.0).normalized();
  double lam = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector u = xi1.cwiseProduct(v);
    u = Phi * (w * (Phi.transpose() * u)).eval();
    u = xi1.cwiseProduct(u);
    lam = u.norm();
    if (lam == 0.0) return 0.0;
    v = u / lam;
  }
  return std::sqrt(lam);
}

KernelBoundReport kernel_bound_check(const LinearizedOperator& op, const VelocityGrid& grid) {
  const int N = op.size();
  const double w = grid.cell * grid.cell * grid.cell;
  std::vector<double> rs, logk;
  rs.reserve(static_cast<std::size_t>(N) * (N - 1));
  logk.reserve(rs.capacity());
  double kmax = 0.0;
  for (int m = 0; m < N; ++m)
    for (int nn = 0; nn < N; ++nn)
      if (m != nn) kmax = std::max(kmax, std::abs(op.K(m, nn)) / w);
  const double floor_val = 1e-13 * kmax;
  for (int m = 0; m < N; ++m)
    for (int nn = 0; nn < N; ++nn) {
      if (m == nn) continue;
      const double kv = std::abs(op.K(m, nn)) / w;
      if (kv <= floor_val) continue;
      const double r = (grid.node(m) - grid.node(nn)).norm();
      rs.push_back(r);
      logk.push_back(std::log(kv) - std::log(r + 1.0 / r));
    }

  KernelBoundReport rep;
  rep.entries = static_cast<std::int64_t>(rs.size());
  if (rs.empty()) return rep;

  // Least squares: logk ~ log(k0) - k1 * r.
  double sr = 0, srr = 0, sy = 0, sry = 0;
  for (std::size_t t = 0; t < rs.size(); ++t) {
    sr += rs[t];
    srr += rs[t] * rs[t];
    sy += logk[t];
    sry += rs[t] * logk[t];
  }
  const double n = static_cast<double>(rs.size());
  const double det = n * srr - sr * sr;
  const double a = (srr * sy - sr * sry) / det;  // log k0
  const double b = (sr * sy - n * sry) / det;    // k1
  rep.k1 = b;

  // Inflate k0 so the bound holds on >= 99.9% of retained entries.
  std::vector<double> shifted(rs.size());
  for (std::size_t t = 0; t < rs.size(); ++t) shifted[t] = logk[t] + rep.k1 * rs[t];
  std::vector<double> sorted = shifted;
  std::sort(sorted.begin(), sorted.end());
  const auto qidx = static_cast<std::size_t>(std::ceil(0.999 * sorted.size()));
  const double log_k0 =
      std::max(a, sorted[std::min(qidx, sorted.size() - 1)]) + 1e-12;
  rep.k0 = std::exp(log_k0);
  for (double s : shifted)
    if (s > log_k0) ++rep.violations;
  rep.violation_fraction = static_cast<double>(rep.violations) / n;
  return rep;
}

KernelProfile binned_kernel_profile(const LinearizedOperator& op, const VelocityGrid& grid,
                                    int bins) {
  const int N = op.size();
  const double w = grid.cell * grid.cell * grid.cell;
  const double rmax = 2.0 * std::sqrt(3.0) * grid.cutoff;
  KernelProfile prof;
  prof.r_center = Vector::Zero(bins);
  prof.mean_abs = Vector::Zero(bins);
  Eigen::VectorXi count = Eigen::VectorXi::Zero(bins);
  for (int b = 0; b < bins; ++b) prof.r_center[b] = (b + 0.5) * rmax / bins;
  for (int m = 0; m < N; ++m)
    for (int nn = 0; nn < N; ++nn) {
      if (m == nn) continue;
      const double r = (grid.node(m) - grid.node(nn)).norm();
      int b = static_cast<int>(r / rmax * bins);
      b = std::min(b, bins - 1);
      prof.mean_abs[b] += std::abs(op.K(m, nn)) / w;
      count[b] += 1;
    }
  for (int b = 0; b < bins; ++b)
    if (count[b] > 0) prof.mean_abs[b] /= count[b];
  return prof;
}

}  // namespace bbl
