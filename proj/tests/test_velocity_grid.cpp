#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "boltzlayer/velocity_grid.hpp"
#include "oracles.hpp"

using namespace bbl;

namespace {
EquilibriumState default_state() {
  EquilibriumState s;
  s.rho_inf = 1.0;
  s.u_inf = Vector3(-2.0, 0.0, 0.0);
  s.T_inf = 0.6;
  s.sigma0 = 0.3;
  return s;
}
}  // namespace

TEST_CASE("build_grid rejects unresolvable grids") {
  CHECK_THROWS(build_grid(2, 6.0));
  CHECK_THROWS(build_grid(3, 6.0));
  CHECK_THROWS(build_grid(8, -1.0));
}

TEST_CASE("build_grid midpoint weights") {
  const VelocityGrid g = build_grid(8, 6.0);
  CHECK(g.size() == 512);
  // cell = 1.5 is dyadic, so the midpoint weight 1.5^3 is exact
  for (int i = 0; i < g.size(); ++i) CHECK(g.weights[i] == 3.375);

  const VelocityGrid g2 = build_grid(12, 7.5);
  CHECK(g2.weights.sum() == doctest::Approx(3375.0).epsilon(1e-14));
}

TEST_CASE("grid nodes are in-range and duplicate-free") {
  const VelocityGrid g = build_grid(6, 5.0);
  std::set<std::array<long, 3>> seen;
  for (int i = 0; i < g.size(); ++i) {
    const Vector3 xi = g.node(i);
    CHECK(xi.cwiseAbs().maxCoeff() <= g.cutoff);
    seen.insert({std::lround(xi[0] * 1e12), std::lround(xi[1] * 1e12),
                 std::lround(xi[2] * 1e12)});
  }
  CHECK(static_cast<int>(seen.size()) == g.size());
}

TEST_CASE("maxwellian peak value") {
  EquilibriumState s;
  s.rho_inf = 1.0;
  s.T_inf = 1.0 / (2.0 * M_PI);
  s.u_inf = Vector3(-2.0, 0.0, 0.0);
  CHECK(maxwellian_at(s, s.u_inf) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("maxwellian moments against reference quadrature") {
  EquilibriumState s;
  s.rho_inf = 1.0;
  s.u_inf = Vector3(-2.0, 0.0, 0.0);
  s.T_inf = 1.0;
  // Reference quadrature, checked against the exact continuum moments.
  const auto ref = test::oracle_maxwellian_moments(s, 10.0, 64);
  CHECK(std::abs(ref.mass - 1.0) < 1e-9);
  CHECK((ref.momentum - s.u_inf).norm() < 1e-8);
  CHECK(std::abs(ref.energy - (s.u_inf.squaredNorm() + 3.0 * s.T_inf)) < 1e-7);

  const VelocityGrid g = build_grid(16, 8.0);
  const auto m = moments(maxwellian(s, g), g);
  CHECK(std::abs(m.mass - ref.mass) < 1e-6);
  CHECK((m.momentum - ref.momentum).norm() < 1e-6);
}

TEST_CASE("moments are linear and vanish on zero") {
  const VelocityGrid g = build_grid(6, 5.0);
  const auto z = moments(Vector::Zero(g.size()), g);
  CHECK(z.mass == 0.0);
  CHECK(z.momentum.norm() == 0.0);
  CHECK(z.energy == 0.0);

  std::mt19937_64 rng(42);
  std::normal_distribution<double> dist;
  Vector f(g.size()), h(g.size());
  for (int i = 0; i < g.size(); ++i) {
    f[i] = dist(rng);
    h[i] = dist(rng);
  }
  const double a = 1.7, b = -0.4;
  const auto mf = moments(f, g), mh = moments(h, g);
  const auto mc = moments(Vector(a * f + b * h), g);
  CHECK(mc.mass == doctest::Approx(a * mf.mass + b * mh.mass).epsilon(1e-12));
  CHECK(mc.energy == doctest::Approx(a * mf.energy + b * mh.energy).epsilon(1e-12));
}

TEST_CASE("quadrature consistency: moment error drops at order >= 2") {
  const EquilibriumState s = default_state();
  const double R = default_cutoff(s.T_inf, s.u_inf);
  double err[3];
  const int ns[3] = {8, 12, 16};
  for (int t = 0; t < 3; ++t) {
    const VelocityGrid g = build_grid(ns[t], R);
    err[t] = std::abs(moments(maxwellian(s, g), g).mass - s.rho_inf);
  }
  const double order1 = std::log(err[0] / err[1]) / std::log(12.0 / 8.0);
  const double order2 = std::log(err[1] / err[2]) / std::log(16.0 / 12.0);
  CHECK(order1 >= 2.0);
  CHECK(order2 >= 2.0);
}

TEST_CASE("weight W0") {
  const EquilibriumState s = default_state();
  const VelocityGrid g = build_grid(8, 6.0);
  const Vector w0 = weight_w0(s, g);
  EquilibriumState unit = s;
  unit.rho_inf = 1.0;
  const Vector m1 = maxwellian(unit, g);
  for (int i = 0; i < g.size(); ++i) {
    CHECK(w0[i] > 0.0);
    CHECK(w0[i] * w0[i] == doctest::Approx(m1[i]).epsilon(1e-14));
  }

  EquilibriumState peak;
  peak.T_inf = 1.0 / (2.0 * M_PI);
  peak.u_inf = Vector3(1.0, 2.0, 3.0);
  const VelocityGrid tiny = build_grid(4, 4.0);
  (void)tiny;
  CHECK(std::sqrt(maxwellian_at({1.0, peak.u_inf, peak.T_inf, 1.0}, peak.u_inf)) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mach number") {
  EquilibriumState s;
  s.T_inf = 3.0 / 5.0;
  s.u_inf = Vector3(-2.0, 0.0, 0.0);
  CHECK(mach_number(s) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK_NOTHROW(require_supersonic_inflow(s));

  s.u_inf[0] = -1.0;  // boundary of admissibility is rejected
  CHECK(mach_number(s) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS(require_supersonic_inflow(s));

  s.u_inf[0] = 1.0;
  CHECK(mach_number(s) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS(require_supersonic_inflow(s));
}

TEST_CASE("mach number ignores rho_inf") {
  EquilibriumState a;
  a.T_inf = 0.37;
  a.u_inf = Vector3(-1.73, 0.0, 0.0);
  EquilibriumState b = a;
  a.rho_inf = 1.0;
  b.rho_inf = 123.456;
  CHECK(mach_number(a) == mach_number(b));
}

TEST_CASE("null basis orthonormality and span") {
  const EquilibriumState s = default_state();
  const VelocityGrid g = build_grid(8, default_cutoff(s.T_inf, s.u_inf));
  const NullSpaceBasis basis = build_null_basis(s, g);

  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      const double ip = g.dot(basis.vectors.col(a), basis.vectors.col(b));
      CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-10);
    }

  // Each basis vector is a combination of the five generators.
  const Vector w0 = weight_w0(s, g);
  Matrix gen(g.size(), 5);
  gen.col(0) = w0;
  for (int a = 0; a < 3; ++a) gen.col(1 + a) = w0.cwiseProduct(g.nodes.col(a));
  gen.col(4) = w0.cwiseProduct(g.nodes.rowwise().squaredNorm());
  for (int a = 0; a < 5; ++a) {
    const Vector coeff = gen.colPivHouseholderQr().solve(basis.vectors.col(a));
    const double resid = (gen * coeff - basis.vectors.col(a)).norm() /
                         basis.vectors.col(a).norm();
    CHECK(resid < 1e-8);
  }
}

TEST_CASE("projector properties") {
  const EquilibriumState s = default_state();
  const VelocityGrid g = build_grid(6, default_cutoff(s.T_inf, s.u_inf));
  const NullSpaceBasis basis = build_null_basis(s, g);

  const Vector w0 = weight_w0(s, g);
  CHECK((project_p(w0, basis, g) - w0).norm() / w0.norm() < 1e-10);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 5; ++trial) {
    Vector f(g.size());
    for (int i = 0; i < g.size(); ++i) f[i] = dist(rng);
    const Vector pf = project_p(f, basis, g);
    CHECK((project_p(pf, basis, g) - pf).norm() <= 1e-10 * std::max(1.0, pf.norm()));
    const Vector orth = f - pf;
    CHECK(project_p(orth, basis, g).norm() <= 1e-10 * f.norm());
  }
}

TEST_CASE("projector spectrum is {0,1} with five ones") {
  const EquilibriumState s = default_state();
  const VelocityGrid g = build_grid(6, default_cutoff(s.T_inf, s.u_inf));
  const NullSpaceBasis basis = build_null_basis(s, g);
  const Matrix P = projector_matrix(basis, g);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (P + P.transpose()));
  int ones = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()[i];
    const bool near0 = std::abs(ev) < 1e-8;
    const bool near1 = std::abs(ev - 1.0) < 1e-8;
    CHECK((near0 || near1));
    if (near1) ++ones;
  }
  CHECK(ones == 5);
}
