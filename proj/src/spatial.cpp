#include "boltzlayer/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bbl {

namespace {

// quadratic B-spline bump on [0,3], integral 1
double bump(double u) {
  if (u <= 0.0 || u >= 3.0) return 0.0;
  if (u < 1.0) return 0.5 * u * u;
  if (u < 2.0) return 0.5 * (-2.0 * u * u + 6.0 * u - 3.0);
  return 0.5 * (3.0 - u) * (3.0 - u);
}

// its antiderivative, 0 at u=0 and 1 at u=3
double bump_integral(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 3.0) return 1.0;
  if (u < 1.0) return u * u * u / 6.0;
  if (u < 2.0) {
    const double v = u - 1.0;
    return 1.0 / 6.0 + 0.5 * (v + v * v - 2.0 * v * v * v / 3.0);
  }
  const double r = 3.0 - u;
  return 1.0 - r * r * r / 6.0;
}

}  // namespace

double mollifier(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  return 1.0 - bump_integral(3.0 * (s - 1.0));
}

double mollifier_deriv(double s) {
  if (s <= 1.0 || s >= 2.0) return 0.0;
  return -3.0 * bump(3.0 * (s - 1.0));
}

int SpatialGrid::find_imode(const Eigen::Vector2i& k) const {
  for (int m = 0; m < n_modes(); ++m)
    if (imodes[m] == k) return m;
  return -1;
}

SpatialGrid::Interp SpatialGrid::interp(double x1) const {
  Interp r;
  if (x1 < 0.0 || x1 > x_max) return r;
  const int n = n_x();
  // index of the last node <= x1
  const double* begin = x.data();
  const double* it = std::upper_bound(begin, begin + n, x1);
  int i = static_cast<int>(it - begin) - 1;
  if (i >= n - 1) {
    r.i0 = n - 1;
    r.w0 = 1.0;
    r.w1 = 0.0;
    return r;
  }
  if (i < 0) i = 0;
  const double h = x[i + 1] - x[i];
  const double t = (x1 - x[i]) / h;
  r.i0 = i;
  r.w0 = 1.0 - t;
  r.w1 = t;
  return r;
}

SpatialGrid build_spatial_grid(int n_x, double x_max, double stretch,
                               std::vector<Eigen::Vector2i> imodes, double box_length) {
  if (n_x < 4) throw std::invalid_argument("spatial grid needs at least 4 nodes");
  if (x_max <= 0.0) throw std::invalid_argument("x_max must be positive");
  if (stretch < 1.0) throw std::invalid_argument("stretching factor must be >= 1");
  if (imodes.empty()) imodes.push_back(Eigen::Vector2i::Zero());
  if (box_length <= 0.0) throw std::invalid_argument("box_length must be positive");

  SpatialGrid g;
  g.x_max = x_max;
  g.stretch = stretch;
  g.box_length = box_length;
  g.imodes = std::move(imodes);

  g.x.resize(n_x);
  if (stretch == 1.0) {
    for (int i = 0; i < n_x; ++i) g.x[i] = x_max * i / (n_x - 1.0);
  } else {
    const double denom = std::pow(stretch, n_x - 1) - 1.0;
    for (int i = 0; i < n_x; ++i)
      g.x[i] = x_max * (std::pow(stretch, i) - 1.0) / denom;
  }
  g.x[0] = 0.0;
  g.x[n_x - 1] = x_max;

  g.wx = Vector::Zero(n_x);
  for (int i = 0; i + 1 < n_x; ++i) {
    const double h = g.x[i + 1] - g.x[i];
    g.wx[i] += 0.5 * h;
    g.wx[i + 1] += 0.5 * h;
  }

  for (const auto& k : g.imodes)
    g.modes.push_back(2.0 * M_PI / box_length * k.cast<double>());

  g.conv_pairs.assign(g.imodes.size(), {});
  for (int k = 0; k < g.n_modes(); ++k)
    for (int p = 0; p < g.n_modes(); ++p)
      for (int q = 0; q < g.n_modes(); ++q)
        if (g.imodes[p] + g.imodes[q] == g.imodes[k]) g.conv_pairs[k].push_back({p, q});
  return g;
}

DistributionField zero_field(const SpatialGrid& sg, const VelocityGrid& vg,
                             Representation rep) {
  DistributionField f;
  f.rep = rep;
  f.modes.assign(sg.n_modes(), ComplexMatrix::Zero(sg.n_x(), vg.size()));
  return f;
}

void add_scaled(DistributionField& y, double a, const DistributionField& f) {
  for (int m = 0; m < y.n_modes(); ++m) y.modes[m] += a * f.modes[m];
}

double max_abs(const DistributionField& f) {
  double v = 0.0;
  for (const auto& m : f.modes) v = std::max(v, m.cwiseAbs().maxCoeff());
  return v;
}

bool has_nan(const DistributionField& f) {
  for (const auto& m : f.modes)
    if (!m.allFinite()) return true;
  return false;
}

}  // namespace bbl
