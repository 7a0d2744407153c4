#pragma once

#include <vector>

#include "boltzlayer/types.hpp"
#include "boltzlayer/velocity_grid.hpp"

namespace bbl {

/// C^2 cutoff profile: 1 on [0,1], 0 on [2,inf), monotone in between
/// (integrated quadratic B-spline, piecewise cubic).
double mollifier(double s);
double mollifier_deriv(double s);

/// Half-space discretization: geometrically stretched x1 nodes starting at the
/// wall x1 = 0, plus a small set of tangential Fourier modes on a periodic box
/// of side box_length (slab symmetry = the single zero mode).
struct SpatialGrid {
  Vector x;    // n_x nodes, x[0] = 0, strictly increasing up to x_max
  Vector wx;   // trapezoidal quadrature weights
  double x_max = 0.0;
  double stretch = 1.0;

  std::vector<Eigen::Vector2i> imodes;  // integer wave indices (k2, k3)
  std::vector<Vector2> modes;           // wave vectors 2 pi k / box_length
  double box_length = 1.0;

  /// (p, q) mode pairs with imodes[p] + imodes[q] == imodes[k], per k.
  std::vector<std::vector<std::pair<int, int>>> conv_pairs;

  int n_x() const { return static_cast<int>(x.size()); }
  int n_modes() const { return static_cast<int>(modes.size()); }
  bool slab() const {
    return n_modes() == 1 && imodes[0][0] == 0 && imodes[0][1] == 0;
  }
  int find_imode(const Eigen::Vector2i& k) const;

  /// Linear interpolation of a nodal profile at x1; zero outside [0, x_max].
  struct Interp {
    int i0 = -1;  // -1 means "outside, value 0"
    double w0 = 0.0, w1 = 0.0;
  };
  Interp interp(double x1) const;
};

SpatialGrid build_spatial_grid(int n_x, double x_max, double stretch,
                               std::vector<Eigen::Vector2i> imodes, double box_length);

enum class Representation { Plain, Weighted };

/// Values of a distribution on (x1 node, tangential mode, velocity node).
/// Each mode holds an (n_x x n_v) complex matrix; the zero mode of real data
/// stays real-valued.
struct DistributionField {
  std::vector<ComplexMatrix> modes;
  Representation rep = Representation::Plain;
  double time = 0.0;

  int n_modes() const { return static_cast<int>(modes.size()); }
  bool empty() const { return modes.empty(); }
};

DistributionField zero_field(const SpatialGrid& sg, const VelocityGrid& vg,
                             Representation rep = Representation::Plain);

/// y += a * f (shape-checked)
void add_scaled(DistributionField& y, double a, const DistributionField& f);
/// sup over everything of |entries| (debug/NaN guard)
double max_abs(const DistributionField& f);
bool has_nan(const DistributionField& f);

}  // namespace bbl
