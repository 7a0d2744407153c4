#pragma once

#include <Eigen/Dense>
#include <complex>

namespace bbl {

using Scalar = double;
using Complex = std::complex<double>;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using Vector3 = Eigen::Vector3d;
using Vector2 = Eigen::Vector2d;

/// ⟨ξ⟩ = 1 + |ξ| velocity weight of the weighted sup norms.
inline double angle_bracket(const Vector3& xi) { return 1.0 + xi.norm(); }

}  // namespace bbl
