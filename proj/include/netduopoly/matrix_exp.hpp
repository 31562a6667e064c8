#pragma once

#include <Eigen/Dense>

namespace netduopoly {

/// Dense matrix exponential exp(m * t).
///
/// Scaling and squaring around a degree-13 Pade approximant (Higham 2005).
/// Returns the identity exactly when m is zero or t is zero. Throws
/// ValidationError for non-square or non-finite input, or negative t.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m, double t = 1.0);

}  // namespace netduopoly
