#include "netduopoly/matrix_exp.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "netduopoly/errors.hpp"

namespace netduopoly {
namespace {

// Degree-13 Pade coefficients and the 1-norm bound below which no scaling
// is needed (Higham, SIAM J. Matrix Anal. Appl. 26(4), 2005).
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

Eigen::MatrixXd pade13(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const auto& b = kPade13;

  const Eigen::MatrixXd u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const Eigen::MatrixXd u =
      a * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Eigen::MatrixXd v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  const Eigen::MatrixXd v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m, double t) {
  if (m.rows() != m.cols()) {
    throw ValidationError("matrix_exponential: matrix is not square");
  }
  if (!m.allFinite()) {
    throw ValidationError("matrix_exponential: matrix has non-finite entries");
  }
  if (!std::isfinite(t) || t < 0.0) {
    throw ValidationError("matrix_exponential: t must be finite and nonnegative");
  }
  const auto n = m.rows();
  if (t == 0.0 || (m.array() == 0.0).all()) {
    return Eigen::MatrixXd::Identity(n, n);
  }

  Eigen::MatrixXd a = m * t;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
    a /= std::ldexp(1.0, squarings);
  }

  Eigen::MatrixXd result = pade13(a);
  for (int k = 0; k < squarings; ++k) {
    result = (result * result).eval();
  }
  return result;
}

}  // namespace netduopoly
