#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace rtnoise {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};

enum class PauliAxis { I, X, Y, Z };

/// 2x2 identity or Pauli matrix.
Matrix pauli(PauliAxis axis);

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);

/// Matrix exponential (scaling-and-squaring Pade). Throws on non-finite
/// input or extreme norms where the result would overflow.
Matrix expm(const Matrix& a);

/// (1/2) * sum of singular values of (a - b).
double trace_distance(const Matrix& a, const Matrix& b);

/// Largest entrywise deviation from Hermiticity, max |a - a^dag|.
double hermiticity_defect(const Matrix& a);

bool is_hermitian(const Matrix& a, double tol = 1e-12);

/// (a + a^dag)/2. Throws if the defect exceeds max_defect; integrators call
/// this after every step so asymmetry drift cannot accumulate silently.
Matrix symmetrized(const Matrix& a, double max_defect = 1e-9);

/// Density operator, possibly subnormalized: trace = probability weight of
/// the noise state conditioning it. Validated on construction.
class DensityOperator {
 public:
  explicit DensityOperator(Matrix m, bool check_positivity = false);

  const Matrix& matrix() const { return mat_; }
  double weight() const { return mat_.trace().real(); }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  Matrix mat_;
};

DensityOperator pure_state(const Eigen::VectorXcd& psi);

/// Bloch vector of a unit-trace qubit state, v_i = Tr(sigma_i rho)/Tr(rho).
Eigen::Vector3d bloch(const DensityOperator& rho);
DensityOperator from_bloch(const Eigen::Vector3d& v);

/// Column-stacking vectorization and its inverse.
Eigen::VectorXcd vec(const Matrix& m);
Matrix unvec(const Eigen::VectorXcd& v, Eigen::Index dim);

/// Superoperator for rho -> -i [h, rho] in the column-stacking convention.
Matrix commutator_superop(const Matrix& h);

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace rtnoise
