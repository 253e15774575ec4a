#include "rtnoise/operators.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace rtnoise {

Matrix pauli(PauliAxis axis) {
  Matrix m(2, 2);
  switch (axis) {
    case PauliAxis::I:
      m << 1, 0, 0, 1;
      break;
    case PauliAxis::X:
      m << 0, 1, 1, 0;
      break;
    case PauliAxis::Y:
      m << 0, -kImag, kImag, 0;
      break;
    case PauliAxis::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

static void require_same_dim(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("operator dimension mismatch");
  }
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b);
  return a * b - b * a;
}

Matrix anticommutator(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b);
  return a * b + b * a;
}

Matrix expm(const Matrix& a) {
  if (!a.allFinite()) {
    throw std::invalid_argument("expm: non-finite entries");
  }
  const Matrix e = a.exp();
  if (!e.allFinite()) {
    throw std::overflow_error("expm: result overflowed double range");
  }
  return e;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b);
  Eigen::JacobiSVD<Matrix> svd(a - b);
  return 0.5 * svd.singularValues().sum();
}

double hermiticity_defect(const Matrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& a, double tol) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

Matrix symmetrized(const Matrix& a, double max_defect) {
  if (hermiticity_defect(a) > max_defect) {
    throw std::runtime_error("hermiticity drift beyond tolerance");
  }
  return 0.5 * (a + a.adjoint());
}

DensityOperator::DensityOperator(Matrix m, bool check_positivity) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols()) {
    throw std::invalid_argument("density operator must be square");
  }
  if (!is_hermitian(mat_, 1e-12)) {
    throw std::invalid_argument("density operator must be Hermitian");
  }
  const Complex tr = mat_.trace();
  if (std::abs(tr.imag()) > 1e-12 || tr.real() < -1e-12 || tr.real() > 1.0 + 1e-9) {
    throw std::invalid_argument("density operator trace must be real in [0, 1]");
  }
  if (check_positivity) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_);
    if (es.eigenvalues().minCoeff() < -1e-10) {
      throw std::invalid_argument("density operator has negative eigenvalues");
    }
  }
}

DensityOperator pure_state(const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd n = psi / psi.norm();
  return DensityOperator(n * n.adjoint());
}

Eigen::Vector3d bloch(const DensityOperator& rho) {
  if (rho.dim() != 2) {
    throw std::invalid_argument("bloch: qubit states only");
  }
  const Matrix& m = rho.matrix();
  const double tr = rho.weight();
  Eigen::Vector3d v;
  v << (pauli(PauliAxis::X) * m).trace().real() / tr,
      (pauli(PauliAxis::Y) * m).trace().real() / tr,
      (pauli(PauliAxis::Z) * m).trace().real() / tr;
  return v;
}

DensityOperator from_bloch(const Eigen::Vector3d& v) {
  if (v.norm() > 1.0 + 1e-12) {
    throw std::invalid_argument("from_bloch: vector outside the Bloch ball");
  }
  Matrix m = 0.5 * (pauli(PauliAxis::I) + v.x() * pauli(PauliAxis::X) +
                    v.y() * pauli(PauliAxis::Y) + v.z() * pauli(PauliAxis::Z));
  return DensityOperator(symmetrized(m, 1e-12));
}

Eigen::VectorXcd vec(const Matrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Matrix unvec(const Eigen::VectorXcd& v, Eigen::Index dim) {
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix commutator_superop(const Matrix& h) {
  const Eigen::Index d = h.rows();
  Matrix id = Matrix::Identity(d, d);
  return -kImag * (kron(id, h) - kron(h.transpose(), id));
}

}  // namespace rtnoise
