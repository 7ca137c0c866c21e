#include "covf/symmat.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "covf/error.hpp"

namespace covf {

namespace {

Eigen::MatrixXd to_eigen(const SymMatrix& a) {
  const int d = a.dim();
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = a(i, j);
  return m;
}

SymMatrix from_eigen_symmetric(const Eigen::MatrixXd& m) {
  const int d = static_cast<int>(m.rows());
  SymMatrix out(d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) out.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return out;
}

}  // namespace

int sym_packed_index(int dim, int i, int j) {
  if (i > j) std::swap(i, j);
  // row-major upper triangle: row i starts after i rows of lengths d, d-1, ...
  return i * dim - i * (i - 1) / 2 + (j - i);
}

SymMatrix::SymMatrix(int dim) : dim_(dim) {
  require(dim >= 1, errc::invalid_params, "matrix dimension must be >= 1");
  data_.assign(packed_size(), 0.0);
}

int SymMatrix::index(int i, int j) const { return sym_packed_index(dim_, i, j); }

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> entries) {
  SymMatrix m(static_cast<int>(entries.size()));
  for (int i = 0; i < m.dim(); ++i) m.set(i, i, entries[i]);
  return m;
}

SymMatrix SymMatrix::diagonal(std::initializer_list<double> entries) {
  return diagonal(std::span<const double>(entries.begin(), entries.size()));
}

SymMatrix SymMatrix::from_full(int dim, std::span<const double> full) {
  require(static_cast<int>(full.size()) == dim * dim, errc::invalid_params,
          "full matrix buffer has wrong size");
  double scale = 0.0;
  for (double v : full) scale = std::max(scale, std::abs(v));
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const double upper = full[i * dim + j];
      const double lower = full[j * dim + i];
      require(std::abs(upper - lower) <= 1e-12 * std::max(scale, 1.0),
              errc::non_symmetric, "matrix is not symmetric");
      m.set(i, j, 0.5 * (upper + lower));
    }
  }
  return m;
}

SymMatrix SymMatrix::from_packed(int dim, std::span<const double> packed) {
  SymMatrix m(dim);
  require(packed.size() == m.data_.size(), errc::invalid_params,
          "packed buffer has wrong size");
  std::copy(packed.begin(), packed.end(), m.data_.begin());
  return m;
}

SymMatrix SymMatrix::sym2(double a11, double a12, double a22) {
  SymMatrix m(2);
  m.set(0, 0, a11);
  m.set(0, 1, a12);
  m.set(1, 1, a22);
  return m;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

void SymMatrix::to_full(std::span<double> out) const {
  require(static_cast<int>(out.size()) == dim_ * dim_, errc::invalid_params,
          "output buffer has wrong size");
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) out[i * dim_ + j] = (*this)(i, j);
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  require(other.dim_ == dim_, errc::invalid_params, "dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

std::vector<double> sym_eigenvalues(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      to_eigen(a), Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, errc::no_convergence,
          "eigendecomposition failed");
  std::vector<double> out(a.dim());
  for (int i = 0; i < a.dim(); ++i) out[i] = solver.eigenvalues()[i];
  return out;
}

bool is_psd(const SymMatrix& a, double tol) {
  const auto eig = sym_eigenvalues(a);
  return eig.front() >= -tol * std::max(a.trace(), 0.0);
}

SymMatrix matrix_sqrt_psd(const SymMatrix& a, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(a));
  require(solver.info() == Eigen::Success, errc::no_convergence,
          "eigendecomposition failed");
  const double floor = -tol * std::max(a.trace(), 0.0);
  Eigen::VectorXd lambda = solver.eigenvalues();
  for (int i = 0; i < lambda.size(); ++i) {
    require(lambda[i] >= floor, errc::not_psd,
            "matrix has eigenvalue below the PSD tolerance");
    lambda[i] = std::sqrt(std::max(lambda[i], 0.0));
  }
  const Eigen::MatrixXd root = solver.eigenvectors() * lambda.asDiagonal() *
                               solver.eigenvectors().transpose();
  return from_eigen_symmetric(root);
}

PsdProjection psd_project(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(a));
  require(solver.info() == Eigen::Success, errc::no_convergence,
          "eigendecomposition failed");
  Eigen::VectorXd lambda = solver.eigenvalues();
  double clipped = 0.0;
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < 0.0) {
      clipped += -lambda[i];
      lambda[i] = 0.0;
    }
  }
  if (clipped == 0.0) return {a, 0.0};
  const Eigen::MatrixXd proj = solver.eigenvectors() * lambda.asDiagonal() *
                               solver.eigenvectors().transpose();
  return {from_eigen_symmetric(proj), clipped};
}

}  // namespace covf
