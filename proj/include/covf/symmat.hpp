#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace covf {

// Symmetric d x d matrix with packed upper-triangle storage (row-major,
// i <= j), so entry (i,j) and (j,i) are the same double by construction.
class SymMatrix {
 public:
  explicit SymMatrix(int dim);

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(std::span<const double> entries);
  static SymMatrix diagonal(std::initializer_list<double> entries);

  // From a full row-major d x d array; rejects asymmetry beyond
  // 1e-12 * max|entry| and symmetrizes the representable residue.
  static SymMatrix from_full(int dim, std::span<const double> full);

  static SymMatrix from_packed(int dim, std::span<const double> packed);

  // Convenience for d = 2 literals.
  static SymMatrix sym2(double a11, double a12, double a22);

  int dim() const { return dim_; }
  int packed_size() const { return dim_ * (dim_ + 1) / 2; }

  double operator()(int i, int j) const { return data_[index(i, j)]; }
  void set(int i, int j, double value) { data_[index(i, j)] = value; }

  std::span<const double> packed() const { return data_; }
  std::span<double> packed_mut() { return data_; }

  double trace() const;
  void to_full(std::span<double> out_rowmajor) const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator*=(double scale);

 private:
  int index(int i, int j) const;

  int dim_;
  std::vector<double> data_;
};

// Packed index of entry (i, j) for dimension d; shared with path storage.
int sym_packed_index(int dim, int i, int j);

struct PsdProjection {
  SymMatrix projected;
  double clipped_mass;  // sum of |clipped negative eigenvalues|
};

// Eigenvalues in ascending order.
std::vector<double> sym_eigenvalues(const SymMatrix& a);

// True when the smallest eigenvalue is >= -tol * max(trace, 0).
bool is_psd(const SymMatrix& a, double tol = 1e-10);

// Unique PSD square root via symmetric eigendecomposition. Eigenvalues in
// [-tol*trace, 0) are clipped to zero; anything lower is a NotPSD error.
SymMatrix matrix_sqrt_psd(const SymMatrix& a, double tol = 1e-10);

// Nearest-PSD clip: zero out negative eigenvalues, report the clipped mass.
PsdProjection psd_project(const SymMatrix& a);

}  // namespace covf
