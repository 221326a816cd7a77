#pragma once

#include <functional>

#include "subcov/types.hpp"

namespace subcov::qlinalg {

/// Dense complex Hermitian matrix. The input is symmetrized as (M + M^†)/2
/// on construction, so the stored entries are exactly Hermitian.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& m);

  static HermitianMatrix zero(int dim);
  static HermitianMatrix identity(int dim);
  /// weight * |v><v|
  static HermitianMatrix projector(const CVector& v, double weight = 1.0);
  static HermitianMatrix diagonal(const RVector& d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  cplx operator()(int row, int col) const { return m_(row, col); }

  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.norm(); }
  /// Re <v|M|v>
  double expectation(const CVector& v) const;

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  HermitianMatrix operator*(double s) const;

 private:
  CMatrix m_;
};

/// Eigenvalues ascending; eigenvectors are the columns of `eigenvectors`.
struct EigenSystem {
  RVector eigenvalues;
  CMatrix eigenvectors;

  CVector vector(int i) const { return eigenvectors.col(i); }
};

/// Cyclic Jacobi eigendecomposition. Each eigenvector is phased so that its
/// first component of largest magnitude is real and nonnegative.
EigenSystem hermitian_eig(const HermitianMatrix& m);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
HermitianMatrix psd_project(const HermitianMatrix& m);

/// f applied to the spectrum: V f(Λ) V^†.
HermitianMatrix spectral_map(const HermitianMatrix& m,
                             const std::function<double(double)>& f);

/// S(ρ) = -Tr ρ log2 ρ in bits. ρ must be PSD and unit trace within 1e-10.
double von_neumann_entropy(const HermitianMatrix& rho);

/// -p log2 p with 0 log 0 = 0; p below 1e-300 counts as zero.
double entropy_term(double p);

/// Multiplies v by a global phase so that its first component of largest
/// magnitude is real and nonnegative.
void fix_gauge(Eigen::Ref<CVector> v);

namespace detail {

/// In-place cyclic Jacobi on a Hermitian working matrix `a`, accumulating
/// rotations into `v` (which must be unitary on entry, usually identity).
/// On exit `a` is diagonal to relative precision `rel_tol`. Returns the
/// number of sweeps performed.
int jacobi_diagonalize(CMatrix& a, CMatrix& v, double rel_tol = 1e-14,
                       int max_sweeps = 100);

/// PSD projection of a Hermitian matrix given as a raw Eigen matrix. When
/// `basis` is non-empty it is used as a starting eigenbasis and replaced by
/// the new one, which makes repeated projections of slowly varying matrices
/// cheap.
CMatrix psd_project_raw(const CMatrix& m, CMatrix* basis = nullptr);

}  // namespace detail

}  // namespace subcov::qlinalg
