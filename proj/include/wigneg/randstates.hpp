#pragma once

// Random matrices: Ginibre draws, Hilbert-Schmidt density matrices,
// Haar unitaries, and Wigner-function values at a phase-space point.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wigneg/rng.hpp"
#include "wigneg/swkernel.hpp"

namespace wigneg {

using ComplexMatrix = Eigen::MatrixXcd;

/// N x N complex matrix with i.i.d. standard normal real and imaginary parts
/// (so each |z_ij|^2 is chi-square with 2 degrees of freedom).
class GinibreMatrix {
 public:
  explicit GinibreMatrix(ComplexMatrix z) : z_(std::move(z)) {}
  const ComplexMatrix& matrix() const noexcept { return z_; }
  int dimension() const noexcept { return static_cast<int>(z_.rows()); }

 private:
  ComplexMatrix z_;
};

/// Hermitian, positive semidefinite, unit trace.
class DensityMatrix {
 public:
  /// Validates Hermiticity, trace and positivity to `tol`; throws
  /// std::invalid_argument with a description on failure.
  static DensityMatrix validated(ComplexMatrix rho, double tol = 1e-9);

  static DensityMatrix maximally_mixed(int n);

  /// |i><i| for a zero-based basis index.
  static DensityMatrix basis_state(int n, int index);

  const ComplexMatrix& matrix() const noexcept { return rho_; }
  int dimension() const noexcept { return static_cast<int>(rho_.rows()); }

 private:
  explicit DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {}
  friend DensityMatrix hs_state(const GinibreMatrix& z);

  ComplexMatrix rho_;
};

class UnitaryMatrix {
 public:
  /// Throws std::invalid_argument unless U^dagger U = I within `tol`.
  static UnitaryMatrix validated(ComplexMatrix u, double tol = 1e-10);
  static UnitaryMatrix identity(int n);

  const ComplexMatrix& matrix() const noexcept { return u_; }
  int dimension() const noexcept { return static_cast<int>(u_.rows()); }

 private:
  explicit UnitaryMatrix(ComplexMatrix u) : u_(std::move(u)) {}
  friend UnitaryMatrix haar_unitary(int n, RandomStream& rng);

  ComplexMatrix u_;
};

/// Consumes 2N^2 normals: row-major, real part then imaginary part.
GinibreMatrix sample_ginibre(int n, RandomStream& rng);

/// rho = z^dagger z / tr(z^dagger z). Throws std::domain_error for z = 0.
DensityMatrix hs_state(const GinibreMatrix& z);

/// Diagonal of z z^dagger without forming z: N independent Gamma(N, 2)
/// deviates, one per row, drawn in row order.
using RowEnergies = std::vector<double>;
RowEnergies sample_row_energies(int n, RandomStream& rng);
void sample_row_energies(std::span<double> out, RandomStream& rng);

/// QR of a Ginibre matrix with the phases of diag(R) moved into Q.
UnitaryMatrix haar_unitary(int n, RandomStream& rng);

/// tr(rho U P U^dagger), P = diag(spectrum expanded, decreasing).
double wigner_value(const DensityMatrix& rho, const KernelSpectrum& spectrum,
                    const UnitaryMatrix& point);

/// Largest |(A - A^dagger)_ij|.
double hermiticity_defect(const ComplexMatrix& a);

}  // namespace wigneg
