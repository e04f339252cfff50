#include "wigneg/randstates.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace wigneg {

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix DensityMatrix::validated(ComplexMatrix rho, double tol) {
  if (rho.rows() == 0 || rho.rows() != rho.cols())
    throw std::invalid_argument("density matrix must be square and non-empty");
  if (!rho.allFinite()) throw std::invalid_argument("density matrix has non-finite entries");
  std::ostringstream why;
  if (const double h = hermiticity_defect(rho); h > tol) {
    why << "density matrix is not Hermitian (max |rho - rho^dagger| = " << h << ")";
    throw std::invalid_argument(why.str());
  }
  if (const double tr = rho.trace().real(); std::abs(tr - 1.0) > tol) {
    why << "density matrix trace is " << tr << ", expected 1";
    throw std::invalid_argument(why.str());
  }
  const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm, Eigen::EigenvaluesOnly);
  if (const double lo = eig.eigenvalues().minCoeff(); lo < -tol) {
    why << "density matrix is not positive semidefinite (smallest eigenvalue " << lo << ")";
    throw std::invalid_argument(why.str());
  }
  return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  if (n < 1) throw std::domain_error("dimension must be positive");
  return DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

DensityMatrix DensityMatrix::basis_state(int n, int index) {
  if (n < 1) throw std::domain_error("dimension must be positive");
  if (index < 0 || index >= n) throw std::domain_error("basis index out of range");
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  rho(index, index) = 1.0;
  return DensityMatrix(std::move(rho));
}

UnitaryMatrix UnitaryMatrix::validated(ComplexMatrix u, double tol) {
  if (u.rows() == 0 || u.rows() != u.cols())
    throw std::invalid_argument("unitary must be square and non-empty");
  const auto n = u.rows();
  const double defect = (u.adjoint() * u - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(defect <= tol)) throw std::invalid_argument("matrix is not unitary");
  return UnitaryMatrix(std::move(u));
}

UnitaryMatrix UnitaryMatrix::identity(int n) {
  if (n < 1) throw std::domain_error("dimension must be positive");
  return UnitaryMatrix(ComplexMatrix::Identity(n, n));
}

GinibreMatrix sample_ginibre(int n, RandomStream& rng) {
  if (n < 1) throw std::domain_error("dimension must be positive");
  ComplexMatrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = {re, im};
    }
  return GinibreMatrix(std::move(z));
}

DensityMatrix hs_state(const GinibreMatrix& z) {
  ComplexMatrix rho = z.matrix().adjoint() * z.matrix();
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw std::domain_error("Ginibre matrix is zero");
  rho /= tr;
  // Exact Hermiticity; the product is Hermitian only up to rounding.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

void sample_row_energies(std::span<double> out, RandomStream& rng) {
  const double shape = static_cast<double>(out.size());
  for (auto& e : out) e = rng.gamma(shape, 2.0);
}

RowEnergies sample_row_energies(int n, RandomStream& rng) {
  if (n < 1) throw std::domain_error("dimension must be positive");
  RowEnergies out(static_cast<std::size_t>(n));
  sample_row_energies(out, rng);
  return out;
}

UnitaryMatrix haar_unitary(int n, RandomStream& rng) {
  const auto z = sample_ginibre(n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z.matrix());
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    const double mag = std::abs(d);
    // mag == 0 has probability zero; leave the column as is.
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return UnitaryMatrix(std::move(q));
}

double wigner_value(const DensityMatrix& rho, const KernelSpectrum& spectrum,
                    const UnitaryMatrix& point) {
  const int n = rho.dimension();
  if (spectrum.dimension() != n || point.dimension() != n)
    throw std::invalid_argument("dimension mismatch between state, kernel and phase-space point");
  const ComplexMatrix& u = point.matrix();
  const ComplexMatrix& r = rho.matrix();
  std::complex<double> w = 0.0;
  int col = 0;
  for (const auto& block : spectrum.blocks()) {
    std::complex<double> part = 0.0;
    for (int m = 0; m < block.multiplicity; ++m, ++col) part += u.col(col).dot(r * u.col(col));
    w += block.value * part;
  }
  const double scale = 1.0 + std::abs(w.real());
  if (std::abs(w.imag()) > 1e-10 * scale)
    throw std::logic_error("Wigner value has a non-negligible imaginary part");
  return w.real();
}

}  // namespace wigneg
