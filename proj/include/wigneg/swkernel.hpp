#pragma once

// Stratonovich-Weyl kernel spectra.
//
// A kernel Delta = U P U^dagger is fixed, up to the unitary frame, by its
// spectrum P = diag(pi_1 >= ... >= pi_N). Admissible spectra satisfy
//
//   sum_i pi_i   = 1
//   sum_i pi_i^2 = N
//
// and a KernelSpectrum stands in for the moduli-space point directly.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wigneg/rng.hpp"

namespace wigneg {

struct EigenBlock {
  double value;
  int multiplicity;
};

/// Distinct kernel eigenvalues in strictly decreasing order, with
/// multiplicities summing to the dimension.
///
/// The constructor checks structure only (ordering, multiplicities). Use
/// master_residuals() or is_admissible() for the trace conditions, so that
/// inadmissible spectra can still be built and inspected.
class KernelSpectrum {
 public:
  KernelSpectrum(int dimension, std::vector<EigenBlock> blocks, std::string label);

  /// Sorts `values` decreasingly and merges values closer than `merge_tol`
  /// into one block.
  static KernelSpectrum from_values(std::vector<double> values, std::string label,
                                    double merge_tol = 1e-12);

  int dimension() const noexcept { return dimension_; }
  std::span<const EigenBlock> blocks() const noexcept { return blocks_; }
  const std::string& label() const noexcept { return label_; }

  /// Eigenvalues repeated by multiplicity, largest first.
  std::vector<double> expanded() const;

  double max_value() const noexcept { return blocks_.front().value; }
  double min_value() const noexcept { return blocks_.back().value; }

 private:
  int dimension_;
  std::vector<EigenBlock> blocks_;
  std::string label_;
};

struct MasterResiduals {
  double trace;     ///< sum m_i pi_i - 1
  double trace_sq;  ///< sum m_i pi_i^2 - N
};

MasterResiduals master_residuals(const KernelSpectrum& spectrum);

bool is_admissible(const KernelSpectrum& spectrum, double trace_tol = 1e-10,
                   double trace_sq_tol = 1e-9);

/// Split of the spectrum into its non-negative and negative parts.
struct KernelMoments {
  double z1;  ///< sum of non-negative eigenvalues
  double z2;  ///< sum of |negative eigenvalues|
  double m1;  ///< sum of squares of non-negative eigenvalues
  double m2;  ///< sum of squares of negative eigenvalues
  int nonnegative_count;
  double t;  ///< sqrt((N - m1) / m1)
};

KernelMoments moments(const KernelSpectrum& spectrum);

/// Two distinct eigenvalues a > 0 > b with multiplicities N-k and k.
/// k = 1 is the SU(N-1)-symmetric kernel. Throws std::domain_error unless
/// N >= 2 and 1 <= k <= N-1.
KernelSpectrum two_block_spectrum(int n, int k);

/// Generic spectrum: Gaussian draw projected onto both trace conditions.
KernelSpectrum random_spectrum(int n, RandomStream& rng);

/// Same as above with a fresh stream from `seed`; labelled "random seed=<seed>".
KernelSpectrum random_spectrum(int n, std::uint64_t seed);

}  // namespace wigneg
