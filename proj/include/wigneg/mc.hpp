#pragma once

// Monte Carlo estimation of Wigner-function negativity.
//
// Work is cut into chunks of kChunkSize samples; chunk c always draws from
// RandomStream::substream(seed, c), and the per-chunk counts are summed. The
// result therefore depends on (seed, trials) only, never on the worker count.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wigneg/randstates.hpp"
#include "wigneg/swkernel.hpp"

namespace wigneg {

inline constexpr std::uint64_t kChunkSize = std::uint64_t{1} << 16;

enum class Method { FastGamma, FullGinibre, HaarPhasePoint };

std::string_view to_string(Method method) noexcept;
/// Throws std::invalid_argument for unknown names.
Method method_from_string(std::string_view name);

struct WilsonInterval {
  double low;
  double high;
};

/// Wilson score interval for `negatives` successes in `trials`.
WilsonInterval wilson_interval(std::uint64_t negatives, std::uint64_t trials, double z = 1.96);

struct NegativityEstimate {
  std::uint64_t trials;
  std::uint64_t negatives;
  double p_hat;
  double ci_low;
  double ci_high;
  std::uint64_t seed;
  Method method;
};

struct RunOptions {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double z = 1.96;
};

/// Fraction of Hilbert-Schmidt states with a negative Wigner value at the
/// phase-space point of the diagonal kernel.
///
/// FastGamma tests sum_i pi_i E_i < 0 on sampled row energies; FullGinibre
/// builds each density matrix and evaluates wigner_value at U = I.
NegativityEstimate estimate_global(const KernelSpectrum& spectrum, Method method,
                                   const RunOptions& options);

/// Full-Ginibre estimate at an arbitrary fixed phase-space point.
NegativityEstimate estimate_global_at(const KernelSpectrum& spectrum, const UnitaryMatrix& point,
                                      const RunOptions& options);

/// Fraction of Haar-random phase-space points where the Wigner function of
/// `rho` is negative.
NegativityEstimate estimate_state(const DensityMatrix& rho, const KernelSpectrum& spectrum,
                                  const RunOptions& options);

struct KernelSelector {
  enum class Kind { TwoBlock, Random };
  Kind kind;
  int k;               // TwoBlock only
  std::uint64_t seed;  // Random only

  static KernelSelector two_block(int k) { return {Kind::TwoBlock, k, 0}; }
  static KernelSelector random(std::uint64_t seed) { return {Kind::Random, 0, seed}; }

  KernelSpectrum build(int n) const;
  /// "1", "2", ... or "random".
  std::string k_column() const;
  bool valid_for(int n) const;
};

struct SweepConfig {
  std::vector<int> dimensions;
  std::vector<KernelSelector> kernels;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  Method method = Method::FastGamma;
  unsigned workers = 1;
  double z = 1.96;
  /// Skip (N, k) pairs with k > N-1 instead of failing on them.
  bool skip_invalid = false;
};

struct SweepRecord {
  int n;
  std::string kernel_label;
  std::string k;
  Method method;
  std::uint64_t trials;
  std::uint64_t negatives;
  double p_hat;
  double ci_low;
  double ci_high;
  std::optional<double> oracle_value;
  std::uint64_t seed;
  double wall_time_s;
};

SweepRecord make_record(int n, const KernelSpectrum& spectrum, std::string k_column,
                        const NegativityEstimate& estimate, double wall_time_s);

/// Seed used for sweep point (n, kernel_index) under `master_seed`.
std::uint64_t point_seed(std::uint64_t master_seed, int n, std::size_t kernel_index);

/// Raised by run_sweep; the message names the failing point.
class SweepPointError : public std::runtime_error {
 public:
  SweepPointError(int n, std::string kernel, const std::string& what);
  int n;
  std::string kernel;
};

/// One record per (dimension, kernel) pair, dimensions outermost. Point i
/// of dimension n runs with point_seed(config.seed, n, i).
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

}  // namespace wigneg
