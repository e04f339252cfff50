#include "wigneg/mc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace wigneg {

namespace {

// Runs `trials` Bernoulli samples in chunks. `make_counter()` is called once
// per worker and returns a callable (RandomStream&, count) -> negatives.
template <class MakeCounter>
std::uint64_t count_negatives(std::uint64_t trials, std::uint64_t seed, unsigned workers,
                              MakeCounter make_counter) {
  const std::uint64_t chunks = (trials + kChunkSize - 1) / kChunkSize;
  const unsigned threads =
      static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(chunks, 1)));

  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> total{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    try {
      auto counter = make_counter();
      std::uint64_t local = 0;
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        const std::uint64_t begin = c * kChunkSize;
        const std::uint64_t count = std::min(kChunkSize, trials - begin);
        RandomStream rng = RandomStream::substream(seed, c);
        local += counter(rng, count);
      }
      total += local;
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };

  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return total.load();
}

NegativityEstimate finish(std::uint64_t negatives, const RunOptions& options, Method method) {
  const auto ci = wilson_interval(negatives, options.trials, options.z);
  const double p = static_cast<double>(negatives) / static_cast<double>(options.trials);
  return {options.trials, negatives, p, std::min(ci.low, p), std::max(ci.high, p), options.seed,
          method};
}

void check_trials(const RunOptions& options) {
  if (options.trials == 0) throw std::domain_error("trials must be >= 1");
  if (!(options.z > 0.0)) throw std::domain_error("z must be positive");
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::FastGamma: return "fast-gamma";
    case Method::FullGinibre: return "full-ginibre";
    case Method::HaarPhasePoint: return "haar-phase-point";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (Method m : {Method::FastGamma, Method::FullGinibre, Method::HaarPhasePoint})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

WilsonInterval wilson_interval(std::uint64_t negatives, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (negatives > trials) throw std::invalid_argument("negatives exceed trials");
  if (!(z > 0.0)) throw std::invalid_argument("z must be positive");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(negatives) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  double low = std::max(0.0, centre - half);
  double high = std::min(1.0, centre + half);
  if (negatives == 0) low = 0.0;
  if (negatives == trials) high = 1.0;
  return {low, high};
}

NegativityEstimate estimate_global(const KernelSpectrum& spectrum, Method method,
                                   const RunOptions& options) {
  check_trials(options);
  const int n = spectrum.dimension();
  switch (method) {
    case Method::FastGamma: {
      const std::vector<double> weights = spectrum.expanded();
      const double shape = n;
      auto make = [&] {
        return [&](RandomStream& rng, std::uint64_t count) {
          std::uint64_t neg = 0;
          for (std::uint64_t s = 0; s < count; ++s) {
            double w = 0.0;
            for (double pi : weights) w += pi * rng.gamma(shape, 2.0);
            neg += w < 0.0;
          }
          return neg;
        };
      };
      return finish(count_negatives(options.trials, options.seed, options.workers, make), options,
                    method);
    }
    case Method::FullGinibre:
      return estimate_global_at(spectrum, UnitaryMatrix::identity(n), options);
    case Method::HaarPhasePoint:
      break;
  }
  throw std::invalid_argument("estimate_global supports fast-gamma and full-ginibre only");
}

NegativityEstimate estimate_global_at(const KernelSpectrum& spectrum, const UnitaryMatrix& point,
                                      const RunOptions& options) {
  check_trials(options);
  const int n = spectrum.dimension();
  if (point.dimension() != n) throw std::invalid_argument("phase-space point has wrong dimension");
  auto make = [&] {
    return [&](RandomStream& rng, std::uint64_t count) {
      std::uint64_t neg = 0;
      for (std::uint64_t s = 0; s < count; ++s)
        neg += wigner_value(hs_state(sample_ginibre(n, rng)), spectrum, point) < 0.0;
      return neg;
    };
  };
  return finish(count_negatives(options.trials, options.seed, options.workers, make), options,
                Method::FullGinibre);
}

NegativityEstimate estimate_state(const DensityMatrix& rho, const KernelSpectrum& spectrum,
                                  const RunOptions& options) {
  check_trials(options);
  const int n = spectrum.dimension();
  if (rho.dimension() != n) throw std::invalid_argument("state and kernel dimensions differ");
  auto make = [&] {
    return [&](RandomStream& rng, std::uint64_t count) {
      std::uint64_t neg = 0;
      for (std::uint64_t s = 0; s < count; ++s)
        neg += wigner_value(rho, spectrum, haar_unitary(n, rng)) < 0.0;
      return neg;
    };
  };
  return finish(count_negatives(options.trials, options.seed, options.workers, make), options,
                Method::HaarPhasePoint);
}

KernelSpectrum KernelSelector::build(int n) const {
  return kind == Kind::TwoBlock ? two_block_spectrum(n, k) : random_spectrum(n, seed);
}

std::string KernelSelector::k_column() const {
  return kind == Kind::TwoBlock ? std::to_string(k) : "random";
}

bool KernelSelector::valid_for(int n) const {
  return n >= 2 && (kind == Kind::Random || (k >= 1 && k <= n - 1));
}

SweepRecord make_record(int n, const KernelSpectrum& spectrum, std::string k_column,
                        const NegativityEstimate& estimate, double wall_time_s) {
  return {n,
          spectrum.label(),
          std::move(k_column),
          estimate.method,
          estimate.trials,
          estimate.negatives,
          estimate.p_hat,
          estimate.ci_low,
          estimate.ci_high,
          std::nullopt,
          estimate.seed,
          wall_time_s};
}

std::uint64_t point_seed(std::uint64_t master_seed, int n, std::size_t kernel_index) {
  return derive_seed(derive_seed(master_seed, static_cast<std::uint64_t>(n)), kernel_index);
}

SweepPointError::SweepPointError(int n_, std::string kernel_, const std::string& what)
    : std::runtime_error("sweep point N=" + std::to_string(n_) + " kernel=" + kernel_ + ": " + what),
      n(n_),
      kernel(std::move(kernel_)) {}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  if (config.trials == 0) throw std::domain_error("trials must be >= 1");
  std::vector<SweepRecord> records;
  records.reserve(config.dimensions.size() * config.kernels.size());
  for (int n : config.dimensions) {
    for (std::size_t i = 0; i < config.kernels.size(); ++i) {
      const auto& selector = config.kernels[i];
      if (config.skip_invalid && !selector.valid_for(n)) continue;
      try {
        const auto start = std::chrono::steady_clock::now();
        const auto spectrum = selector.build(n);
        RunOptions options{config.trials, point_seed(config.seed, n, i), config.workers, config.z};
        const auto estimate = estimate_global(spectrum, config.method, options);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        records.push_back(make_record(n, spectrum, selector.k_column(), estimate, elapsed.count()));
      } catch (const std::exception& e) {
        throw SweepPointError(n, selector.k_column(), e.what());
      }
    }
  }
  return records;
}

}  // namespace wigneg
