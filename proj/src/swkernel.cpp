#include "wigneg/swkernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace wigneg {

KernelSpectrum::KernelSpectrum(int dimension, std::vector<EigenBlock> blocks, std::string label)
    : dimension_(dimension), blocks_(std::move(blocks)), label_(std::move(label)) {
  if (dimension_ < 1) throw std::domain_error("kernel dimension must be positive");
  if (blocks_.empty()) throw std::invalid_argument("kernel spectrum has no eigenvalues");
  int total = 0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].multiplicity < 1)
      throw std::invalid_argument("eigenvalue multiplicity must be positive");
    if (!std::isfinite(blocks_[i].value))
      throw std::invalid_argument("eigenvalue is not finite");
    if (i > 0 && !(blocks_[i].value < blocks_[i - 1].value))
      throw std::invalid_argument("eigenvalues must be strictly decreasing");
    total += blocks_[i].multiplicity;
  }
  if (total != dimension_)
    throw std::invalid_argument("multiplicities sum to " + std::to_string(total) +
                                ", expected " + std::to_string(dimension_));
}

KernelSpectrum KernelSpectrum::from_values(std::vector<double> values, std::string label,
                                           double merge_tol) {
  if (values.empty()) throw std::invalid_argument("kernel spectrum has no eigenvalues");
  std::sort(values.begin(), values.end(), std::greater<>());
  std::vector<EigenBlock> blocks;
  for (double v : values) {
    if (!blocks.empty() && blocks.back().value - v <= merge_tol)
      ++blocks.back().multiplicity;
    else
      blocks.push_back({v, 1});
  }
  return KernelSpectrum(static_cast<int>(values.size()), std::move(blocks), std::move(label));
}

std::vector<double> KernelSpectrum::expanded() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(dimension_));
  for (const auto& b : blocks_) out.insert(out.end(), static_cast<std::size_t>(b.multiplicity), b.value);
  return out;
}

MasterResiduals master_residuals(const KernelSpectrum& spectrum) {
  double s1 = 0.0, s2 = 0.0;
  for (const auto& b : spectrum.blocks()) {
    s1 += b.multiplicity * b.value;
    s2 += b.multiplicity * b.value * b.value;
  }
  return {s1 - 1.0, s2 - spectrum.dimension()};
}

bool is_admissible(const KernelSpectrum& spectrum, double trace_tol, double trace_sq_tol) {
  const auto r = master_residuals(spectrum);
  return spectrum.dimension() >= 2 && std::abs(r.trace) < trace_tol &&
         std::abs(r.trace_sq) < trace_sq_tol;
}

KernelMoments moments(const KernelSpectrum& spectrum) {
  KernelMoments m{0.0, 0.0, 0.0, 0.0, 0, 0.0};
  for (const auto& b : spectrum.blocks()) {
    const double sq = b.multiplicity * b.value * b.value;
    if (b.value >= 0.0) {
      m.z1 += b.multiplicity * b.value;
      m.m1 += sq;
      m.nonnegative_count += b.multiplicity;
    } else {
      m.z2 += b.multiplicity * -b.value;
      m.m2 += sq;
    }
  }
  // m1 > 0 for any admissible spectrum since z1 = 1 + z2 >= 1.
  m.t = m.m1 > 0.0 ? std::sqrt(std::max(0.0, spectrum.dimension() - m.m1) / m.m1) : 0.0;
  return m;
}

KernelSpectrum two_block_spectrum(int n, int k) {
  if (n < 2) throw std::domain_error("N must be >= 2");
  if (k < 1 || k > n - 1) throw std::domain_error("k must satisfy 1 <= k <= N-1");
  const double nd = n, kd = k, rest = n - k;
  // Exact in double for every N that fits in memory: the product is an integer < 2^53.
  const double root = std::sqrt(kd * rest * (nd - 1.0) * (nd + 1.0));
  const double upper = (rest + root) / (nd * rest);
  const double lower = (kd - root) / (kd * nd);
  return KernelSpectrum(n, {{upper, n - k}, {lower, k}},
                        "two-block k=" + std::to_string(k));
}

KernelSpectrum random_spectrum(int n, RandomStream& rng) {
  if (n < 2) throw std::domain_error("N must be >= 2");
  const double nd = n;
  std::vector<double> d(static_cast<std::size_t>(n));
  double ss = 0.0;
  while (ss <= 0.0) {
    double mean = 0.0;
    for (auto& g : d) {
      g = rng.normal();
      mean += g;
    }
    mean /= nd;
    ss = 0.0;
    for (auto& g : d) {
      g -= mean;
      ss += g * g;
    }
  }
  // Mean 1/N fixes the trace; the spread sets sum pi^2 = 1/N + c^2 ss = N.
  const double c = std::sqrt((nd - 1.0 / nd) / ss);
  for (auto& g : d) g = 1.0 / nd + c * g;
  return KernelSpectrum::from_values(std::move(d), "random");
}

KernelSpectrum random_spectrum(int n, std::uint64_t seed) {
  RandomStream rng(seed);
  auto s = random_spectrum(n, rng);
  return KernelSpectrum(s.dimension(), {s.blocks().begin(), s.blocks().end()},
                        "random seed=" + std::to_string(seed));
}

}  // namespace wigneg
